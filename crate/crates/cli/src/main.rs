use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use threshscope_core::io::{
    read_fixture, read_object_counts, read_predictions, write_predictions, write_reports, InputDigest, Manifest,
    OutputFormat, ReportBundle, RobustAnalysis, RunMetadata, Section,
};
use threshscope_core::sweep::run_sweep;
use threshscope_core::{
    class_distribution, compare_against, compare_datasets, densities, find_peaks, generate, load_landscape_fixture,
    pr_curve, pr_curves, ComplexityWeights, ConfigError, EmptyF1, EvalSchema, EvalSet, IoError, MetricLandscape,
    ObjectCounts, PrError, SweepConfig, SynthSpec, Task,
};

const EXIT_INTERNAL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_USAGE: u8 = 64;

/// Threshold sensitivity analysis for two-task multi-label classifier scores.
///
/// Exit status: 0 success, 1 internal or filesystem error, 2 invalid input or
/// configuration, 64 usage error. Reports go to files; stdout gets a one-line
/// summary and stderr gets diagnostics.
#[derive(Parser)]
#[command(name = "threshscope", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a shared threshold over a grid and analyse peaks and the robust region.
    Sweep(SweepArgs),
    /// Precision-recall curves and average precision per class.
    Pr(PrArgs),
    /// Object densities, complexity scores and cross-dataset ratios.
    Complexity(ComplexityArgs),
    /// Per-class positive-label counts for both tasks.
    Distribution(DistributionArgs),
    /// Run every analysis the given inputs allow and bundle the results.
    Report(ReportArgs),
    /// Write a seeded synthetic predictions file.
    Synth(SynthArgs),
}

#[derive(Args)]
struct GridArgs {
    /// Lowest threshold of the grid.
    #[arg(long, default_value_t = 0.1)]
    tau_min: f64,
    /// Highest threshold of the grid.
    #[arg(long, default_value_t = 0.9)]
    tau_max: f64,
    /// Grid spacing; must divide tau-max minus tau-min.
    #[arg(long, default_value_t = 0.1)]
    step: f64,
}

#[derive(Args)]
struct SweepOptions {
    #[command(flatten)]
    grid: GridArgs,
    /// Relative tolerance of the robust region: a threshold qualifies when every
    /// metric is at least (1 - tol) times its peak. The 1% reading is always
    /// reported alongside.
    #[arg(long, default_value_t = 0.03)]
    tol: f64,
    /// F1 of a sample or class with no positives and no predictions.
    #[arg(long, value_enum, default_value_t = EmptyF1Arg::One)]
    empty_f1: EmptyF1Arg,
}

#[derive(Args)]
struct WeightArgs {
    /// Complexity weight of pedestrian density.
    #[arg(long, default_value_t = 1.5)]
    w_pedestrian: f64,
    /// Complexity weight of rider density.
    #[arg(long, default_value_t = 1.3)]
    w_rider: f64,
    /// Complexity weight of vehicle density.
    #[arg(long, default_value_t = 1.0)]
    w_vehicle: f64,
}

#[derive(Args)]
struct PredictionInput {
    /// Predictions JSONL file.
    #[arg(long)]
    predictions: PathBuf,
    /// Schema JSON file; needed when the predictions file has no schema header.
    #[arg(long)]
    schema: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Predictions JSONL file to sweep.
    #[arg(
        long,
        conflicts_with = "landscape_fixture",
        required_unless_present = "landscape_fixture"
    )]
    predictions: Option<PathBuf>,
    /// Precomputed sensitivity table (CSV, F1 in percent) to analyse instead.
    #[arg(long)]
    landscape_fixture: Option<PathBuf>,
    /// Schema JSON file; needed when the predictions file has no schema header.
    #[arg(long, requires = "predictions")]
    schema: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    opts: SweepOptions,
    /// Format of tabular report files; SVG, run.json and manifest.json are always written.
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Args)]
struct PrArgs {
    #[command(flatten)]
    input: PredictionInput,
    /// Task whose classes are analysed.
    #[arg(long, value_enum)]
    task: TaskArg,
    /// Class index within the task; all classes when omitted.
    #[arg(long)]
    class: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    grid: GridArgs,
    /// Format of tabular report files; SVG, run.json and manifest.json are always written.
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Args)]
struct ComplexityArgs {
    /// JSON array of {dataset_name, images, pedestrians, riders, vehicles}.
    #[arg(long)]
    counts: PathBuf,
    /// Only compare against this dataset; all ordered pairs when omitted.
    #[arg(long)]
    baseline: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    weights: WeightArgs,
    /// Format of tabular report files; SVG, run.json and manifest.json are always written.
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Args)]
struct DistributionArgs {
    #[command(flatten)]
    input: PredictionInput,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Format of tabular report files; SVG, run.json and manifest.json are always written.
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("inputs").multiple(true).required(true))]
struct ReportArgs {
    /// Predictions JSONL file (enables sweep, PR curves and distributions).
    #[arg(long, group = "inputs", conflicts_with = "landscape_fixture")]
    predictions: Option<PathBuf>,
    /// Schema JSON file; needed when the predictions file has no schema header.
    #[arg(long, requires = "predictions")]
    schema: Option<PathBuf>,
    /// Precomputed sensitivity table (enables peaks and the robust region).
    #[arg(long, group = "inputs")]
    landscape_fixture: Option<PathBuf>,
    /// Object counts JSON (enables densities and comparisons).
    #[arg(long, group = "inputs")]
    counts: Option<PathBuf>,
    /// Only compare against this dataset; all ordered pairs when omitted.
    #[arg(long, requires = "counts")]
    baseline: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    opts: SweepOptions,
    #[command(flatten)]
    weights: WeightArgs,
    /// Format of tabular report files; SVG, run.json and manifest.json are always written.
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Args)]
struct SynthArgs {
    /// PRNG seed (xoshiro256++ seeded through SplitMix64).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of records.
    #[arg(long, default_value_t = 1000)]
    n: usize,
    /// 0 makes scores independent of labels, 1 makes score equal label.
    #[arg(long, default_value_t = 0.5)]
    separability: f64,
    /// Probability that any given class label is positive.
    #[arg(long, default_value_t = 0.3)]
    positive_rate: f64,
    /// Action classes; the named driving schema is used at the default sizes.
    #[arg(long, default_value_t = EvalSchema::driving_default().action_task.len())]
    action_classes: usize,
    /// Reason classes.
    #[arg(long, default_value_t = EvalSchema::driving_default().reason_task.len())]
    reason_classes: usize,
    /// Output JSONL file (written with a schema header line).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmptyF1Arg {
    One,
    Zero,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TaskArg {
    Action,
    Reason,
}

impl From<EmptyF1Arg> for EmptyF1 {
    fn from(a: EmptyF1Arg) -> Self {
        match a {
            EmptyF1Arg::One => EmptyF1::One,
            EmptyF1Arg::Zero => EmptyF1::Zero,
        }
    }
}

impl From<FormatArg> for OutputFormat {
    fn from(a: FormatArg) -> Self {
        match a {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

impl From<TaskArg> for Task {
    fn from(a: TaskArg) -> Self {
        match a {
            TaskArg::Action => Task::Action,
            TaskArg::Reason => Task::Reason,
        }
    }
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Input(format!("invalid configuration: {e}"))
    }
}

impl From<PrError> for Failure {
    fn from(e: PrError) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

impl GridArgs {
    fn config(&self, tol: f64) -> Result<SweepConfig, ConfigError> {
        let cfg = SweepConfig {
            tau_min: self.tau_min,
            tau_max: self.tau_max,
            step: self.step,
            robust_rel_tol: tol,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn json(&self) -> Value {
        json!({"tau_min": self.tau_min, "tau_max": self.tau_max, "step": self.step})
    }
}

impl WeightArgs {
    fn weights(&self) -> Result<ComplexityWeights, Failure> {
        let w = ComplexityWeights {
            pedestrian: self.w_pedestrian,
            rider: self.w_rider,
            vehicle: self.w_vehicle,
        };
        if [w.pedestrian, w.rider, w.vehicle]
            .iter()
            .any(|x| !(x.is_finite() && *x >= 0.0))
        {
            return Err(Failure::Input(
                "complexity weights must be finite and non-negative".into(),
            ));
        }
        Ok(w)
    }

    fn json(&self) -> Value {
        json!({"pedestrian": self.w_pedestrian, "rider": self.w_rider, "vehicle": self.w_vehicle})
    }
}

fn load_predictions(input: &PredictionInput, meta: &mut RunMetadata) -> Result<EvalSet, Failure> {
    let es = read_predictions(&input.predictions, input.schema.as_deref())?;
    meta.inputs
        .push(InputDigest::of_file("predictions", &input.predictions)?);
    if let Some(s) = &input.schema {
        meta.inputs.push(InputDigest::of_file("schema", s)?);
    }
    Ok(es)
}

fn load_fixture(path: &Path, cfg: &SweepConfig, meta: &mut RunMetadata) -> Result<MetricLandscape, Failure> {
    let table = read_fixture(path)?;
    let ls = load_landscape_fixture(&table, &cfg.grid()?).map_err(IoError::from)?;
    meta.inputs.push(InputDigest::of_file("landscape_fixture", path)?);
    Ok(ls)
}

fn analyse_landscape(bundle: &mut ReportBundle, ls: MetricLandscape, tol: f64) {
    let robust = RobustAnalysis::of(&ls, tol);
    if robust.configured.thresholds != robust.one_percent.thresholds {
        bundle.metadata.notes.push(format!(
            "robust region differs between tolerance {tol} ({:?}) and 1% ({:?})",
            robust.configured.thresholds, robust.one_percent.thresholds
        ));
    }
    bundle.peaks = Section::Present(find_peaks(&ls));
    bundle.robust = Section::Present(robust);
    bundle.landscape = Section::Present(ls);
}

fn density_sections(
    bundle: &mut ReportBundle,
    counts: Vec<ObjectCounts>,
    weights: &ComplexityWeights,
    baseline: Option<&str>,
) -> Result<(), Failure> {
    let mut rows = Vec::with_capacity(counts.len());
    for c in counts {
        let d = densities(&c, weights).map_err(IoError::from)?;
        rows.push((c, d));
    }
    let named: Vec<_> = rows.iter().map(|(c, d)| (c.dataset_name.clone(), *d)).collect();
    bundle.comparisons = if named.len() < 2 {
        Section::skipped("fewer than two datasets")
    } else {
        let cmp = match baseline {
            Some(b) => compare_against(&named, b),
            None => compare_datasets(&named),
        };
        Section::Present(cmp.map_err(IoError::from)?)
    };
    bundle.densities = Section::Present(rows);
    Ok(())
}

fn finish(bundle: &ReportBundle, out: &Path, format: FormatArg) -> Result<Manifest, Failure> {
    Ok(write_reports(bundle, out, format.into())?)
}

fn files_written(m: &Manifest, out: &Path) -> String {
    // manifest.json itself is not listed
    format!("{} files written to {}", m.files.len() + 1, out.display())
}

fn region_summary(bundle: &ReportBundle) -> String {
    match bundle.robust.as_present() {
        Some(r) => format!(
            "robust region {:?} at tol {}",
            r.configured.thresholds, r.configured.rel_tol
        ),
        None => "no robust region".into(),
    }
}

fn cmd_sweep(a: &SweepArgs) -> Outcome {
    let cfg = a.opts.grid.config(a.opts.tol)?;
    let empty: EmptyF1 = a.opts.empty_f1.into();
    let config = json!({
        "grid": a.opts.grid.json(),
        "robust_rel_tol": a.opts.tol,
        "empty_f1": empty.to_string(),
    });
    let mut meta = RunMetadata::new("sweep", config);
    let ls = match (&a.predictions, &a.landscape_fixture) {
        (Some(p), None) => {
            let input = PredictionInput {
                predictions: p.clone(),
                schema: a.schema.clone(),
            };
            let es = load_predictions(&input, &mut meta)?;
            run_sweep(&es, &cfg, empty)?
        }
        (None, Some(f)) => load_fixture(f, &cfg, &mut meta)?,
        _ => unreachable!("clap enforces exactly one input"),
    };
    let dim = ls.dim();
    let mut bundle = ReportBundle::empty(meta, "not produced by sweep");
    analyse_landscape(&mut bundle, ls, a.opts.tol);
    let m = finish(&bundle, &a.out, a.format)?;
    Ok(format!(
        "sweep: {dim}x{dim} landscape, {}; {}",
        region_summary(&bundle),
        files_written(&m, &a.out)
    ))
}

fn cmd_pr(a: &PrArgs) -> Outcome {
    let cfg = a.grid.config(SweepConfig::default().robust_rel_tol)?;
    let grid = cfg.grid()?;
    let task: Task = a.task.into();
    let config = json!({"grid": a.grid.json(), "task": task, "class": a.class});
    let mut meta = RunMetadata::new("pr", config);
    let es = load_predictions(&a.input, &mut meta)?;
    let curves = match a.class {
        Some(k) => vec![pr_curve(&es, task, k, &grid)?],
        None => pr_curves(&es, task, &grid),
    };
    let undefined = curves.iter().filter(|c| c.average_precision.is_none()).count();
    if undefined > 0 {
        meta.notes.push(format!(
            "{undefined} class(es) have no positive labels; their AP is undefined"
        ));
    }
    let mut bundle = ReportBundle::empty(meta, "not produced by pr");
    let n = curves.len();
    bundle.pr_curves = Section::Present(curves);
    let m = finish(&bundle, &a.out, a.format)?;
    Ok(format!("pr: {n} {task} curve(s); {}", files_written(&m, &a.out)))
}

fn cmd_complexity(a: &ComplexityArgs) -> Outcome {
    let weights = a.weights.weights()?;
    let config = json!({"weights": a.weights.json(), "baseline": a.baseline});
    let mut meta = RunMetadata::new("complexity", config);
    let counts = read_object_counts(&a.counts)?;
    meta.inputs.push(InputDigest::of_file("counts", &a.counts)?);
    let n = counts.len();
    let mut bundle = ReportBundle::empty(meta, "not produced by complexity");
    density_sections(&mut bundle, counts, &weights, a.baseline.as_deref())?;
    let m = finish(&bundle, &a.out, a.format)?;
    Ok(format!("complexity: {n} dataset(s); {}", files_written(&m, &a.out)))
}

fn cmd_distribution(a: &DistributionArgs) -> Outcome {
    let mut meta = RunMetadata::new("distribution", json!({}));
    let es = load_predictions(&a.input, &mut meta)?;
    let mut bundle = ReportBundle::empty(meta, "not produced by distribution");
    bundle.distributions = Section::Present(Task::BOTH.iter().map(|&t| class_distribution(&es, t)).collect());
    let m = finish(&bundle, &a.out, a.format)?;
    Ok(format!(
        "distribution: {} records; {}",
        es.len(),
        files_written(&m, &a.out)
    ))
}

fn cmd_report(a: &ReportArgs) -> Outcome {
    let cfg = a.opts.grid.config(a.opts.tol)?;
    let weights = a.weights.weights()?;
    let empty: EmptyF1 = a.opts.empty_f1.into();
    let config = json!({
        "grid": a.opts.grid.json(),
        "robust_rel_tol": a.opts.tol,
        "empty_f1": empty.to_string(),
        "weights": a.weights.json(),
        "baseline": a.baseline,
    });
    let mut meta = RunMetadata::new("report", config);

    let es = match &a.predictions {
        Some(p) => {
            let input = PredictionInput {
                predictions: p.clone(),
                schema: a.schema.clone(),
            };
            Some(load_predictions(&input, &mut meta)?)
        }
        None => None,
    };
    let ls = match (&es, &a.landscape_fixture) {
        (Some(es), _) => Some(run_sweep(es, &cfg, empty)?),
        (None, Some(f)) => Some(load_fixture(f, &cfg, &mut meta)?),
        (None, None) => None,
    };
    let counts = match &a.counts {
        Some(c) => {
            let counts = read_object_counts(c)?;
            meta.inputs.push(InputDigest::of_file("counts", c)?);
            Some(counts)
        }
        None => None,
    };

    let mut bundle = ReportBundle::empty(meta, "input not provided");
    if let Some(ls) = ls {
        analyse_landscape(&mut bundle, ls, a.opts.tol);
    }
    if let Some(es) = &es {
        let grid = cfg.grid()?;
        let curves = Task::BOTH.iter().flat_map(|&t| pr_curves(es, t, &grid)).collect();
        bundle.pr_curves = Section::Present(curves);
        bundle.distributions = Section::Present(Task::BOTH.iter().map(|&t| class_distribution(es, t)).collect());
    } else if a.landscape_fixture.is_some() {
        bundle.pr_curves = Section::skipped("a landscape fixture carries no per-record scores");
        bundle.distributions = Section::skipped("a landscape fixture carries no per-record labels");
    }
    if let Some(counts) = counts {
        density_sections(&mut bundle, counts, &weights, a.baseline.as_deref())?;
    }
    let m = finish(&bundle, &a.out, a.format)?;
    let present = [
        bundle.landscape.as_present().is_some(),
        bundle.pr_curves.as_present().is_some(),
        bundle.densities.as_present().is_some(),
        bundle.distributions.as_present().is_some(),
    ]
    .iter()
    .filter(|&&p| p)
    .count();
    Ok(format!(
        "report: {present} of 4 analyses run; {}",
        files_written(&m, &a.out)
    ))
}

fn cmd_synth(a: &SynthArgs) -> Outcome {
    let default = EvalSchema::driving_default();
    let schema = if (a.action_classes, a.reason_classes) == (default.action_task.len(), default.reason_task.len()) {
        default
    } else {
        EvalSchema::numbered(a.action_classes, a.reason_classes)
            .map_err(|e| Failure::Input(format!("invalid schema: {e}")))?
    };
    let spec = SynthSpec::uniform(a.seed, a.n, schema, a.separability, a.positive_rate);
    let es = generate(&spec)?;
    write_predictions(&es, &a.out, true)?;
    Ok(format!(
        "synth: {} records (seed {}) written to {}",
        es.len(),
        a.seed,
        a.out.display()
    ))
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Sweep(a) => cmd_sweep(a),
        Command::Pr(a) => cmd_pr(a),
        Command::Complexity(a) => cmd_complexity(a),
        Command::Distribution(a) => cmd_distribution(a),
        Command::Report(a) => cmd_report(a),
        Command::Synth(a) => cmd_synth(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}
