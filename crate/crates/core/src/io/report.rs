use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::svg::{render_landscape_svg, render_pr_svg};
use super::{read_bytes, sha256_hex, write_atomic};
use crate::complexity::{DatasetComparison, DensityReport, DistributionTable, ObjectCounts};
use crate::error::IoError;
use crate::model::Task;
use crate::pr::PrCurve;
use crate::sweep::{robust_region, FixtureTable, Metric, MetricLandscape, PeakReport, RobustRegion};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

/// A report section that is either present or explicitly skipped.
#[derive(Debug, Clone, PartialEq)]
pub enum Section<T> {
    Present(T),
    Skipped(String),
}

impl<T> Section<T> {
    pub fn skipped(reason: impl Into<String>) -> Self {
        Section::Skipped(reason.into())
    }

    pub fn as_present(&self) -> Option<&T> {
        match self {
            Section::Present(v) => Some(v),
            Section::Skipped(_) => None,
        }
    }

    fn status(&self) -> String {
        match self {
            Section::Present(_) => "present".to_string(),
            Section::Skipped(why) => format!("skipped: {why}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of_file(role: &str, path: &Path) -> Result<Self, IoError> {
        Ok(Self {
            role: role.to_string(),
            path: path.display().to_string(),
            sha256: sha256_hex(&read_bytes(path)?),
        })
    }
}

/// Run description written to `run.json`. Wall-clock time is deliberately
/// absent so reruns produce identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub tool: String,
    pub command: String,
    pub config: Value,
    pub inputs: Vec<InputDigest>,
    pub notes: Vec<String>,
}

impl RunMetadata {
    pub fn new(command: &str, config: Value) -> Self {
        Self {
            tool: format!("threshscope {}", env!("CARGO_PKG_VERSION")),
            command: command.to_string(),
            config,
            inputs: Vec::new(),
            notes: Vec::new(),
        }
    }
}

/// Robust region at the configured tolerance, plus the fixed 1% reading.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustAnalysis {
    pub configured: RobustRegion,
    pub one_percent: RobustRegion,
}

impl RobustAnalysis {
    pub const STRICT_TOL: f64 = 0.01;

    pub fn of(ls: &MetricLandscape, rel_tol: f64) -> Self {
        Self {
            configured: robust_region(ls, rel_tol),
            one_percent: robust_region(ls, Self::STRICT_TOL),
        }
    }
}

pub struct ReportBundle {
    pub landscape: Section<MetricLandscape>,
    pub peaks: Section<PeakReport>,
    pub robust: Section<RobustAnalysis>,
    pub pr_curves: Section<Vec<PrCurve>>,
    pub densities: Section<Vec<(ObjectCounts, DensityReport)>>,
    pub comparisons: Section<Vec<DatasetComparison>>,
    pub distributions: Section<Vec<DistributionTable>>,
    pub metadata: RunMetadata,
}

impl ReportBundle {
    /// Every section skipped with the same reason.
    pub fn empty(metadata: RunMetadata, reason: &str) -> Self {
        Self {
            landscape: Section::skipped(reason),
            peaks: Section::skipped(reason),
            robust: Section::skipped(reason),
            pr_curves: Section::skipped(reason),
            densities: Section::skipped(reason),
            comparisons: Section::skipped(reason),
            distributions: Section::skipped(reason),
            metadata,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub file: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub files: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn get(&self, file: &str) -> Option<&ManifestEntry> {
        self.files.iter().find(|e| e.file == file)
    }
}

pub fn read_fixture(path: &Path) -> Result<FixtureTable, IoError> {
    let bytes = read_bytes(path)?;
    let text = std::str::from_utf8(&bytes).map_err(|e| IoError::parse(path, 1, format!("not UTF-8: {e}")))?;
    Ok(FixtureTable::from_csv(text)?)
}

/// Fixed-point rendering that never prints `-0.00`.
fn fixed(v: f64, dp: usize) -> String {
    let s = format!("{v:.dp$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// Round for JSON output so both formats carry the same precision.
fn rounded(v: f64, dp: usize) -> Value {
    let parsed: f64 = fixed(v, dp).parse().expect("fixed output parses");
    json!(parsed)
}

fn pct2(v: f64) -> Value {
    rounded(v * 100.0, 2)
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

fn json_bytes(v: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s.into_bytes()
}

/// Collects output files in memory (sorted by name) before writing.
#[derive(Default)]
struct FileSet(BTreeMap<String, Vec<u8>>);

impl FileSet {
    fn add(&mut self, name: impl Into<String>, bytes: Vec<u8>) {
        self.0.insert(name.into(), bytes);
    }
}

fn landscape_files(files: &mut FileSet, ls: &MetricLandscape, format: OutputFormat) {
    let grid = ls.grid();
    let n = grid.len();
    let tau = |t: f64| format!("{t}");
    match format {
        OutputFormat::Csv => {
            let rows = (0..n).flat_map(|i| {
                (0..n).map(move |j| {
                    let c = ls.cell(i, j);
                    vec![
                        tau(grid[i]),
                        tau(grid[j]),
                        fixed(c.action_overall * 100.0, 2),
                        fixed(c.action_mean * 100.0, 2),
                        fixed(c.reason_overall * 100.0, 2),
                        fixed(c.reason_mean * 100.0, 2),
                    ]
                })
            });
            files.add(
                "landscape.csv",
                csv_bytes(
                    &[
                        "tau_action",
                        "tau_reason",
                        "action_overall",
                        "action_mean",
                        "reason_overall",
                        "reason_mean",
                    ],
                    rows,
                ),
            );
            // same layout as the fixture input: one row per metric
            let mut header = vec!["metric".to_string()];
            header.extend(grid.iter().map(|&t| tau(t)));
            let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
            let rows = Metric::ALL.iter().map(|&m| {
                let mut row = vec![m.label().to_string()];
                row.extend(ls.profile(m).into_iter().map(|v| fixed(v * 100.0, 2)));
                row
            });
            files.add("sensitivity.csv", csv_bytes(&header_refs, rows));
        }
        OutputFormat::Json => {
            let cells: Vec<Value> = (0..n)
                .flat_map(|i| {
                    (0..n).map(move |j| {
                        let c = ls.cell(i, j);
                        json!({
                            "tau_action": rounded(grid[i], 6),
                            "tau_reason": rounded(grid[j], 6),
                            "action_overall": pct2(c.action_overall),
                            "action_mean": pct2(c.action_mean),
                            "reason_overall": pct2(c.reason_overall),
                            "reason_mean": pct2(c.reason_mean),
                        })
                    })
                })
                .collect();
            let profiles: serde_json::Map<String, Value> = Metric::ALL
                .iter()
                .map(|&m| {
                    (
                        m.key().to_string(),
                        Value::from(ls.profile(m).into_iter().map(pct2).collect::<Vec<_>>()),
                    )
                })
                .collect();
            files.add(
                "landscape.json",
                json_bytes(&json!({
                    "units": "percent",
                    "provenance": ls.provenance(),
                    "grid": grid.iter().map(|&t| rounded(t, 6)).collect::<Vec<_>>(),
                    "marginal_evaluations": ls.evaluations(),
                    "profiles": profiles,
                    "cells": cells,
                })),
            );
        }
    }
    files.add("landscape.svg", render_landscape_svg(ls).into_bytes());
}

fn peaks_json(p: &PeakReport) -> Value {
    json!({
        "units": "percent",
        "tie_rule": "lowest threshold",
        "tau_max": rounded(p.tau_max, 6),
        "peaks": p.peaks.iter().map(|pk| json!({
            "metric": pk.metric.label(),
            "key": pk.metric.key(),
            "threshold": rounded(pk.threshold, 6),
            "value": pct2(pk.value),
            "value_at_tau_max": pct2(pk.value_at_tau_max),
            "degradation": pct2(pk.degradation),
        })).collect::<Vec<_>>(),
    })
}

fn region_json(r: &RobustRegion) -> Value {
    json!({
        "rel_tol": r.rel_tol,
        "thresholds": r.thresholds.iter().map(|&t| rounded(t, 6)).collect::<Vec<_>>(),
        "contiguous": r.contiguous,
        "excluded": r.excluded.iter().map(|e| json!({
            "threshold": rounded(e.threshold, 6),
            "failed": e.failed.iter().map(|f| json!({
                "metric": f.metric.label(),
                "value": pct2(f.value),
                "required": rounded(f.required * 100.0, 4),
            })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

fn robust_files(files: &mut FileSet, ra: &RobustAnalysis, ls: Option<&MetricLandscape>) {
    let header = [
        "threshold",
        "action_overall",
        "action_mean",
        "reason_overall",
        "reason_mean",
    ];
    let rows = ra
        .configured
        .indices
        .iter()
        .zip(&ra.configured.thresholds)
        .map(|(&k, &t)| {
            let mut row = vec![format!("{t}")];
            if let Some(ls) = ls {
                let c = ls.cell(k, k);
                row.extend(Metric::ALL.iter().map(|&m| fixed(c.get(m) * 100.0, 2)));
            }
            row
        });
    files.add("robust_region.csv", csv_bytes(&header, rows));

    let agree = ra.configured.thresholds == ra.one_percent.thresholds;
    let note = if agree {
        "the 1% reading and the configured tolerance select the same thresholds".to_string()
    } else {
        format!(
            "the 1% reading selects {:?} while tolerance {} selects {:?}",
            ra.one_percent.thresholds, ra.configured.rel_tol, ra.configured.thresholds
        )
    };
    files.add(
        "robust_region.json",
        json_bytes(&json!({
            "configured": region_json(&ra.configured),
            "one_percent": region_json(&ra.one_percent),
            "readings_agree": agree,
            "note": note,
        })),
    );
}

fn pr_files(files: &mut FileSet, curves: &[PrCurve], format: OutputFormat) {
    let ap_text = |c: &PrCurve| c.average_precision.map(|v| fixed(v, 6)).unwrap_or_else(|| "n/a".into());
    for c in curves {
        let stem = format!("pr_{}_{}", c.task, c.class_index);
        match format {
            OutputFormat::Csv => {
                let mut bytes = format!(
                    "# task={} class={} name={} average_precision={}\n",
                    c.task,
                    c.class_index,
                    c.class_name,
                    ap_text(c)
                )
                .into_bytes();
                let rows = c.points.iter().map(|p| {
                    vec![
                        fixed(p.threshold, 6),
                        fixed(p.precision, 6),
                        fixed(p.recall, 6),
                        u8::from(p.is_grid_marker).to_string(),
                    ]
                });
                bytes.extend(csv_bytes(&["threshold", "precision", "recall", "marker"], rows));
                files.add(format!("{stem}.csv"), bytes);
            }
            OutputFormat::Json => {
                let points: Vec<Value> = c
                    .points
                    .iter()
                    .map(|p| {
                        json!({
                            "threshold": rounded(p.threshold, 6),
                            "precision": rounded(p.precision, 6),
                            "recall": rounded(p.recall, 6),
                            "marker": p.is_grid_marker,
                        })
                    })
                    .collect();
                files.add(
                    format!("{stem}.json"),
                    json_bytes(&json!({
                        "task": c.task,
                        "class_index": c.class_index,
                        "class_name": c.class_name,
                        "average_precision": c.average_precision.map(|v| rounded(v, 6)),
                        "points": points,
                    })),
                );
            }
        }
    }
    let summary_rows = curves.iter().map(|c| {
        let positives = c.points.first().map(|p| p.counts.actual_positive()).unwrap_or(0);
        vec![
            c.task.to_string(),
            c.class_index.to_string(),
            c.class_name.clone(),
            positives.to_string(),
            ap_text(c),
        ]
    });
    files.add(
        "pr_summary.csv",
        csv_bytes(
            &["task", "class_index", "class_name", "positives", "average_precision"],
            summary_rows,
        ),
    );
    for task in Task::BOTH {
        let of_task: Vec<PrCurve> = curves.iter().filter(|c| c.task == task).cloned().collect();
        if !of_task.is_empty() {
            files.add(format!("pr_{task}.svg"), render_pr_svg(&of_task).into_bytes());
        }
    }
}

fn density_files(files: &mut FileSet, rows: &[(ObjectCounts, DensityReport)], format: OutputFormat) {
    match format {
        OutputFormat::Csv => {
            let header = [
                "dataset",
                "images",
                "pedestrians",
                "riders",
                "vehicles",
                "pedestrian_density",
                "rider_density",
                "vehicle_density",
                "total_density",
                "complexity",
            ];
            let body = rows.iter().map(|(c, d)| {
                vec![
                    c.dataset_name.clone(),
                    c.images.to_string(),
                    c.pedestrians.to_string(),
                    c.riders.to_string(),
                    c.vehicles.to_string(),
                    fixed(d.d_pedestrian, 4),
                    fixed(d.d_rider, 4),
                    fixed(d.d_vehicle, 4),
                    fixed(d.total_density, 4),
                    fixed(d.complexity, 4),
                ]
            });
            files.add("densities.csv", csv_bytes(&header, body));
        }
        OutputFormat::Json => {
            let body: Vec<Value> = rows
                .iter()
                .map(|(c, d)| {
                    json!({
                        "dataset": c.dataset_name,
                        "images": c.images,
                        "pedestrians": c.pedestrians,
                        "riders": c.riders,
                        "vehicles": c.vehicles,
                        "pedestrian_density": rounded(d.d_pedestrian, 4),
                        "rider_density": rounded(d.d_rider, 4),
                        "vehicle_density": rounded(d.d_vehicle, 4),
                        "total_density": rounded(d.total_density, 4),
                        "complexity": rounded(d.complexity, 4),
                    })
                })
                .collect();
            files.add("densities.json", json_bytes(&Value::from(body)));
        }
    }
}

fn comparison_files(files: &mut FileSet, rows: &[DatasetComparison], format: OutputFormat) {
    match format {
        OutputFormat::Csv => {
            let header = [
                "dataset",
                "baseline",
                "pedestrian",
                "rider",
                "vehicle",
                "total",
                "complexity",
            ];
            let body = rows.iter().map(|c| {
                vec![
                    c.dataset.clone(),
                    c.baseline.clone(),
                    c.pedestrian.to_string(),
                    c.rider.to_string(),
                    c.vehicle.to_string(),
                    c.total.to_string(),
                    c.complexity.to_string(),
                ]
            });
            files.add("comparisons.csv", csv_bytes(&header, body));
        }
        OutputFormat::Json => {
            let body: Vec<Value> = rows
                .iter()
                .map(|c| {
                    json!({
                        "dataset": c.dataset,
                        "baseline": c.baseline,
                        "pedestrian": c.pedestrian.to_string(),
                        "rider": c.rider.to_string(),
                        "vehicle": c.vehicle.to_string(),
                        "total": c.total.to_string(),
                        "complexity": c.complexity.to_string(),
                    })
                })
                .collect();
            files.add("comparisons.json", json_bytes(&Value::from(body)));
        }
    }
}

fn distribution_files(files: &mut FileSet, tables: &[DistributionTable], format: OutputFormat) {
    for t in tables {
        match format {
            OutputFormat::Csv => {
                let body = t
                    .rows
                    .iter()
                    .map(|r| vec![r.class_name.clone(), r.count.to_string(), fixed(r.percent, 2)]);
                files.add(
                    format!("distribution_{}.csv", t.task),
                    csv_bytes(&["class", "count", "percent_of_records"], body),
                );
            }
            OutputFormat::Json => {
                let body: Vec<Value> = t
                    .rows
                    .iter()
                    .map(|r| json!({"class": r.class_name, "count": r.count, "percent_of_records": rounded(r.percent, 2)}))
                    .collect();
                files.add(
                    format!("distribution_{}.json", t.task),
                    json_bytes(&json!({"task": t.task, "records": t.records, "rows": body})),
                );
            }
        }
    }
}

/// Render every present section into `out_dir`, then write `run.json` and
/// `manifest.json`. Each file is written atomically.
pub fn write_reports(bundle: &ReportBundle, out_dir: &Path, format: OutputFormat) -> Result<Manifest, IoError> {
    std::fs::create_dir_all(out_dir).map_err(|e| IoError::io(out_dir, e))?;
    let mut files = FileSet::default();

    if let Section::Present(ls) = &bundle.landscape {
        landscape_files(&mut files, ls, format);
    }
    if let Section::Present(p) = &bundle.peaks {
        files.add("peaks.json", json_bytes(&peaks_json(p)));
    }
    if let Section::Present(ra) = &bundle.robust {
        robust_files(&mut files, ra, bundle.landscape.as_present());
    }
    if let Section::Present(curves) = &bundle.pr_curves {
        pr_files(&mut files, curves, format);
    }
    if let Section::Present(rows) = &bundle.densities {
        density_files(&mut files, rows, format);
    }
    if let Section::Present(rows) = &bundle.comparisons {
        comparison_files(&mut files, rows, format);
    }
    if let Section::Present(tables) = &bundle.distributions {
        distribution_files(&mut files, tables, format);
    }

    let sections = json!({
        "landscape": bundle.landscape.status(),
        "peaks": bundle.peaks.status(),
        "robust_region": bundle.robust.status(),
        "pr_curves": bundle.pr_curves.status(),
        "densities": bundle.densities.status(),
        "comparisons": bundle.comparisons.status(),
        "distributions": bundle.distributions.status(),
    });
    let m = &bundle.metadata;
    files.add(
        "run.json",
        json_bytes(&json!({
            "tool": m.tool,
            "command": m.command,
            "format": format,
            "config": m.config,
            "inputs": m.inputs,
            "sections": sections,
            "notes": m.notes,
        })),
    );

    let mut manifest = Manifest { files: Vec::new() };
    for (name, bytes) in &files.0 {
        write_atomic(&out_dir.join(name), bytes)?;
        manifest.files.push(ManifestEntry {
            file: name.clone(),
            sha256: sha256_hex(bytes),
            bytes: bytes.len() as u64,
        });
    }
    let manifest_bytes = json_bytes(&serde_json::to_value(&manifest).expect("manifest serializes"));
    write_atomic(&out_dir.join("manifest.json"), &manifest_bytes)?;
    Ok(manifest)
}
