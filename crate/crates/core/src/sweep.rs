//! Exhaustive (action threshold, reason threshold) grid evaluation and the
//! post-analysis run on its output: per-metric peaks, degradation at the top
//! of the grid, and the robust operating region.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, FixtureError};
use crate::metrics::{task_metrics, EmptyF1};
use crate::model::{EvalSet, Task};

/// Grid points are snapped to this resolution after index-based generation so
/// that e.g. `0.1 + 2 * 0.1` is stored as `0.3`.
const GRID_SNAP: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub tau_min: f64,
    pub tau_max: f64,
    pub step: f64,
    pub robust_rel_tol: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            tau_min: 0.1,
            tau_max: 0.9,
            step: 0.1,
            robust_rel_tol: 0.03,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let Self {
            tau_min,
            tau_max,
            step,
            robust_rel_tol,
        } = *self;
        if !(tau_min.is_finite() && tau_max.is_finite() && 0.0 <= tau_min && tau_min <= tau_max && tau_max <= 1.0) {
            return Err(ConfigError::BadRange { tau_min, tau_max });
        }
        if !(step.is_finite() && step > 0.0) {
            return Err(ConfigError::BadStep(step));
        }
        if !(robust_rel_tol.is_finite() && robust_rel_tol >= 0.0) {
            return Err(ConfigError::BadTolerance(robust_rel_tol));
        }
        let intervals = (tau_max - tau_min) / step;
        if (intervals - intervals.round()).abs() > 1e-6 {
            return Err(ConfigError::StepDoesNotDivide { tau_min, tau_max, step });
        }
        Ok(())
    }

    /// `round((tau_max - tau_min) / step) + 1` thresholds, each computed from
    /// its index rather than by repeated addition.
    pub fn grid(&self) -> Result<Vec<f64>, ConfigError> {
        self.validate()?;
        let n = ((self.tau_max - self.tau_min) / self.step).round() as usize + 1;
        Ok((0..n)
            .map(|k| {
                let raw = self.tau_min + k as f64 * self.step;
                ((raw * GRID_SNAP).round() / GRID_SNAP).clamp(0.0, 1.0)
            })
            .collect())
    }
}

/// The four F1 summaries tracked across the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    ActionOverall,
    ActionMean,
    ReasonOverall,
    ReasonMean,
}

impl Metric {
    pub const ALL: [Metric; 4] = [
        Metric::ActionOverall,
        Metric::ActionMean,
        Metric::ReasonOverall,
        Metric::ReasonMean,
    ];

    pub fn task(self) -> Task {
        match self {
            Metric::ActionOverall | Metric::ActionMean => Task::Action,
            Metric::ReasonOverall | Metric::ReasonMean => Task::Reason,
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            Metric::ActionOverall => "action_overall",
            Metric::ActionMean => "action_mean",
            Metric::ReasonOverall => "reason_overall",
            Metric::ReasonMean => "reason_mean",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Metric::ActionOverall => "F1-action-overall",
            Metric::ActionMean => "F1-action-mean",
            Metric::ReasonOverall => "F1-reason-overall",
            Metric::ReasonMean => "F1-reason-mean",
        }
    }

    /// Accepts `F1-action-overall`, `action_overall`, `Action Overall`, ...
    pub fn parse_name(name: &str) -> Option<Metric> {
        let norm: String = name
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        let norm = norm.strip_prefix("f1").unwrap_or(&norm);
        Metric::ALL.into_iter().find(|m| m.key().replace('_', "") == norm)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Metric values at one (action threshold, reason threshold) cell.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricCell {
    pub action_overall: f64,
    pub action_mean: f64,
    pub reason_overall: f64,
    pub reason_mean: f64,
}

impl MetricCell {
    pub fn get(&self, m: Metric) -> f64 {
        match m {
            Metric::ActionOverall => self.action_overall,
            Metric::ActionMean => self.action_mean,
            Metric::ReasonOverall => self.reason_overall,
            Metric::ReasonMean => self.reason_mean,
        }
    }

    pub fn set(&mut self, m: Metric, v: f64) {
        match m {
            Metric::ActionOverall => self.action_overall = v,
            Metric::ActionMean => self.action_mean = v,
            Metric::ReasonOverall => self.reason_overall = v,
            Metric::ReasonMean => self.reason_mean = v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Computed,
    Fixture,
}

/// Four-metric surface over the square threshold grid.
///
/// Cells are stored row-major: row = action threshold index, column = reason
/// threshold index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricLandscape {
    grid: Vec<f64>,
    cells: Vec<MetricCell>,
    provenance: Provenance,
    /// Number of single-task metric evaluations performed to fill the matrix.
    evaluations: usize,
}

impl MetricLandscape {
    /// Build a landscape from per-threshold profiles. Action metrics are
    /// broadcast along the reason axis and vice versa.
    pub fn from_profiles(
        grid: Vec<f64>,
        profiles: &[(Metric, Vec<f64>)],
        provenance: Provenance,
        evaluations: usize,
    ) -> Self {
        let n = grid.len();
        let mut cells = vec![MetricCell::default(); n * n];
        for (metric, values) in profiles {
            assert_eq!(values.len(), n, "profile length must match grid");
            for i in 0..n {
                for j in 0..n {
                    let k = if metric.task() == Task::Action { i } else { j };
                    cells[i * n + j].set(*metric, values[k]);
                }
            }
        }
        Self {
            grid,
            cells,
            provenance,
            evaluations,
        }
    }

    /// Landscape from explicitly supplied cells (row-major, `grid.len()^2`).
    pub fn from_cells(grid: Vec<f64>, cells: Vec<MetricCell>, provenance: Provenance) -> Self {
        assert_eq!(cells.len(), grid.len() * grid.len());
        let evaluations = cells.len() * 2;
        Self {
            grid,
            cells,
            provenance,
            evaluations,
        }
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    pub fn dim(&self) -> usize {
        self.grid.len()
    }

    pub fn cell(&self, action_idx: usize, reason_idx: usize) -> &MetricCell {
        &self.cells[action_idx * self.grid.len() + reason_idx]
    }

    pub fn cells(&self) -> &[MetricCell] {
        &self.cells
    }

    /// Values of `metric` along the diagonal, where both tasks use the same
    /// threshold. For decoupled landscapes this equals the metric's own axis.
    pub fn profile(&self, metric: Metric) -> Vec<f64> {
        (0..self.dim()).map(|k| self.cell(k, k).get(metric)).collect()
    }

    /// True when action metrics are constant along the reason axis and reason
    /// metrics constant along the action axis (exact equality).
    pub fn is_decoupled(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let c = self.cell(i, j);
                let row0 = self.cell(i, 0);
                let col0 = self.cell(0, j);
                c.action_overall == row0.action_overall
                    && c.action_mean == row0.action_mean
                    && c.reason_overall == col0.reason_overall
                    && c.reason_mean == col0.reason_mean
            })
        })
    }
}

/// Evaluate every grid pair. Each task's metrics depend only on its own
/// threshold, so they are computed once per grid point and broadcast.
pub fn run_sweep(es: &EvalSet, cfg: &SweepConfig, empty: EmptyF1) -> Result<MetricLandscape, ConfigError> {
    let grid = cfg.grid()?;
    let mut profiles: Vec<(Metric, Vec<f64>)> = Metric::ALL.iter().map(|&m| (m, Vec::new())).collect();
    for &tau in &grid {
        for task in Task::BOTH {
            let tm = task_metrics(es, task, tau, empty);
            let (overall, mean) = match task {
                Task::Action => (0, 1),
                Task::Reason => (2, 3),
            };
            profiles[overall].1.push(tm.overall_f1);
            profiles[mean].1.push(tm.mean_f1);
        }
    }
    let evaluations = grid.len() * 2;
    Ok(MetricLandscape::from_profiles(
        grid,
        &profiles,
        Provenance::Computed,
        evaluations,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricPeak {
    pub metric: Metric,
    pub threshold: f64,
    pub value: f64,
    /// Value at the highest grid threshold.
    pub value_at_tau_max: f64,
    /// `value - value_at_tau_max`.
    pub degradation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakReport {
    pub tau_max: f64,
    pub peaks: Vec<MetricPeak>,
}

impl PeakReport {
    pub fn get(&self, metric: Metric) -> &MetricPeak {
        self.peaks
            .iter()
            .find(|p| p.metric == metric)
            .expect("every metric has a peak")
    }
}

/// Per-metric argmax over the grid. Ties go to the lowest threshold.
pub fn find_peaks(ls: &MetricLandscape) -> PeakReport {
    assert!(ls.dim() > 0, "landscape is never empty");
    let last = ls.dim() - 1;
    let peaks = Metric::ALL
        .iter()
        .map(|&metric| {
            let profile = ls.profile(metric);
            let mut best = 0;
            for (k, &v) in profile.iter().enumerate().skip(1) {
                if v > profile[best] {
                    best = k;
                }
            }
            MetricPeak {
                metric,
                threshold: ls.grid[best],
                value: profile[best],
                value_at_tau_max: profile[last],
                degradation: profile[best] - profile[last],
            }
        })
        .collect();
    PeakReport {
        tau_max: ls.grid[last],
        peaks,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailedBound {
    pub metric: Metric,
    pub value: f64,
    pub required: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcludedPoint {
    pub threshold: f64,
    pub failed: Vec<FailedBound>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustRegion {
    pub rel_tol: f64,
    pub thresholds: Vec<f64>,
    /// Grid indices of `thresholds`.
    pub indices: Vec<usize>,
    /// Members form one run of adjacent grid points (vacuously true when empty).
    pub contiguous: bool,
    pub excluded: Vec<ExcludedPoint>,
}

/// Grid points where all four metrics are at least `(1 - rel_tol)` times
/// their own peak.
pub fn robust_region(ls: &MetricLandscape, rel_tol: f64) -> RobustRegion {
    let peaks = find_peaks(ls);
    let profiles: Vec<(Metric, Vec<f64>, f64)> = Metric::ALL
        .iter()
        .map(|&m| (m, ls.profile(m), peaks.get(m).value))
        .collect();

    let mut thresholds = Vec::new();
    let mut indices = Vec::new();
    let mut excluded = Vec::new();
    for (k, &tau) in ls.grid().iter().enumerate() {
        let failed: Vec<FailedBound> = profiles
            .iter()
            .filter_map(|(metric, values, peak)| {
                let required = (1.0 - rel_tol) * peak;
                (values[k] < required).then_some(FailedBound {
                    metric: *metric,
                    value: values[k],
                    required,
                })
            })
            .collect();
        if failed.is_empty() {
            thresholds.push(tau);
            indices.push(k);
        } else {
            excluded.push(ExcludedPoint { threshold: tau, failed });
        }
    }
    let contiguous = indices.windows(2).all(|w| w[1] == w[0] + 1);
    RobustRegion {
        rel_tol,
        thresholds,
        indices,
        contiguous,
        excluded,
    }
}

/// A parsed fixture table: header row plus data rows, all as text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl FixtureTable {
    pub fn from_csv(text: &str) -> Result<Self, FixtureError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let mut all = Vec::new();
        for rec in reader.records() {
            let rec = rec.map_err(|e| FixtureError::MalformedTable(e.to_string()))?;
            if rec.iter().all(|f| f.is_empty()) {
                continue;
            }
            all.push(rec.iter().map(str::to_owned).collect::<Vec<_>>());
        }
        let mut it = all.into_iter();
        let header = it
            .next()
            .ok_or_else(|| FixtureError::MalformedTable("table is empty".into()))?;
        Ok(Self {
            header,
            rows: it.collect(),
        })
    }
}

fn parse_number(s: &str, what: &str) -> Result<f64, FixtureError> {
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| FixtureError::MalformedTable(format!("{what} `{s}` is not a finite number")))
}

/// Build a landscape from a precomputed sensitivity table in percent.
///
/// Two orientations are recognised from the header row: metric rows with one
/// column per threshold (`metric,0.1,0.2,...`), or threshold rows with one
/// column per metric (`threshold,F1-action-overall,...`).
pub fn load_landscape_fixture(table: &FixtureTable, grid: &[f64]) -> Result<MetricLandscape, FixtureError> {
    if table.header.len() < 2 {
        return Err(FixtureError::MalformedTable("header needs at least two columns".into()));
    }
    let rest = &table.header[1..];
    let metric_rows = rest.iter().all(|h| h.parse::<f64>().is_ok());

    let mut found_grid = Vec::new();
    let mut profiles: Vec<(Metric, Vec<f64>)> = Vec::new();

    if metric_rows {
        for h in rest {
            found_grid.push(parse_number(h, "threshold")?);
        }
        for row in &table.rows {
            if row.len() != table.header.len() {
                return Err(FixtureError::MalformedTable(format!(
                    "row `{}` has {} cells, header has {}",
                    row.first().map(String::as_str).unwrap_or(""),
                    row.len(),
                    table.header.len()
                )));
            }
            let metric = Metric::parse_name(&row[0])
                .ok_or_else(|| FixtureError::MalformedTable(format!("unknown metric `{}`", row[0])))?;
            let values = row[1..]
                .iter()
                .map(|c| parse_number(c, "value"))
                .collect::<Result<Vec<_>, _>>()?;
            profiles.push((metric, values));
        }
    } else {
        let metrics = rest
            .iter()
            .map(|h| {
                Metric::parse_name(h)
                    .ok_or_else(|| FixtureError::MalformedTable(format!("unknown metric column `{h}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut columns = vec![Vec::new(); metrics.len()];
        for row in &table.rows {
            if row.len() != table.header.len() {
                return Err(FixtureError::MalformedTable(format!(
                    "row `{}` has {} cells, header has {}",
                    row.first().map(String::as_str).unwrap_or(""),
                    row.len(),
                    table.header.len()
                )));
            }
            found_grid.push(parse_number(&row[0], "threshold")?);
            for (col, cell) in columns.iter_mut().zip(&row[1..]) {
                col.push(parse_number(cell, "value")?);
            }
        }
        profiles = metrics.into_iter().zip(columns).collect();
    }

    for m in Metric::ALL {
        match profiles.iter().filter(|(pm, _)| *pm == m).count() {
            1 => {}
            0 => return Err(FixtureError::MalformedTable(format!("missing metric `{}`", m.label()))),
            _ => {
                return Err(FixtureError::MalformedTable(format!(
                    "metric `{}` appears twice",
                    m.label()
                )))
            }
        }
    }
    if found_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(FixtureError::MalformedTable(
            "thresholds must be strictly ascending".into(),
        ));
    }
    let matches = found_grid.len() == grid.len() && found_grid.iter().zip(grid).all(|(a, b)| (a - b).abs() < 1e-9);
    if !matches {
        return Err(FixtureError::GridMismatch {
            expected: grid.to_vec(),
            found: found_grid,
        });
    }
    for (_, values) in &profiles {
        if let Some(v) = values.iter().find(|v| !(0.0..=100.0).contains(*v)) {
            return Err(FixtureError::MalformedTable(format!(
                "value {v} is outside [0, 100] percent"
            )));
        }
    }

    let profiles: Vec<(Metric, Vec<f64>)> = profiles
        .into_iter()
        .map(|(m, v)| (m, v.into_iter().map(|x| x / 100.0).collect()))
        .collect();
    Ok(MetricLandscape::from_profiles(
        grid.to_vec(),
        &profiles,
        Provenance::Fixture,
        0,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const SENSITIVITY: &str = "\
Confidence Threshold,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9
F1-action-overall,71.25,71.78,71.85,71.72,71.35,70.49,69.30,66.83,62.62
F1-action-mean,68.33,69.08,69.32,69.53,69.59,69.25,68.77,67.56,65.33
F1-reason-overall,45.37,51.65,54.17,54.77,54.06,52.03,49.26,44.55,36.10
F1-reason-mean,32.21,35.59,37.44,37.62,36.65,33.93,32.41,29.18,23.97
";

    fn fixture() -> MetricLandscape {
        let grid = SweepConfig::default().grid().unwrap();
        load_landscape_fixture(&FixtureTable::from_csv(SENSITIVITY).unwrap(), &grid).unwrap()
    }

    #[test]
    fn default_grid_is_nine_clean_points() {
        let g = SweepConfig::default().grid().unwrap();
        assert_eq!(g, vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]);
    }

    #[test]
    fn grid_sizes() {
        let cfg = |a, b, s| SweepConfig {
            tau_min: a,
            tau_max: b,
            step: s,
            ..SweepConfig::default()
        };
        assert_eq!(cfg(0.5, 0.5, 0.1).grid().unwrap(), vec![0.5]);
        assert_eq!(cfg(0.0, 1.0, 0.1).grid().unwrap().len(), 11);
        assert_eq!(cfg(0.1, 0.9, 0.05).grid().unwrap().len(), 17);
        assert!(matches!(
            cfg(0.1, 0.9, 0.3).grid(),
            Err(ConfigError::StepDoesNotDivide { .. })
        ));
        assert!(matches!(cfg(0.6, 0.4, 0.1).grid(), Err(ConfigError::BadRange { .. })));
        assert!(matches!(cfg(0.1, 0.9, 0.0).grid(), Err(ConfigError::BadStep(_))));
    }

    #[test]
    fn fixture_peaks_and_degradation() {
        let p = find_peaks(&fixture());
        let pct = |x: f64| format!("{:.2}", x * 100.0);
        let expect = [
            (Metric::ActionOverall, 0.3, "71.85", "9.23"),
            (Metric::ActionMean, 0.5, "69.59", "4.26"),
            (Metric::ReasonOverall, 0.4, "54.77", "18.67"),
            (Metric::ReasonMean, 0.4, "37.62", "13.65"),
        ];
        for (m, tau, value, drop) in expect {
            let peak = p.get(m);
            assert_eq!(peak.threshold, tau, "{m}");
            assert_eq!(pct(peak.value), value, "{m}");
            assert_eq!(pct(peak.degradation), drop, "{m}");
        }
    }

    #[test]
    fn fixture_robust_regions() {
        let ls = fixture();
        let r = robust_region(&ls, 0.03);
        assert_eq!(r.thresholds, vec![0.3, 0.4, 0.5]);
        assert!(r.contiguous);
        assert_eq!(robust_region(&ls, 0.01).thresholds, vec![0.4]);
        assert_eq!(robust_region(&ls, 1.0).thresholds, ls.grid().to_vec());

        // at 1%: 54.17 and 54.06 < 0.99 * 54.77; 36.65 < 0.99 * 37.62
        let r1 = robust_region(&ls, 0.01);
        let failed_at = |tau: f64| -> Vec<Metric> {
            let ex = r1.excluded.iter().find(|e| e.threshold == tau).unwrap();
            ex.failed.iter().map(|f| f.metric).collect()
        };
        assert_eq!(failed_at(0.3), vec![Metric::ReasonOverall]);
        assert_eq!(failed_at(0.5), vec![Metric::ReasonOverall, Metric::ReasonMean]);
    }

    #[test]
    fn constant_landscape_ties_to_lowest() {
        let grid = vec![0.1, 0.2, 0.3];
        let profiles: Vec<_> = Metric::ALL.iter().map(|&m| (m, vec![0.4; 3])).collect();
        let ls = MetricLandscape::from_profiles(grid, &profiles, Provenance::Fixture, 0);
        for p in find_peaks(&ls).peaks {
            assert_eq!((p.threshold, p.degradation), (0.1, 0.0));
        }
    }

    #[test]
    fn fixture_orientations_agree() {
        let grid = SweepConfig::default().grid().unwrap();
        let t = FixtureTable::from_csv(SENSITIVITY).unwrap();
        let mut header = vec!["threshold".to_string()];
        header.extend(t.rows.iter().map(|r| r[0].clone()));
        let rows = (1..t.header.len())
            .map(|c| {
                let mut row = vec![t.header[c].clone()];
                row.extend(t.rows.iter().map(|r| r[c].clone()));
                row
            })
            .collect();
        let transposed = FixtureTable { header, rows };
        assert_eq!(
            load_landscape_fixture(&transposed, &grid).unwrap(),
            load_landscape_fixture(&t, &grid).unwrap()
        );
    }

    #[test]
    fn fixture_errors() {
        let grid = SweepConfig::default().grid().unwrap();
        let eight = "metric,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8\n\
            action_overall,1,1,1,1,1,1,1,1\naction_mean,1,1,1,1,1,1,1,1\n\
            reason_overall,1,1,1,1,1,1,1,1\nreason_mean,1,1,1,1,1,1,1,1\n";
        let err = load_landscape_fixture(&FixtureTable::from_csv(eight).unwrap(), &grid).unwrap_err();
        assert!(matches!(err, FixtureError::GridMismatch { .. }));

        let missing = "metric,0.1\naction_overall,1\n";
        let err = load_landscape_fixture(&FixtureTable::from_csv(missing).unwrap(), &[0.1]).unwrap_err();
        assert!(matches!(err, FixtureError::MalformedTable(_)));

        let ragged = "metric,0.1,0.2\naction_overall,1\n";
        assert!(load_landscape_fixture(&FixtureTable::from_csv(ragged).unwrap(), &[0.1, 0.2]).is_err());
        assert!(FixtureTable::from_csv("").is_err());
    }

    #[test]
    fn all_zero_fixture_peaks_at_first_point() {
        let grid = SweepConfig::default().grid().unwrap();
        let mut text = String::from("metric,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9\n");
        for m in Metric::ALL {
            text.push_str(m.key());
            text.push_str(&",0".repeat(9));
            text.push('\n');
        }
        let ls = load_landscape_fixture(&FixtureTable::from_csv(&text).unwrap(), &grid).unwrap();
        assert_eq!(ls.provenance(), Provenance::Fixture);
        assert!(find_peaks(&ls).peaks.iter().all(|p| p.threshold == 0.1));
    }

    #[test]
    fn metric_names_parse_loosely() {
        assert_eq!(Metric::parse_name("F1-reason-mean"), Some(Metric::ReasonMean));
        assert_eq!(Metric::parse_name("action_overall"), Some(Metric::ActionOverall));
        assert_eq!(Metric::parse_name("Reason Overall"), Some(Metric::ReasonOverall));
        assert_eq!(Metric::parse_name("accuracy"), None);
    }
}
