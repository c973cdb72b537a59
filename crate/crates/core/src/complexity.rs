//! Object densities, the weighted scene-complexity score, per-class label
//! distributions and cross-dataset density ratios.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ComplexityError;
use crate::model::{EvalSet, Task};

/// Annotated object totals for one dataset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectCounts {
    pub dataset_name: String,
    pub images: u64,
    pub pedestrians: u64,
    pub riders: u64,
    pub vehicles: u64,
}

/// Per-object-type weights of the complexity score. Vulnerable road users
/// (pedestrians, riders) weigh more than vehicles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexityWeights {
    pub pedestrian: f64,
    pub rider: f64,
    pub vehicle: f64,
}

impl Default for ComplexityWeights {
    fn default() -> Self {
        Self {
            pedestrian: 1.5,
            rider: 1.3,
            vehicle: 1.0,
        }
    }
}

impl ComplexityWeights {
    pub const UNIT: Self = Self {
        pedestrian: 1.0,
        rider: 1.0,
        vehicle: 1.0,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub d_pedestrian: f64,
    pub d_rider: f64,
    pub d_vehicle: f64,
    pub total_density: f64,
    pub complexity: f64,
}

pub fn complexity_score(d_p: f64, d_r: f64, d_v: f64, weights: &ComplexityWeights) -> Result<f64, ComplexityError> {
    for d in [d_p, d_r, d_v] {
        if !(d.is_finite() && d >= 0.0) {
            return Err(ComplexityError::NegativeDensity(d));
        }
    }
    Ok(weights.pedestrian * d_p + weights.rider * d_r + weights.vehicle * d_v)
}

pub fn densities(c: &ObjectCounts, weights: &ComplexityWeights) -> Result<DensityReport, ComplexityError> {
    if c.images == 0 {
        return Err(ComplexityError::ZeroImages {
            dataset: c.dataset_name.clone(),
        });
    }
    let images = c.images as f64;
    let d_pedestrian = c.pedestrians as f64 / images;
    let d_rider = c.riders as f64 / images;
    let d_vehicle = c.vehicles as f64 / images;
    Ok(DensityReport {
        d_pedestrian,
        d_rider,
        d_vehicle,
        total_density: d_pedestrian + d_rider + d_vehicle,
        complexity: complexity_score(d_pedestrian, d_rider, d_vehicle, weights)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionRow {
    pub class_name: String,
    pub count: u64,
    /// Share of all records in which the class is positive, in percent.
    pub percent: f64,
}

/// Per-class positive frequency. Multi-label, so percents need not sum to 100.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionTable {
    pub task: Task,
    pub records: u64,
    pub rows: Vec<DistributionRow>,
}

pub fn class_distribution(es: &EvalSet, task: Task) -> DistributionTable {
    let names = &es.schema().task(task).class_names;
    let mut counts = vec![0u64; names.len()];
    for rec in es.records() {
        for (c, &t) in counts.iter_mut().zip(rec.truth(task)) {
            *c += u64::from(t);
        }
    }
    let n = es.len() as u64;
    DistributionTable {
        task,
        records: n,
        rows: names
            .iter()
            .zip(counts)
            .map(|(name, count)| DistributionRow {
                class_name: name.clone(),
                count,
                percent: 100.0 * count as f64 / n as f64,
            })
            .collect(),
    }
}

/// A density ratio, which may be unbounded when the baseline density is 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Ratio {
    Finite(f64),
    /// Non-zero over zero.
    Unbounded,
    /// Zero over zero.
    Indeterminate,
}

impl Ratio {
    pub fn of(num: f64, den: f64) -> Self {
        if den != 0.0 {
            Ratio::Finite(num / den)
        } else if num != 0.0 {
            Ratio::Unbounded
        } else {
            Ratio::Indeterminate
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Ratio::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Ratio {
    /// One decimal place; `inf` and `n/a` for the degenerate cases.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ratio::Finite(v) => write!(f, "{v:.1}"),
            Ratio::Unbounded => f.write_str("inf"),
            Ratio::Indeterminate => f.write_str("n/a"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetComparison {
    pub dataset: String,
    pub baseline: String,
    pub pedestrian: Ratio,
    pub rider: Ratio,
    pub vehicle: Ratio,
    pub total: Ratio,
    pub complexity: Ratio,
}

/// Ratios of every dataset's densities against every other dataset
/// (ordered pairs, `dataset / baseline`), in input order.
pub fn compare_datasets(reports: &[(String, DensityReport)]) -> Result<Vec<DatasetComparison>, ComplexityError> {
    if reports.len() < 2 {
        return Err(ComplexityError::TooFewReports(reports.len()));
    }
    let mut out = Vec::new();
    for (i, (name, d)) in reports.iter().enumerate() {
        for (j, (base_name, b)) in reports.iter().enumerate() {
            if i == j {
                continue;
            }
            out.push(DatasetComparison {
                dataset: name.clone(),
                baseline: base_name.clone(),
                pedestrian: Ratio::of(d.d_pedestrian, b.d_pedestrian),
                rider: Ratio::of(d.d_rider, b.d_rider),
                vehicle: Ratio::of(d.d_vehicle, b.d_vehicle),
                total: Ratio::of(d.total_density, b.total_density),
                complexity: Ratio::of(d.complexity, b.complexity),
            });
        }
    }
    Ok(out)
}

/// Comparisons restricted to one baseline dataset.
pub fn compare_against(
    reports: &[(String, DensityReport)],
    baseline: &str,
) -> Result<Vec<DatasetComparison>, ComplexityError> {
    if !reports.iter().any(|(n, _)| n == baseline) {
        return Err(ComplexityError::UnknownBaseline(baseline.to_string()));
    }
    Ok(compare_datasets(reports)?
        .into_iter()
        .filter(|c| c.baseline == baseline)
        .collect())
}
