//! Per-class precision-recall curves with grid-threshold markers, and
//! step-integrated average precision.
//!
//! AP is `sum_k (R_k - R_{k-1}) * P_k` over distinct score cut points taken
//! in descending order, with no interpolation. Samples sharing a score enter
//! the positive set together.

use serde::{Deserialize, Serialize};

use crate::error::PrError;
use crate::metrics::{is_positive, precision, recall};
use crate::model::{ConfusionCounts, EvalSet, Task};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrPoint {
    /// Threshold whose strict `score > threshold` rule produces this point.
    pub threshold: f64,
    pub precision: f64,
    pub recall: f64,
    pub is_grid_marker: bool,
    pub counts: ConfusionCounts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrCurve {
    pub task: Task,
    pub class_index: usize,
    pub class_name: String,
    /// Ordered by descending threshold.
    pub points: Vec<PrPoint>,
    /// `None` when the class has no positive samples.
    pub average_precision: Option<f64>,
}

impl PrCurve {
    pub fn markers(&self) -> impl Iterator<Item = &PrPoint> {
        self.points.iter().filter(|p| p.is_grid_marker)
    }

    pub fn fine_points(&self) -> impl Iterator<Item = &PrPoint> {
        self.points.iter().filter(|p| !p.is_grid_marker)
    }
}

/// Indices sorted by descending score, ties in original order.
fn descending_order(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    order
}

/// Cumulative counts after admitting each group of tied scores, highest first.
/// Returns `(cut score, counts)` per distinct score.
fn cumulative_cuts(scores: &[f64], labels: &[bool]) -> Vec<(f64, ConfusionCounts)> {
    let positives = labels.iter().filter(|&&l| l).count() as u64;
    let negatives = labels.len() as u64 - positives;
    let order = descending_order(scores);
    let mut cuts = Vec::new();
    let (mut tp, mut fp) = (0u64, 0u64);
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        while i < order.len() && scores[order[i]] == s {
            if labels[order[i]] {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        cuts.push((
            s,
            ConfusionCounts {
                tp,
                fp,
                fn_: positives - tp,
                tn: negatives - fp,
            },
        ));
    }
    cuts
}

pub fn average_precision(scores: &[f64], labels: &[bool]) -> Result<f64, PrError> {
    if scores.len() != labels.len() {
        return Err(PrError::LengthMismatch {
            scores: scores.len(),
            labels: labels.len(),
        });
    }
    if !labels.iter().any(|&l| l) {
        return Err(PrError::NoPositives);
    }
    let mut ap = 0.0;
    let mut prev_recall = 0.0;
    for (_, c) in cumulative_cuts(scores, labels) {
        let r = recall(&c);
        ap += (r - prev_recall) * precision(&c);
        prev_recall = r;
    }
    Ok(ap)
}

/// Precision-recall curve for one class.
///
/// Fine points sit at the midpoint between consecutive distinct scores (the
/// lowest one halfway to 0, or at -0.5 when the lowest score is exactly 0), so
/// each reproduces one cut under the strict `>` rule. One marker point is
/// added per grid threshold.
pub fn pr_curve(es: &EvalSet, task: Task, class_index: usize, grid: &[f64]) -> Result<PrCurve, PrError> {
    let count = es.class_count(task);
    if class_index >= count {
        return Err(PrError::ClassIndexOutOfRange {
            task,
            index: class_index,
            count,
        });
    }
    let scores = es.class_scores(task, class_index);
    let labels = es.class_truth(task, class_index);

    let cuts = cumulative_cuts(&scores, &labels);
    let mut points = Vec::with_capacity(cuts.len() + grid.len());
    for (k, (s, c)) in cuts.iter().enumerate() {
        let below = match cuts.get(k + 1) {
            Some((next, _)) => *next,
            None if *s > 0.0 => 0.0,
            None => -1.0,
        };
        points.push(PrPoint {
            threshold: (s + below) / 2.0,
            precision: precision(c),
            recall: recall(c),
            is_grid_marker: false,
            counts: *c,
        });
    }
    for &tau in grid {
        let mut c = ConfusionCounts::default();
        for (&s, &l) in scores.iter().zip(&labels) {
            c.record(is_positive(s, tau), l);
        }
        points.push(PrPoint {
            threshold: tau,
            precision: precision(&c),
            recall: recall(&c),
            is_grid_marker: true,
            counts: c,
        });
    }
    // descending threshold; at equal thresholds fine points come first
    points.sort_by(|a, b| {
        b.threshold
            .total_cmp(&a.threshold)
            .then(a.is_grid_marker.cmp(&b.is_grid_marker))
    });

    let average_precision = match average_precision(&scores, &labels) {
        Ok(ap) => Some(ap),
        Err(PrError::NoPositives) => None,
        Err(e) => return Err(e),
    };
    Ok(PrCurve {
        task,
        class_index,
        class_name: es.schema().task(task).class_names[class_index].clone(),
        points,
        average_precision,
    })
}

/// Curves for every class of a task, in class order.
pub fn pr_curves(es: &EvalSet, task: Task, grid: &[f64]) -> Vec<PrCurve> {
    (0..es.class_count(task))
        .map(|j| pr_curve(es, task, j, grid).expect("class index in range"))
        .collect()
}
