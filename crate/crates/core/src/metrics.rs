//! Binarization and the F1 family: per-sample ("overall") and per-class
//! ("mean") scores for one task at one threshold.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::LengthMismatch;
use crate::model::{ConfusionCounts, EvalSet, Task};

/// Value of F1 when `tp = fp = fn = 0`, i.e. truth and prediction agree that
/// nothing is positive.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmptyF1 {
    #[default]
    One,
    Zero,
}

impl EmptyF1 {
    pub fn value(self) -> f64 {
        match self {
            EmptyF1::One => 1.0,
            EmptyF1::Zero => 0.0,
        }
    }
}

impl fmt::Display for EmptyF1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EmptyF1::One => "one",
            EmptyF1::Zero => "zero",
        })
    }
}

impl std::str::FromStr for EmptyF1 {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "one" | "1" => Ok(EmptyF1::One),
            "zero" | "0" => Ok(EmptyF1::Zero),
            other => Err(format!("unknown empty_f1 convention `{other}` (expected one or zero)")),
        }
    }
}

/// A score counts as positive only when strictly above `tau`.
#[inline]
pub fn is_positive(score: f64, tau: f64) -> bool {
    score > tau
}

pub fn binarize(scores: &[f64], tau: f64) -> Vec<bool> {
    scores.iter().map(|&s| is_positive(s, tau)).collect()
}

pub fn confusion(pred: &[bool], truth: &[bool]) -> Result<ConfusionCounts, LengthMismatch> {
    if pred.len() != truth.len() {
        return Err(LengthMismatch {
            left: pred.len(),
            right: truth.len(),
        });
    }
    let mut c = ConfusionCounts::default();
    for (&p, &t) in pred.iter().zip(truth) {
        c.record(p, t);
    }
    Ok(c)
}

/// `tp / (tp + fp)`, or 0 when nothing was predicted positive.
pub fn precision(c: &ConfusionCounts) -> f64 {
    ratio(c.tp, c.tp + c.fp)
}

/// `tp / (tp + fn)`, or 0 when nothing is actually positive.
pub fn recall(c: &ConfusionCounts) -> f64 {
    ratio(c.tp, c.tp + c.fn_)
}

/// `2tp / (2tp + fp + fn)` with the default empty-agreement convention.
pub fn f1(c: &ConfusionCounts) -> f64 {
    f1_with(c, EmptyF1::One)
}

pub fn f1_with(c: &ConfusionCounts, empty: EmptyF1) -> f64 {
    let denom = 2 * c.tp + c.fp + c.fn_;
    if denom == 0 {
        empty.value()
    } else {
        (2 * c.tp) as f64 / denom as f64
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// F1 summary of one task at one threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskMetrics {
    /// Mean of `per_sample_f1`.
    pub overall_f1: f64,
    /// Mean of `per_class_f1`.
    pub mean_f1: f64,
    pub per_class_f1: Vec<f64>,
    pub per_sample_f1: Vec<f64>,
}

/// Per-class confusion counts pooled over every record, plus per-record counts.
pub(crate) fn task_confusions(es: &EvalSet, task: Task, tau: f64) -> (Vec<ConfusionCounts>, Vec<ConfusionCounts>) {
    let n_classes = es.class_count(task);
    let mut per_class = vec![ConfusionCounts::default(); n_classes];
    let mut per_sample = Vec::with_capacity(es.len());
    for rec in es.records() {
        let mut sample = ConfusionCounts::default();
        for ((&s, &t), class) in rec.scores(task).iter().zip(rec.truth(task)).zip(per_class.iter_mut()) {
            let p = is_positive(s, tau);
            sample.record(p, t);
            class.record(p, t);
        }
        per_sample.push(sample);
    }
    (per_class, per_sample)
}

pub fn task_metrics(es: &EvalSet, task: Task, tau: f64, empty: EmptyF1) -> TaskMetrics {
    let (per_class, per_sample) = task_confusions(es, task, tau);
    let per_class_f1: Vec<f64> = per_class.iter().map(|c| f1_with(c, empty)).collect();
    let per_sample_f1: Vec<f64> = per_sample.iter().map(|c| f1_with(c, empty)).collect();
    TaskMetrics {
        overall_f1: mean(&per_sample_f1),
        mean_f1: mean(&per_class_f1),
        per_class_f1,
        per_sample_f1,
    }
}
