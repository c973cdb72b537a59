//! Brute-force reference implementations used to cross-check the production
//! metric and average-precision code.
//!
//! Nothing here calls into `metrics` or `pr`: counts are re-tallied with
//! explicit loops and every cut point is rescanned from scratch.

use crate::error::PrError;
use crate::metrics::{EmptyF1, TaskMetrics};
use crate::model::{EvalSet, Task};

/// Naive double-loop recount of every F1 quantity.
pub fn oracle_task_metrics(es: &EvalSet, task: Task, tau: f64, empty: EmptyF1) -> TaskMetrics {
    let records = es.records();
    let n_classes = es.schema().task(task).class_names.len();
    let empty_value = match empty {
        EmptyF1::One => 1.0,
        EmptyF1::Zero => 0.0,
    };
    let f1_of = |tp: u64, fp: u64, fn_: u64| -> f64 {
        if tp == 0 && fp == 0 && fn_ == 0 {
            empty_value
        } else {
            (2 * tp) as f64 / (2 * tp + fp + fn_) as f64
        }
    };

    let mut per_sample_f1 = Vec::new();
    for rec in records {
        let (scores, truth) = match task {
            Task::Action => (&rec.action_scores, &rec.action_truth),
            Task::Reason => (&rec.reason_scores, &rec.reason_truth),
        };
        let (mut tp, mut fp, mut fn_) = (0u64, 0u64, 0u64);
        for j in 0..n_classes {
            let predicted = scores[j] > tau;
            if predicted && truth[j] {
                tp += 1;
            } else if predicted {
                fp += 1;
            } else if truth[j] {
                fn_ += 1;
            }
        }
        per_sample_f1.push(f1_of(tp, fp, fn_));
    }

    let mut per_class_f1 = Vec::new();
    for j in 0..n_classes {
        let (mut tp, mut fp, mut fn_) = (0u64, 0u64, 0u64);
        for rec in records {
            let (scores, truth) = match task {
                Task::Action => (&rec.action_scores, &rec.action_truth),
                Task::Reason => (&rec.reason_scores, &rec.reason_truth),
            };
            let predicted = scores[j] > tau;
            if predicted && truth[j] {
                tp += 1;
            } else if predicted {
                fp += 1;
            } else if truth[j] {
                fn_ += 1;
            }
        }
        per_class_f1.push(f1_of(tp, fp, fn_));
    }

    let mut sample_sum = 0.0;
    for v in &per_sample_f1 {
        sample_sum += v;
    }
    let mut class_sum = 0.0;
    for v in &per_class_f1 {
        class_sum += v;
    }
    TaskMetrics {
        overall_f1: sample_sum / per_sample_f1.len() as f64,
        mean_f1: class_sum / per_class_f1.len() as f64,
        per_class_f1,
        per_sample_f1,
    }
}

/// Step-summed average precision by full rescan at every distinct score.
pub fn oracle_average_precision(scores: &[f64], labels: &[bool]) -> Result<f64, PrError> {
    if scores.len() != labels.len() {
        return Err(PrError::LengthMismatch {
            scores: scores.len(),
            labels: labels.len(),
        });
    }
    let positives = labels.iter().filter(|&&l| l).count();
    if positives == 0 {
        return Err(PrError::NoPositives);
    }

    let mut cuts: Vec<f64> = scores.to_vec();
    cuts.sort_by(|a, b| b.partial_cmp(a).expect("scores are finite"));
    cuts.dedup();

    let mut ap = 0.0;
    let mut prev_recall = 0.0;
    for cut in cuts {
        let mut tp = 0usize;
        let mut fp = 0usize;
        for (s, &l) in scores.iter().zip(labels) {
            if *s >= cut {
                if l {
                    tp += 1;
                } else {
                    fp += 1;
                }
            }
        }
        let precision = tp as f64 / (tp + fp) as f64;
        let recall = tp as f64 / positives as f64;
        ap += (recall - prev_recall) * precision;
        prev_recall = recall;
    }
    Ok(ap)
}
