#![allow(dead_code)]

use proptest::prelude::*;
use threshscope_core::{validate_evalset, EvalSchema, EvalSet, RawRecord};

/// Scores drawn either from a coarse lattice (to force ties and grid-boundary
/// equalities) or from the continuous unit interval.
pub fn score() -> impl Strategy<Value = f64> {
    prop_oneof![(0u32..=20).prop_map(|k| k as f64 / 20.0), 0.0f64..=1.0]
}

pub fn label() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), Just(1.0)]
}

fn record(n_action: usize, n_reason: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>)> {
    (
        prop::collection::vec(score(), n_action),
        prop::collection::vec(score(), n_reason),
        prop::collection::vec(label(), n_action),
        prop::collection::vec(label(), n_reason),
    )
}

/// Action scores, reason scores, action labels, reason labels.
pub type Row = (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>);

pub fn build(n_action: usize, n_reason: usize, rows: Vec<Row>) -> EvalSet {
    let raws = rows
        .into_iter()
        .enumerate()
        .map(|(i, (a, r, al, rl))| RawRecord {
            id: format!("r{i}"),
            action_scores: a,
            reason_scores: r,
            action_labels: al,
            reason_labels: rl,
        })
        .collect();
    validate_evalset(raws, EvalSchema::numbered(n_action, n_reason).unwrap()).unwrap()
}

/// Evaluation sets with up to `max_records` records and up to `max_classes`
/// classes per task.
pub fn evalset(max_records: usize, max_classes: usize) -> impl Strategy<Value = EvalSet> {
    (1..=max_classes, 1..=max_classes).prop_flat_map(move |(na, nr)| {
        prop::collection::vec(record(na, nr), 1..=max_records).prop_map(move |rows| build(na, nr, rows))
    })
}
