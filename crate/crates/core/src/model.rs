//! Shared data model: task schemas, prediction records, validated evaluation
//! sets, threshold pairs and confusion counts.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{SchemaError, ValidationError, Violation};

/// Which of the two prediction heads a value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Action,
    Reason,
}

impl Task {
    pub const BOTH: [Task; 2] = [Task::Action, Task::Reason];

    pub fn as_str(self) -> &'static str {
        match self {
            Task::Action => "action",
            Task::Reason => "reason",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "action" => Ok(Task::Action),
            "reason" => Ok(Task::Reason),
            other => Err(format!("unknown task `{other}` (expected action or reason)")),
        }
    }
}

/// Ordered class labels for one task.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSchema {
    pub task_name: String,
    pub class_names: Vec<String>,
}

impl TaskSchema {
    pub fn new(
        task_name: impl Into<String>,
        class_names: impl IntoIterator<Item = impl Into<String>>,
    ) -> Result<Self, SchemaError> {
        let schema = Self {
            task_name: task_name.into(),
            class_names: class_names.into_iter().map(Into::into).collect(),
        };
        schema.check()?;
        Ok(schema)
    }

    /// Schema with generated class names `<prefix>_0 .. <prefix>_{n-1}`.
    pub fn numbered(task_name: &str, n: usize) -> Result<Self, SchemaError> {
        Self::new(task_name, (0..n).map(|j| format!("{task_name}_{j}")))
    }

    pub fn len(&self) -> usize {
        self.class_names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_names.is_empty()
    }

    pub fn check(&self) -> Result<(), SchemaError> {
        if self.task_name.trim().is_empty() {
            return Err(SchemaError::EmptyTaskName);
        }
        if self.class_names.is_empty() {
            return Err(SchemaError::NoClasses {
                task: self.task_name.clone(),
            });
        }
        let mut seen = HashSet::new();
        for name in &self.class_names {
            if name.trim().is_empty() {
                return Err(SchemaError::EmptyClassName {
                    task: self.task_name.clone(),
                });
            }
            if !seen.insert(name.as_str()) {
                return Err(SchemaError::DuplicateClassName {
                    task: self.task_name.clone(),
                    name: name.clone(),
                });
            }
        }
        Ok(())
    }
}

/// The action/reason task pair every record is scored against.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalSchema {
    pub action_task: TaskSchema,
    pub reason_task: TaskSchema,
}

pub const ACTION_CLASSES: [&str; 4] = ["move_forward", "stop_slow_down", "turn_left", "turn_right"];

pub const REASON_CLASSES: [&str; 21] = [
    "follow_traffic",
    "road_is_clear",
    "traffic_light_is_green",
    "obstacle_car",
    "obstacle_pedestrian",
    "obstacle_rider",
    "obstacle_others",
    "traffic_light",
    "traffic_sign",
    "front_car_turning_left",
    "on_left_turn_lane",
    "traffic_light_allows_left",
    "front_car_turning_right",
    "on_right_turn_lane",
    "traffic_light_allows_right",
    "obstacles_on_left_lane",
    "no_lane_on_left",
    "solid_line_on_left",
    "obstacles_on_right_lane",
    "no_lane_on_right",
    "solid_line_on_right",
];

impl EvalSchema {
    pub fn new(action_task: TaskSchema, reason_task: TaskSchema) -> Result<Self, SchemaError> {
        let schema = Self {
            action_task,
            reason_task,
        };
        schema.check()?;
        Ok(schema)
    }

    /// The 4 action / 21 reason class layout used by the driving benchmarks.
    pub fn driving_default() -> Self {
        Self {
            action_task: TaskSchema {
                task_name: "action".into(),
                class_names: ACTION_CLASSES.iter().map(|s| s.to_string()).collect(),
            },
            reason_task: TaskSchema {
                task_name: "reason".into(),
                class_names: REASON_CLASSES.iter().map(|s| s.to_string()).collect(),
            },
        }
    }

    /// Schema with numbered class names, for synthetic or anonymous data.
    pub fn numbered(n_action: usize, n_reason: usize) -> Result<Self, SchemaError> {
        Self::new(
            TaskSchema::numbered("action", n_action)?,
            TaskSchema::numbered("reason", n_reason)?,
        )
    }

    pub fn task(&self, task: Task) -> &TaskSchema {
        match task {
            Task::Action => &self.action_task,
            Task::Reason => &self.reason_task,
        }
    }

    pub fn check(&self) -> Result<(), SchemaError> {
        self.action_task.check()?;
        self.reason_task.check()?;
        if self.action_task.task_name == self.reason_task.task_name {
            return Err(SchemaError::AliasedTasks {
                name: self.action_task.task_name.clone(),
            });
        }
        Ok(())
    }
}

/// A record as it arrives from outside, before validation. Labels are kept as
/// numbers so fractional or out-of-range labels can be reported instead of
/// failing deserialization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRecord {
    pub id: String,
    pub action_scores: Vec<f64>,
    pub reason_scores: Vec<f64>,
    pub action_labels: Vec<f64>,
    pub reason_labels: Vec<f64>,
}

/// One validated sample: per-class scores and binary truth for both tasks.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionRecord {
    pub id: String,
    pub action_scores: Vec<f64>,
    pub reason_scores: Vec<f64>,
    pub action_truth: Vec<bool>,
    pub reason_truth: Vec<bool>,
}

impl PredictionRecord {
    pub fn scores(&self, task: Task) -> &[f64] {
        match task {
            Task::Action => &self.action_scores,
            Task::Reason => &self.reason_scores,
        }
    }

    pub fn truth(&self, task: Task) -> &[bool] {
        match task {
            Task::Action => &self.action_truth,
            Task::Reason => &self.reason_truth,
        }
    }

    pub fn to_raw(&self) -> RawRecord {
        let labels = |t: &[bool]| t.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
        RawRecord {
            id: self.id.clone(),
            action_scores: self.action_scores.clone(),
            reason_scores: self.reason_scores.clone(),
            action_labels: labels(&self.action_truth),
            reason_labels: labels(&self.reason_truth),
        }
    }
}

impl From<PredictionRecord> for RawRecord {
    fn from(r: PredictionRecord) -> Self {
        r.to_raw()
    }
}

/// A non-empty, validated collection of records sharing one schema.
///
/// Only [`validate_evalset`] constructs it, so every instance satisfies the
/// record and schema invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalSet {
    schema: EvalSchema,
    records: Vec<PredictionRecord>,
}

impl EvalSet {
    pub fn schema(&self) -> &EvalSchema {
        &self.schema
    }

    pub fn records(&self) -> &[PredictionRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn class_count(&self, task: Task) -> usize {
        self.schema.task(task).len()
    }

    /// Scores of one class across all records, in record order.
    pub fn class_scores(&self, task: Task, class: usize) -> Vec<f64> {
        self.records.iter().map(|r| r.scores(task)[class]).collect()
    }

    pub fn class_truth(&self, task: Task, class: usize) -> Vec<bool> {
        self.records.iter().map(|r| r.truth(task)[class]).collect()
    }
}

/// Validate raw records against a schema.
///
/// Every violation is collected, so the error names each offending record id
/// and field rather than stopping at the first problem.
pub fn validate_evalset(raw_records: Vec<RawRecord>, schema: EvalSchema) -> Result<EvalSet, ValidationError> {
    schema.check().map_err(ValidationError::Schema)?;
    if raw_records.is_empty() {
        return Err(ValidationError::Invalid(vec![Violation::EmptySet]));
    }

    let n_action = schema.action_task.len();
    let n_reason = schema.reason_task.len();
    let mut violations = Vec::new();
    let mut seen = HashSet::with_capacity(raw_records.len());

    for raw in &raw_records {
        if !seen.insert(raw.id.as_str()) {
            violations.push(Violation::DuplicateId { id: raw.id.clone() });
        }
        let fields: [(&str, &[f64], usize, bool); 4] = [
            ("action_scores", &raw.action_scores, n_action, false),
            ("reason_scores", &raw.reason_scores, n_reason, false),
            ("action_labels", &raw.action_labels, n_action, true),
            ("reason_labels", &raw.reason_labels, n_reason, true),
        ];
        for (field, values, expected, is_label) in fields {
            if values.len() != expected {
                violations.push(Violation::LengthMismatch {
                    id: raw.id.clone(),
                    field,
                    expected,
                    found: values.len(),
                });
                continue;
            }
            for (index, &value) in values.iter().enumerate() {
                if is_label {
                    if value != 0.0 && value != 1.0 {
                        violations.push(Violation::LabelNotBinary {
                            id: raw.id.clone(),
                            field,
                            index,
                            value,
                        });
                    }
                } else if !value.is_finite() || !(0.0..=1.0).contains(&value) {
                    violations.push(Violation::ScoreOutOfRange {
                        id: raw.id.clone(),
                        field,
                        index,
                        value,
                    });
                }
            }
        }
    }

    if !violations.is_empty() {
        return Err(ValidationError::Invalid(violations));
    }

    let to_bool = |v: Vec<f64>| v.into_iter().map(|x| x == 1.0).collect();
    let records = raw_records
        .into_iter()
        .map(|raw| PredictionRecord {
            id: raw.id,
            action_scores: raw.action_scores,
            reason_scores: raw.reason_scores,
            action_truth: to_bool(raw.action_labels),
            reason_truth: to_bool(raw.reason_labels),
        })
        .collect();
    Ok(EvalSet { schema, records })
}

/// Decision thresholds for the two tasks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPair {
    pub tau_action: f64,
    pub tau_reason: f64,
}

impl ThresholdPair {
    pub fn new(tau_action: f64, tau_reason: f64) -> Option<Self> {
        let ok = |t: f64| (0.0..=1.0).contains(&t);
        (ok(tau_action) && ok(tau_reason)).then_some(Self { tau_action, tau_reason })
    }

    pub fn get(&self, task: Task) -> f64 {
        match task {
            Task::Action => self.tau_action,
            Task::Reason => self.tau_reason,
        }
    }
}

/// TP/FP/FN/TN tallies over a set of (prediction, truth) pairs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
}

impl ConfusionCounts {
    #[inline]
    pub fn record(&mut self, pred: bool, truth: bool) {
        match (pred, truth) {
            (true, true) => self.tp += 1,
            (true, false) => self.fp += 1,
            (false, true) => self.fn_ += 1,
            (false, false) => self.tn += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn predicted_positive(&self) -> u64 {
        self.tp + self.fp
    }

    pub fn actual_positive(&self) -> u64 {
        self.tp + self.fn_
    }
}

impl std::ops::AddAssign for ConfusionCounts {
    fn add_assign(&mut self, rhs: Self) {
        self.tp += rhs.tp;
        self.fp += rhs.fp;
        self.fn_ += rhs.fn_;
        self.tn += rhs.tn;
    }
}
