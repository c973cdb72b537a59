use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

use crate::model::Task;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("task name is empty")]
    EmptyTaskName,
    #[error("task `{task}` has no classes")]
    NoClasses { task: String },
    #[error("task `{task}` has an empty class name")]
    EmptyClassName { task: String },
    #[error("task `{task}` lists class `{name}` more than once")]
    DuplicateClassName { task: String, name: String },
    #[error("action and reason tasks share the name `{name}`")]
    AliasedTasks { name: String },
}

/// A single reason a record set failed validation.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    EmptySet,
    DuplicateId {
        id: String,
    },
    LengthMismatch {
        id: String,
        field: &'static str,
        expected: usize,
        found: usize,
    },
    ScoreOutOfRange {
        id: String,
        field: &'static str,
        index: usize,
        value: f64,
    },
    LabelNotBinary {
        id: String,
        field: &'static str,
        index: usize,
        value: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptySet => write!(f, "evaluation set is empty"),
            Violation::DuplicateId { id } => write!(f, "record `{id}`: duplicate id"),
            Violation::LengthMismatch {
                id,
                field,
                expected,
                found,
            } => write!(
                f,
                "record `{id}`: {field} has {found} entries, schema expects {expected}"
            ),
            Violation::ScoreOutOfRange {
                id,
                field,
                index,
                value,
            } => write!(
                f,
                "record `{id}`: {field}[{index}] = {value} is not a probability in [0,1]"
            ),
            Violation::LabelNotBinary {
                id,
                field,
                index,
                value,
            } => write!(f, "record `{id}`: {field}[{index}] = {value} is not 0 or 1"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("invalid schema: {0}")]
    Schema(#[from] SchemaError),
    #[error("{}", render_violations(.0))]
    Invalid(Vec<Violation>),
}

impl ValidationError {
    pub fn violations(&self) -> &[Violation] {
        match self {
            ValidationError::Schema(_) => &[],
            ValidationError::Invalid(v) => v,
        }
    }

    pub fn is_empty_set(&self) -> bool {
        matches!(self.violations(), [Violation::EmptySet])
    }
}

fn render_violations(v: &[Violation]) -> String {
    let mut out = format!("{} validation error(s)", v.len());
    for item in v {
        out.push_str("\n  - ");
        out.push_str(&item.to_string());
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("length mismatch: {left} vs {right}")]
pub struct LengthMismatch {
    pub left: usize,
    pub right: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("threshold range must satisfy 0 <= tau_min <= tau_max <= 1 (got {tau_min}..{tau_max})")]
    BadRange { tau_min: f64, tau_max: f64 },
    #[error("step must be positive and finite (got {0})")]
    BadStep(f64),
    #[error("step {step} does not evenly divide [{tau_min}, {tau_max}]")]
    StepDoesNotDivide { tau_min: f64, tau_max: f64, step: f64 },
    #[error("relative tolerance must be finite and >= 0 (got {0})")]
    BadTolerance(f64),
    #[error("{0}")]
    Synth(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FixtureError {
    #[error("malformed fixture table: {0}")]
    MalformedTable(String),
    #[error("fixture thresholds {found:?} do not match the configured grid {expected:?}")]
    GridMismatch { expected: Vec<f64>, found: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PrError {
    #[error("class index {index} out of range for {task} task with {count} classes")]
    ClassIndexOutOfRange { task: Task, index: usize, count: usize },
    #[error("average precision is undefined without positive labels")]
    NoPositives,
    #[error("scores and labels differ in length ({scores} vs {labels})")]
    LengthMismatch { scores: usize, labels: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ComplexityError {
    #[error("dataset `{dataset}` has zero images")]
    ZeroImages { dataset: String },
    #[error("density {0} is negative or not finite")]
    NegativeDensity(f64),
    #[error("comparison needs at least two datasets (got {0})")]
    TooFewReports(usize),
    #[error("unknown baseline dataset `{0}`")]
    UnknownBaseline(String),
}

/// Failures reading or writing the external file formats.
#[derive(Debug, Error)]
pub enum IoError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}:{line}: {reason}", path.display())]
    Parse { path: PathBuf, line: usize, reason: String },
    #[error("{}: no schema header line and no schema file supplied", path.display())]
    SchemaMissing { path: PathBuf },
    #[error("{}: embedded schema header disagrees with the supplied schema file", path.display())]
    SchemaConflict { path: PathBuf },
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Fixture(#[from] FixtureError),
    #[error(transparent)]
    Complexity(#[from] ComplexityError),
}

impl IoError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        IoError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, reason: impl Into<String>) -> Self {
        IoError::Parse {
            path: path.into(),
            line,
            reason: reason.into(),
        }
    }

    /// True when the failure is caused by the input content rather than the
    /// environment (missing permissions, full disk, ...).
    pub fn is_input_error(&self) -> bool {
        !matches!(self, IoError::Io { .. })
    }
}
