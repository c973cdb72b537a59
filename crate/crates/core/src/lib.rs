//! Decision-threshold sensitivity analysis for two-task (action / reason)
//! multi-label classifiers, working from recorded score vectors.
//!
//! The pipeline is: validate records ([`model`]), score them at a threshold
//! ([`metrics`]), sweep a threshold grid and analyse the result ([`sweep`]),
//! build per-class precision-recall curves ([`pr`]), and profile dataset
//! complexity ([`complexity`]). [`io`] handles every file format.

pub mod complexity;
pub mod error;
pub mod io;
pub mod metrics;
pub mod model;
pub mod oracle;
pub mod pr;
pub mod sweep;
pub mod synth;

pub use complexity::{
    class_distribution, compare_against, compare_datasets, complexity_score, densities, ComplexityWeights,
    DatasetComparison, DensityReport, DistributionTable, ObjectCounts, Ratio,
};
pub use error::{
    ComplexityError, ConfigError, FixtureError, IoError, PrError, SchemaError, ValidationError, Violation,
};
pub use metrics::{binarize, confusion, f1, f1_with, precision, recall, task_metrics, EmptyF1, TaskMetrics};
pub use model::{
    validate_evalset, ConfusionCounts, EvalSchema, EvalSet, PredictionRecord, RawRecord, Task, TaskSchema,
    ThresholdPair,
};
pub use pr::{average_precision, pr_curve, pr_curves, PrCurve, PrPoint};
pub use sweep::{
    find_peaks, load_landscape_fixture, robust_region, FixtureTable, Metric, MetricCell, MetricLandscape, PeakReport,
    Provenance, RobustRegion, SweepConfig,
};
pub use synth::{generate, SynthSpec};
