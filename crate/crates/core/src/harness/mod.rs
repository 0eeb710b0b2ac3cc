//! Data ingestion, preprocessing, resampling, cross-validation, metrics,
//! the approximation study and model persistence.

pub mod approx;
pub mod cv;
pub mod dataset;
pub mod metrics;
pub mod persist;
pub mod preprocess;
pub mod resample;

pub use approx::{approx_study, ApproxRow};
pub use cv::{cross_validate, nested_cross_validate, CvReport, EvalConfig, Hyper, ModelFamily, NestedReport};
pub use dataset::{load_csv, Attribute, AttributeKind, Dataset, Value};
pub use metrics::balanced_accuracy;
pub use persist::{ModelDocument, StoredModel};
pub use preprocess::{ColumnStats, Preprocessor};
pub use resample::{oversample, stratified_folds, sub_seed};
