//! Benchmark harness: dataset grids, persisted oracle tables, accuracy and
//! latency runs, and diagnostic data series.

pub mod accuracy;
pub mod datasets;
pub mod figures;
pub mod latency;
pub mod reference;

pub use accuracy::{max_ulp_target, run_accuracy, ErrorStats, Variant};
pub use datasets::{generate, BenchCase, Dataset};
pub use latency::{run_latency, LatencyConfig, LatencyStats};
pub use reference::{load, load_from};

use serde::Serialize;

/// One dataset entry of the JSON summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetSummary {
    pub dataset: Dataset,
    pub variant: Variant,
    pub count: usize,
    pub max_ulp: Option<f64>,
    pub max_abs: Option<f64>,
    pub ns_per_call: Option<f64>,
}
