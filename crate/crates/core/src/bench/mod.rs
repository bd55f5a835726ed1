//! Benchmark orchestration: run configuration, pair manifests, feature
//! caching, experiment drivers, and report emission.

pub mod cache;
pub mod cli;
pub mod config;
pub mod manifest;
pub mod report;
pub mod run;

pub use cache::{load_features, save_features};
pub use config::RunConfig;
pub use manifest::{load_manifest, parse_manifest, PairManifest, PairRow, PairTag};
pub use report::{write_report, EvalReport, ReportFormat, ReportRow};
pub use run::{run_detector_eval, run_matching_eval, run_pose_eval};
