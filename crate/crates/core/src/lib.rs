//! Ground-texture visual localization toolkit.
//!
//! Implements the classic five-stage feature pipeline for downward-facing
//! ground-texture imagery — detect, select, describe, match, estimate pose —
//! together with a synthetic-transform evaluation framework (repeatability,
//! ambiguity, matching precision, pose success rate) and a batch benchmark
//! CLI that emits CSV/markdown result tables.
//!
//! Pipeline stages map onto the top-level modules:
//!
//! 1. [`imgcore`] — 8-bit grayscale images, PGM I/O, blur/gradients/integral
//!    images and bicubic rotation.
//! 2. [`detect`] — Harris/Shi-Tomasi, FAST, CenSurE (difference-of-boxes) and
//!    DoG keypoint detectors with orientation assignment.
//! 3. [`select`] — keypoint budget selection: top-N NMS, adaptive NMS via
//!    square covering (SSC), and grid bucketing.
//! 4. [`describe`] — BRIEF / steered BRIEF, LATCH, and a gradient-histogram
//!    descriptor.
//! 5. [`matchpose`] — ratio-test matching and RANSAC 2D rigid/similarity
//!    pose estimation.
//!
//! [`synth`] generates ground-truthed test cases (rotation, mask translation,
//! noise, gamma), [`metrics`] scores them, and [`bench`] orchestrates whole
//! experiment grids.

pub mod bench;
pub mod describe;
pub mod detect;
mod error;
pub mod imgcore;
pub mod matchpose;
pub mod metrics;
pub mod select;
pub mod synth;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
