//! Keypoint detectors: structure-tensor corners (Harris, Shi-Tomasi), FAST
//! segment-test corners, CenSurE difference-of-boxes, and DoG scale-space
//! blobs with orientation assignment.

mod censure;
mod corners;
mod dog;
mod fast;
mod orientation;

pub use censure::{detect_censure, CensureConfig};
pub use corners::{detect_corners, CornerConfig, CornerResponse};
pub use dog::{detect_dog, DogConfig};
pub use fast::{detect_fast, FastConfig};
pub use orientation::assign_orientation;

use crate::imgcore::GrayImage;
use crate::synth::RegionMask;
use crate::{Error, Result};

/// A detected interest point: sub-pixel position, region diameter,
/// optional orientation (degrees in [0, 360)), response score, octave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Keypoint {
    pub x: f64,
    pub y: f64,
    pub size: f64,
    pub angle: Option<f64>,
    pub response: f64,
    pub octave: u32,
}

impl Keypoint {
    pub fn pos(&self) -> (f64, f64) {
        (self.x, self.y)
    }
}

/// Stable detector output ordering: response descending, ties by (y, x).
pub(crate) fn sort_keypoints(kps: &mut [Keypoint]) {
    kps.sort_by(|a, b| {
        b.response
            .partial_cmp(&a.response)
            .unwrap()
            .then(a.y.partial_cmp(&b.y).unwrap())
            .then(a.x.partial_cmp(&b.x).unwrap())
    });
}

#[inline]
pub(crate) fn in_mask(mask: Option<&RegionMask>, x: f64, y: f64) -> bool {
    mask.map_or(true, |m| m.contains(x, y))
}

/// Detector selected by name, with its configuration; the unit the bench
/// config addresses.
#[derive(Debug, Clone)]
pub enum Detector {
    Harris(CornerConfig),
    Gftt(CornerConfig),
    Fast(FastConfig),
    Censure(CensureConfig),
    Dog(DogConfig),
}

impl Detector {
    /// Resolve a detector name ("harris", "gftt", "fast", "censure",
    /// "dog") with default parameters.
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "harris" => Ok(Detector::Harris(CornerConfig::default())),
            "gftt" => Ok(Detector::Gftt(CornerConfig::default())),
            "fast" => Ok(Detector::Fast(FastConfig::default())),
            "censure" => Ok(Detector::Censure(CensureConfig::default())),
            "dog" => Ok(Detector::Dog(DogConfig::default())),
            other => Err(Error::Config(format!("unknown detector '{other}'"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Detector::Harris(_) => "harris",
            Detector::Gftt(_) => "gftt",
            Detector::Fast(_) => "fast",
            Detector::Censure(_) => "censure",
            Detector::Dog(_) => "dog",
        }
    }

    /// Whether keypoints carry an orientation.
    pub fn assigns_orientation(&self) -> bool {
        matches!(self, Detector::Dog(_))
    }

    pub fn detect(&self, img: &GrayImage, mask: Option<&RegionMask>) -> Result<Vec<Keypoint>> {
        match self {
            Detector::Harris(cfg) => detect_corners(img, cfg, CornerResponse::Harris, mask),
            Detector::Gftt(cfg) => detect_corners(img, cfg, CornerResponse::MinEigenvalue, mask),
            Detector::Fast(cfg) => detect_fast(img, cfg, mask),
            Detector::Censure(cfg) => detect_censure(img, cfg, mask),
            Detector::Dog(cfg) => detect_dog(img, cfg, mask),
        }
    }
}
