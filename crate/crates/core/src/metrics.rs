//! Evaluation measures: IoU keypoint correspondence, repeatability,
//! ambiguity, keypoint-count floor, match correctness/precision, and pose
//! success.

use crate::detect::Keypoint;
use crate::matchpose::{Match, Pose2D};
use crate::synth::{GroundTruth2D, RegionMask};
use crate::{Error, Result};

/// Thresholds shared by all evaluation measures.
#[derive(Debug, Clone)]
pub struct MetricsConfig {
    pub iou_threshold: f64,
    pub n_min_keypoints: usize,
    /// Pose success: image-center displacement bound in pixels.
    pub pos_threshold: f64,
    /// Pose success: absolute angle error bound in degrees.
    pub ang_threshold: f64,
}

impl Default for MetricsConfig {
    fn default() -> Self {
        Self {
            iou_threshold: 0.5,
            n_min_keypoints: 100,
            pos_threshold: 30.0,
            ang_threshold: 1.5,
        }
    }
}

/// Detection-stage scores for one image pair.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionScore {
    /// Fraction of considered test keypoints refound in the reference set;
    /// None when no test keypoint falls in the mask intersection.
    pub repeatability: Option<f64>,
    /// Mean number of reference matches over matched test keypoints (>= 1);
    /// None when nothing matched.
    pub ambiguity: Option<f64>,
    /// True when the full-frame test detection count falls below the floor.
    pub below_n: bool,
    pub n_test_kps: usize,
    pub n_ref_kps: usize,
}

/// Match-stage scores for one image pair.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchScore {
    pub n_correct: usize,
    pub n_matches: usize,
    /// None when there are zero matches.
    pub precision: Option<f64>,
}

/// Area of the intersection of two discs at center distance `d`.
fn circle_intersection_area(r1: f64, r2: f64, d: f64) -> f64 {
    if d >= r1 + r2 {
        return 0.0;
    }
    let rmin = r1.min(r2);
    if d <= (r1 - r2).abs() {
        return std::f64::consts::PI * rmin * rmin;
    }
    let a1 = ((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1)).clamp(-1.0, 1.0);
    let a2 = ((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2)).clamp(-1.0, 1.0);
    let tri = 0.5
        * ((-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2))
            .max(0.0)
            .sqrt();
    r1 * r1 * a1.acos() + r2 * r2 * a2.acos() - tri
}

/// IoU of the two keypoint regions in the reference coordinate frame.
/// Regions are discs of diameter = keypoint size; the test keypoint is
/// mapped through the inverse ground truth (center transformed, radius
/// scaled by 1/gt.scale).
pub fn keypoint_iou(test_kp: &Keypoint, ref_kp: &Keypoint, gt: &GroundTruth2D) -> f64 {
    let inv = gt.inverse();
    let (tx, ty) = inv.apply((test_kp.x, test_kp.y));
    let tr = test_kp.size / 2.0 / gt.scale;
    let rr = ref_kp.size / 2.0;
    if tr <= 0.0 || rr <= 0.0 {
        return 0.0;
    }
    let d = ((tx - ref_kp.x).powi(2) + (ty - ref_kp.y).powi(2)).sqrt();
    let inter = circle_intersection_area(tr, rr, d);
    let union = std::f64::consts::PI * (tr * tr + rr * rr) - inter;
    (inter / union).clamp(0.0, 1.0)
}

/// Repeatability and ambiguity over the mask intersection. Both masks are
/// given in reference-frame coordinates; test keypoints are mapped into the
/// reference frame before the mask check. A test keypoint "matches" any
/// reference keypoint with IoU above the threshold.
pub fn repeatability_and_ambiguity(
    ref_kps: &[Keypoint],
    test_kps: &[Keypoint],
    gt: &GroundTruth2D,
    ref_mask: &RegionMask,
    test_mask: &RegionMask,
    cfg: &MetricsConfig,
) -> DetectionScore {
    let inv = gt.inverse();
    let in_intersection =
        |x: f64, y: f64| ref_mask.contains(x, y) && test_mask.contains(x, y);
    let considered_ref: Vec<&Keypoint> = ref_kps
        .iter()
        .filter(|k| in_intersection(k.x, k.y))
        .collect();
    let considered_test: Vec<&Keypoint> = test_kps
        .iter()
        .filter(|k| {
            let (x, y) = inv.apply((k.x, k.y));
            in_intersection(x, y)
        })
        .collect();

    let mut matched = 0usize;
    let mut match_total = 0usize;
    for t in &considered_test {
        let count = considered_ref
            .iter()
            .filter(|r| keypoint_iou(t, r, gt) > cfg.iou_threshold)
            .count();
        if count > 0 {
            matched += 1;
            match_total += count;
        }
    }
    let repeatability = if considered_test.is_empty() {
        None
    } else {
        Some(matched as f64 / considered_test.len() as f64)
    };
    let ambiguity = if matched == 0 {
        None
    } else {
        Some(match_total as f64 / matched as f64)
    };
    DetectionScore {
        repeatability,
        ambiguity,
        below_n: test_kps.len() < cfg.n_min_keypoints,
        n_test_kps: test_kps.len(),
        n_ref_kps: ref_kps.len(),
    }
}

/// Count matches whose keypoint pair passes the IoU criterion and report
/// precision (None on zero matches).
pub fn match_correctness(
    matches: &[Match],
    test_kps: &[Keypoint],
    ref_kps: &[Keypoint],
    gt: &GroundTruth2D,
    cfg: &MetricsConfig,
) -> MatchScore {
    let n_correct = matches
        .iter()
        .filter(|m| {
            keypoint_iou(&test_kps[m.test_index], &ref_kps[m.ref_index], gt)
                > cfg.iou_threshold
        })
        .count();
    let precision = if matches.is_empty() {
        None
    } else {
        Some(n_correct as f64 / matches.len() as f64)
    };
    MatchScore {
        n_correct,
        n_matches: matches.len(),
        precision,
    }
}

fn wrap_angle(deg: f64) -> f64 {
    let a = deg.rem_euclid(360.0);
    if a > 180.0 {
        a - 360.0
    } else {
        a
    }
}

/// Pose success: the estimated pose must displace the image center within
/// `pos_threshold` pixels of where the ground truth puts it, with the angle
/// difference (wrapped to +-180 degrees) below `ang_threshold`. An absent
/// pose is a failure.
pub fn pose_success(est: Option<&Pose2D>, gt: &GroundTruth2D, cfg: &MetricsConfig) -> bool {
    let Some(est) = est else {
        return false;
    };
    let center = (gt.cx, gt.cy);
    let (ex, ey) = est.apply(center);
    let (gx, gy) = gt.apply(center);
    let dist = ((ex - gx).powi(2) + (ey - gy).powi(2)).sqrt();
    let dang = wrap_angle(est.angle_deg - gt.angle_deg).abs();
    dist < cfg.pos_threshold && dang < cfg.ang_threshold
}

/// Fraction of successful pose estimates.
pub fn success_rate(flags: &[bool]) -> Result<f64> {
    if flags.is_empty() {
        return Err(Error::InvalidParam("success_rate of empty input".into()));
    }
    Ok(flags.iter().filter(|&&f| f).count() as f64 / flags.len() as f64)
}
