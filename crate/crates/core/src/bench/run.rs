//! Experiment orchestration: expand the configured sweep into image pairs,
//! run the five-stage pipeline, and aggregate scores into reports.

use std::time::Instant;

use rayon::prelude::*;

use crate::bench::config::RunConfig;
use crate::bench::manifest::PairManifest;
use crate::bench::report::{mean_defined, EvalReport, ReportRow};
use crate::describe::{DescriberKind, Descriptor};
use crate::detect::{Detector, Keypoint};
use crate::imgcore::{load_pgm, GrayImage};
use crate::matchpose::{match_ratio_test, ransac_pose, Match};
use crate::metrics::{
    match_correctness, pose_success, repeatability_and_ambiguity, success_rate,
};
use crate::select::SelectorConfig;
use crate::synth::{generate_texture, transform_suite, GroundTruth2D, RegionMask};
use crate::{Error, Result};

/// One fully materialized evaluation pair.
pub struct EvalPair {
    pub ref_img: GrayImage,
    pub test_img: GrayImage,
    pub gt: GroundTruth2D,
    /// Detection mask for the reference image (reference frame).
    pub ref_mask: RegionMask,
    /// Detection mask for the test image (test image coordinates).
    pub test_mask: RegionMask,
    /// Test mask expressed in the reference frame, for the metrics layer.
    pub test_mask_ref: RegionMask,
    /// Added to detected test keypoint coordinates to express them in the
    /// test frame (used by translation cases, where both detections run on
    /// the same global image).
    pub coord_shift: (f64, f64),
    /// Group label: transform kind for synthetic pairs, manifest tag for
    /// real ones.
    pub tag: String,
}

/// Expand the config's textures x sweep into concrete pairs.
pub fn synthetic_pairs(cfg: &RunConfig) -> Result<Vec<EvalPair>> {
    let size = cfg.image_size;
    let cases = transform_suite(&cfg.sweep, size, size)?;
    let mut pairs = Vec::new();
    for &texture in &cfg.textures {
        let ref_img = generate_texture(texture, size, size, cfg.seed);
        for case in &cases {
            let test_img = case.render(&ref_img)?;
            let shift = match case.spec.kind {
                crate::synth::TransformKind::Translation => (case.gt.tx, case.gt.ty),
                _ => (0.0, 0.0),
            };
            pairs.push(EvalPair {
                ref_img: ref_img.clone(),
                test_img,
                gt: case.gt,
                ref_mask: case.ref_mask.clone(),
                test_mask: case.test_mask.clone(),
                test_mask_ref: case.test_mask_in_ref_frame(size, size)?,
                coord_shift: shift,
                tag: case.spec.kind.name().to_string(),
            });
        }
    }
    Ok(pairs)
}

/// Load manifest rows into pairs; every row must carry ground truth.
pub fn manifest_pairs(manifest: &PairManifest) -> Result<Vec<EvalPair>> {
    let mut pairs = Vec::new();
    for row in manifest {
        let gt_row = row.gt.ok_or_else(|| {
            Error::Config(format!(
                "manifest row {} has no ground truth; pose scoring requires it",
                row.ref_path.display()
            ))
        })?;
        let ref_img = load_pgm(&row.ref_path)?;
        let test_img = load_pgm(&row.test_path)?;
        let (w, h) = (ref_img.width(), ref_img.height());
        let mut gt = GroundTruth2D::identity(w, h);
        gt.angle_deg = gt_row.angle_deg;
        gt.tx = gt_row.tx;
        gt.ty = gt_row.ty;
        gt.scale = gt_row.scale;
        let (tw, th) = (test_img.width(), test_img.height());
        pairs.push(EvalPair {
            ref_img,
            test_img,
            gt,
            ref_mask: RegionMask::full(w, h),
            test_mask: RegionMask::full(tw, th),
            test_mask_ref: RegionMask::full(w, h),
            coord_shift: (0.0, 0.0),
            tag: row.tag.name().to_string(),
        });
    }
    Ok(pairs)
}

fn budgeted(selector: &SelectorConfig, budget: usize) -> SelectorConfig {
    SelectorConfig {
        n_target: budget,
        ..selector.clone()
    }
}

/// Detect and select on one image; returns the kept keypoints and the
/// wall-clock seconds spent inside the detector call.
pub fn detect_select(
    img: &GrayImage,
    mask: Option<&RegionMask>,
    detector: &Detector,
    selector: &SelectorConfig,
) -> Result<(Vec<Keypoint>, f64)> {
    let start = Instant::now();
    let kps = detector.detect(img, mask)?;
    let secs = start.elapsed().as_secs_f64();
    Ok((selector.select(&kps, img.width(), img.height()), secs))
}

fn shift_kps(kps: &mut [Keypoint], shift: (f64, f64)) {
    if shift == (0.0, 0.0) {
        return;
    }
    for kp in kps {
        kp.x += shift.0;
        kp.y += shift.1;
    }
}

fn shift_features(feats: &mut [(Keypoint, Descriptor)], shift: (f64, f64)) {
    if shift == (0.0, 0.0) {
        return;
    }
    for (kp, _) in feats {
        kp.x += shift.0;
        kp.y += shift.1;
    }
}

/// Ordered list of distinct tags, preserving first appearance.
fn tag_order(pairs: &[EvalPair]) -> Vec<String> {
    let mut tags = Vec::new();
    for p in pairs {
        if !tags.contains(&p.tag) {
            tags.push(p.tag.clone());
        }
    }
    tags
}

struct DetectOutcome {
    tag: String,
    repeatability: Option<f64>,
    ambiguity: Option<f64>,
    below_n: bool,
    time_s: f64,
}

/// Detector evaluation over the synthetic sweep: repeatability, ambiguity,
/// and the below-N flag per transform kind, plus an "overall" row that
/// averages the per-kind means with equal weight.
pub fn run_detector_eval(cfg: &RunConfig) -> Result<EvalReport> {
    cfg.validate()?;
    let pairs = synthetic_pairs(cfg)?;
    let tags = tag_order(&pairs);
    let mut rows = Vec::new();
    for det_name in &cfg.detectors {
        let detector = Detector::by_name(det_name)?;
        let selector = budgeted(&cfg.selector, cfg.budget);
        let outcomes: Result<Vec<DetectOutcome>> = pairs
            .par_iter()
            .map(|pair| {
                let (ref_kps, t0) =
                    detect_select(&pair.ref_img, Some(&pair.ref_mask), &detector, &selector)?;
                let (mut test_kps, t1) =
                    detect_select(&pair.test_img, Some(&pair.test_mask), &detector, &selector)?;
                shift_kps(&mut test_kps, pair.coord_shift);
                let score = repeatability_and_ambiguity(
                    &ref_kps,
                    &test_kps,
                    &pair.gt,
                    &pair.ref_mask,
                    &pair.test_mask_ref,
                    &cfg.metrics,
                );
                Ok(DetectOutcome {
                    tag: pair.tag.clone(),
                    repeatability: score.repeatability,
                    ambiguity: score.ambiguity,
                    below_n: score.below_n,
                    time_s: t0 + t1,
                })
            })
            .collect();
        let outcomes = outcomes?;
        let mut kind_rows = Vec::new();
        for tag in &tags {
            let of_tag: Vec<&DetectOutcome> =
                outcomes.iter().filter(|o| &o.tag == tag).collect();
            let rep = mean_defined(
                &of_tag.iter().map(|o| o.repeatability).collect::<Vec<_>>(),
            );
            let amb = mean_defined(&of_tag.iter().map(|o| o.ambiguity).collect::<Vec<_>>());
            let below = of_tag.iter().filter(|o| o.below_n).count() as f64
                / of_tag.len().max(1) as f64;
            let time = if cfg.measure_time {
                Some(of_tag.iter().map(|o| o.time_s).sum::<f64>() / of_tag.len().max(1) as f64)
            } else {
                None
            };
            kind_rows.push(ReportRow {
                detector: det_name.clone(),
                selector: cfg.selector.name().to_string(),
                descriptor: "-".to_string(),
                tag: tag.clone(),
                values: vec![rep, amb, Some(below), time],
            });
        }
        let overall = overall_row(&kind_rows, det_name, cfg, "-", None);
        rows.extend(kind_rows);
        rows.push(overall);
    }
    Ok(EvalReport {
        columns: ["repeatability", "ambiguity", "below_n", "time_s"]
            .map(String::from)
            .to_vec(),
        rows,
    })
}

/// Average the per-kind rows into one "overall" row (equal kind weight).
fn overall_row(
    kind_rows: &[ReportRow],
    detector: &str,
    cfg: &RunConfig,
    descriptor: &str,
    budget: Option<f64>,
) -> ReportRow {
    let n_cols = kind_rows.first().map_or(0, |r| r.values.len());
    let start = usize::from(budget.is_some());
    let mut values: Vec<Option<f64>> = Vec::with_capacity(n_cols);
    if let Some(b) = budget {
        values.push(Some(b));
    }
    for c in start..n_cols {
        values.push(mean_defined(
            &kind_rows.iter().map(|r| r.values[c]).collect::<Vec<_>>(),
        ));
    }
    ReportRow {
        detector: detector.to_string(),
        selector: cfg.selector.name().to_string(),
        descriptor: descriptor.to_string(),
        tag: "overall".to_string(),
        values,
    }
}

/// Full pipeline on one image: detect, select to budget, describe.
pub fn extract_features(
    img: &GrayImage,
    mask: Option<&RegionMask>,
    detector: &Detector,
    selector: &SelectorConfig,
    describer: DescriberKind,
    pattern_seed: u64,
) -> Result<Vec<(Keypoint, Descriptor)>> {
    let (kps, _) = detect_select(img, mask, detector, selector)?;
    describer.describe(img, &kps, pattern_seed)
}

/// Matching evaluation: correct-match counts and precision per transform
/// kind for every detector x descriptor combination.
pub fn run_matching_eval(cfg: &RunConfig) -> Result<EvalReport> {
    cfg.validate()?;
    let pairs = synthetic_pairs(cfg)?;
    let tags = tag_order(&pairs);
    let mut rows = Vec::new();
    for det_name in &cfg.detectors {
        let detector = Detector::by_name(det_name)?;
        let selector = budgeted(&cfg.selector, cfg.budget);
        for desc_name in &cfg.descriptors {
            let describer = DescriberKind::by_name(desc_name)?;
            let outcomes: Result<Vec<(String, usize, Option<f64>, usize)>> = pairs
                .par_iter()
                .map(|pair| {
                    let refs = extract_features(
                        &pair.ref_img,
                        Some(&pair.ref_mask),
                        &detector,
                        &selector,
                        describer,
                        cfg.pattern_seed,
                    )?;
                    let mut tests = extract_features(
                        &pair.test_img,
                        Some(&pair.test_mask),
                        &detector,
                        &selector,
                        describer,
                        cfg.pattern_seed,
                    )?;
                    shift_features(&mut tests, pair.coord_shift);
                    let (test_kps, test_descs): (Vec<_>, Vec<_>) =
                        tests.into_iter().unzip();
                    let (ref_kps, ref_descs): (Vec<_>, Vec<_>) = refs.into_iter().unzip();
                    let matches = match_ratio_test(&test_descs, &ref_descs, cfg.ratio)?;
                    let score = match_correctness(
                        &matches,
                        &test_kps,
                        &ref_kps,
                        &pair.gt,
                        &cfg.metrics,
                    );
                    Ok((pair.tag.clone(), score.n_correct, score.precision, matches.len()))
                })
                .collect();
            let outcomes = outcomes?;
            let mut kind_rows = Vec::new();
            for tag in &tags {
                let of_tag: Vec<_> = outcomes.iter().filter(|o| &o.0 == tag).collect();
                let n_correct = of_tag.iter().map(|o| o.1 as f64).sum::<f64>()
                    / of_tag.len().max(1) as f64;
                let precision =
                    mean_defined(&of_tag.iter().map(|o| o.2).collect::<Vec<_>>());
                let n_matches = of_tag.iter().map(|o| o.3 as f64).sum::<f64>()
                    / of_tag.len().max(1) as f64;
                kind_rows.push(ReportRow {
                    detector: det_name.clone(),
                    selector: cfg.selector.name().to_string(),
                    descriptor: desc_name.clone(),
                    tag: tag.clone(),
                    values: vec![Some(n_correct), precision, Some(n_matches)],
                });
            }
            let overall = overall_row(&kind_rows, det_name, cfg, desc_name, None);
            rows.extend(kind_rows);
            rows.push(overall);
        }
    }
    Ok(EvalReport {
        columns: ["n_correct", "precision", "n_matches"].map(String::from).to_vec(),
        rows,
    })
}

/// Pose evaluation: success rate per (detector, descriptor, tag) and per
/// reference-feature budget. Synthetic pairs come from the sweep unless a
/// manifest is supplied.
pub fn run_pose_eval(cfg: &RunConfig, manifest: Option<&PairManifest>) -> Result<EvalReport> {
    cfg.validate()?;
    let pairs = match manifest {
        Some(m) => manifest_pairs(m)?,
        None => synthetic_pairs(cfg)?,
    };
    let tags = tag_order(&pairs);
    let mut rows = Vec::new();
    for det_name in &cfg.detectors {
        let detector = Detector::by_name(det_name)?;
        for desc_name in &cfg.descriptors {
            let describer = DescriberKind::by_name(desc_name)?;
            for &budget in &cfg.budgets {
                // The budget sweep limits reference features; the test side
                // keeps the configured budget.
                let ref_selector = budgeted(&cfg.selector, budget);
                let test_selector = budgeted(&cfg.selector, cfg.budget);
                let outcomes: Result<Vec<(String, bool)>> = pairs
                    .par_iter()
                    .map(|pair| {
                        let refs = extract_features(
                            &pair.ref_img,
                            Some(&pair.ref_mask),
                            &detector,
                            &ref_selector,
                            describer,
                            cfg.pattern_seed,
                        )?;
                        let mut tests = extract_features(
                            &pair.test_img,
                            Some(&pair.test_mask),
                            &detector,
                            &test_selector,
                            describer,
                            cfg.pattern_seed,
                        )?;
                        shift_features(&mut tests, pair.coord_shift);
                        let (test_kps, test_descs): (Vec<_>, Vec<_>) =
                            tests.into_iter().unzip();
                        let (ref_kps, ref_descs): (Vec<_>, Vec<_>) =
                            refs.into_iter().unzip();
                        let matches: Vec<Match> =
                            match_ratio_test(&test_descs, &ref_descs, cfg.ratio)?;
                        let mut ransac = cfg.ransac.clone();
                        ransac.seed = cfg.seed;
                        let est = ransac_pose(&matches, &test_kps, &ref_kps, &ransac)?;
                        let ok = pose_success(
                            est.as_ref().map(|e| &e.pose),
                            &pair.gt,
                            &cfg.metrics,
                        );
                        Ok((pair.tag.clone(), ok))
                    })
                    .collect();
                let outcomes = outcomes?;
                let mut kind_rows = Vec::new();
                for tag in &tags {
                    let flags: Vec<bool> = outcomes
                        .iter()
                        .filter(|o| &o.0 == tag)
                        .map(|o| o.1)
                        .collect();
                    let rate = if flags.is_empty() {
                        None
                    } else {
                        Some(success_rate(&flags)?)
                    };
                    kind_rows.push(ReportRow {
                        detector: det_name.clone(),
                        selector: cfg.selector.name().to_string(),
                        descriptor: desc_name.clone(),
                        tag: tag.clone(),
                        values: vec![
                            Some(budget as f64),
                            rate,
                            Some(flags.len() as f64),
                        ],
                    });
                }
                let overall =
                    overall_row(&kind_rows, det_name, cfg, desc_name, Some(budget as f64));
                rows.extend(kind_rows);
                rows.push(overall);
            }
        }
    }
    Ok(EvalReport {
        columns: ["budget", "success_rate", "n_pairs"].map(String::from).to_vec(),
        rows,
    })
}
