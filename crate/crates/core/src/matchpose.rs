//! Ratio-test nearest-neighbor matching and RANSAC estimation of the planar
//! Euclidean (optionally similarity) transform between two keypoint sets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::describe::Descriptor;
use crate::detect::Keypoint;
use crate::imgcore::rot_matrix;
use crate::{Error, Result};

/// A ratio-test-accepted correspondence between a test and a reference
/// keypoint (both stored as indices into their respective arrays).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Match {
    pub test_index: usize,
    pub ref_index: usize,
    pub distance: f64,
    pub ratio: f64,
}

/// Planar similarity pose: p' = scale * R(angle) * p + (tx, ty), rotation
/// counter-clockwise in the y-down raster frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose2D {
    pub angle_deg: f64,
    pub tx: f64,
    pub ty: f64,
    pub scale: f64,
}

impl Pose2D {
    pub fn identity() -> Self {
        Self {
            angle_deg: 0.0,
            tx: 0.0,
            ty: 0.0,
            scale: 1.0,
        }
    }

    pub fn apply(&self, p: (f64, f64)) -> (f64, f64) {
        let [c, ms, s, c2] = rot_matrix(self.angle_deg);
        (
            self.scale * (c * p.0 + ms * p.1) + self.tx,
            self.scale * (s * p.0 + c2 * p.1) + self.ty,
        )
    }

    pub fn inverse(&self) -> Self {
        let [c, ms, s, c2] = rot_matrix(-self.angle_deg);
        let inv_s = 1.0 / self.scale;
        Self {
            angle_deg: -self.angle_deg,
            tx: -inv_s * (c * self.tx + ms * self.ty),
            ty: -inv_s * (s * self.tx + c2 * self.ty),
            scale: inv_s,
        }
    }
}

/// RANSAC parameters; defaults follow the benchmark configuration.
#[derive(Debug, Clone)]
pub struct RansacConfig {
    pub iterations: usize,
    pub inlier_threshold: f64,
    pub with_scale: bool,
    pub seed: u64,
    pub min_inliers: usize,
    pub scale_bounds: (f64, f64),
}

impl Default for RansacConfig {
    fn default() -> Self {
        Self {
            iterations: 2000,
            inlier_threshold: 3.0,
            with_scale: true,
            seed: 0,
            min_inliers: 5,
            scale_bounds: (0.9, 1.1),
        }
    }
}

impl RansacConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations < 1 {
            return Err(Error::InvalidParam("iterations must be >= 1".into()));
        }
        if self.inlier_threshold <= 0.0 {
            return Err(Error::InvalidParam("inlier threshold must be > 0".into()));
        }
        if !(self.scale_bounds.0 <= 1.0 && 1.0 <= self.scale_bounds.1) {
            return Err(Error::InvalidParam("scale bounds must contain 1".into()));
        }
        Ok(())
    }
}

/// Pose and the consensus set that produced it.
#[derive(Debug, Clone)]
pub struct PoseEstimate {
    pub pose: Pose2D,
    pub inliers: Vec<Match>,
}

/// Hamming popcount for binary descriptors, L2 for real-valued ones.
pub fn descriptor_distance(a: &Descriptor, b: &Descriptor) -> Result<f64> {
    match (a, b) {
        (Descriptor::Binary(x), Descriptor::Binary(y)) => Ok(x
            .iter()
            .zip(y)
            .map(|(p, q)| (p ^ q).count_ones() as f64)
            .sum()),
        (Descriptor::Real(x), Descriptor::Real(y)) => {
            if x.len() != y.len() {
                return Err(Error::KindMismatch(format!(
                    "real descriptor lengths differ: {} vs {}",
                    x.len(),
                    y.len()
                )));
            }
            Ok(x.iter()
                .zip(y)
                .map(|(p, q)| ((p - q) as f64).powi(2))
                .sum::<f64>()
                .sqrt())
        }
        _ => Err(Error::KindMismatch(
            "cannot compare binary with real descriptors".into(),
        )),
    }
}

/// Lowe's ratio test by linear scan: for each test descriptor find the two
/// closest reference descriptors (distance ties broken by lowest reference
/// index) and emit a match iff d1/d2 < ratio_threshold. A zero second-best
/// distance or fewer than two reference descriptors yields no match.
pub fn match_ratio_test(
    test: &[Descriptor],
    reference: &[Descriptor],
    ratio_threshold: f64,
) -> Result<Vec<Match>> {
    let mut out = Vec::new();
    if reference.len() < 2 {
        return Ok(out);
    }
    for (ti, td) in test.iter().enumerate() {
        let mut best: Option<(f64, usize)> = None;
        let mut second: Option<f64> = None;
        for (ri, rd) in reference.iter().enumerate() {
            let d = descriptor_distance(td, rd)?;
            match best {
                // Strict '<' keeps the lowest reference index on ties.
                Some((b, _)) if d < b => {
                    second = Some(b);
                    best = Some((d, ri));
                }
                None => best = Some((d, ri)),
                Some(_) => {
                    if second.map_or(true, |s| d < s) {
                        second = Some(d);
                    }
                }
            }
        }
        let (d1, ri) = best.unwrap();
        let d2 = second.unwrap();
        if d2 > 0.0 {
            let ratio = d1 / d2;
            if ratio < ratio_threshold {
                out.push(Match {
                    test_index: ti,
                    ref_index: ri,
                    distance: d1,
                    ratio,
                });
            }
        }
    }
    Ok(out)
}

/// Closed-form least-squares similarity (or rigid, when `with_scale` is off)
/// fit minimizing sum ||q_i - (s R p_i + t)||^2 over pairs (p_i, q_i).
pub fn estimate_euclidean_lsq(
    pairs: &[((f64, f64), (f64, f64))],
    with_scale: bool,
) -> Result<Pose2D> {
    if pairs.len() < 2 {
        return Err(Error::Degenerate(format!(
            "need >= 2 pairs, got {}",
            pairs.len()
        )));
    }
    let n = pairs.len() as f64;
    let (mut px, mut py, mut qx, mut qy) = (0.0, 0.0, 0.0, 0.0);
    for &((ax, ay), (bx, by)) in pairs {
        px += ax;
        py += ay;
        qx += bx;
        qy += by;
    }
    let (px, py, qx, qy) = (px / n, py / n, qx / n, qy / n);
    // Cross-covariance terms of the centered point sets.
    let (mut a, mut b, mut var_p) = (0.0, 0.0, 0.0);
    for &((ax, ay), (bx, by)) in pairs {
        let (sx, sy) = (ax - px, ay - py);
        let (dx, dy) = (bx - qx, by - qy);
        a += sx * dx + sy * dy;
        b += sx * dy - sy * dx;
        var_p += sx * sx + sy * sy;
    }
    if var_p <= 1e-12 {
        return Err(Error::Degenerate(
            "all source points coincident".into(),
        ));
    }
    let angle = b.atan2(a);
    let scale = if with_scale {
        (a * a + b * b).sqrt() / var_p
    } else {
        1.0
    };
    if scale <= 0.0 {
        return Err(Error::Degenerate("non-positive fitted scale".into()));
    }
    let (c, s) = (angle.cos(), angle.sin());
    Ok(Pose2D {
        angle_deg: angle.to_degrees(),
        tx: qx - scale * (c * px - s * py),
        ty: qy - scale * (s * px + c * py),
        scale,
    })
}

fn match_error(m: &Match, test_kps: &[Keypoint], ref_kps: &[Keypoint], pose: &Pose2D) -> f64 {
    let r = &ref_kps[m.ref_index];
    let t = &test_kps[m.test_index];
    let (x, y) = pose.apply((r.x, r.y));
    ((x - t.x).powi(2) + (y - t.y).powi(2)).sqrt()
}

fn count_inliers(
    matches: &[Match],
    test_kps: &[Keypoint],
    ref_kps: &[Keypoint],
    pose: &Pose2D,
    threshold: f64,
) -> (Vec<Match>, f64) {
    let mut inliers = Vec::new();
    let mut err_sum = 0.0;
    for m in matches {
        let e = match_error(m, test_kps, ref_kps, pose);
        if e < threshold {
            inliers.push(*m);
            err_sum += e;
        }
    }
    let mean = if inliers.is_empty() {
        f64::INFINITY
    } else {
        err_sum / inliers.len() as f64
    };
    (inliers, mean)
}

/// RANSAC over 2-match minimal samples. The fitted pose maps reference
/// keypoint coordinates onto test keypoint coordinates; inlier error is the
/// one-way reprojection distance ||pose(ref) - test|| in pixels. Returns
/// None (no pose) when fewer than `min_inliers` matches agree or the final
/// scale leaves `scale_bounds`. Deterministic under the config seed.
pub fn ransac_pose(
    matches: &[Match],
    test_kps: &[Keypoint],
    ref_kps: &[Keypoint],
    cfg: &RansacConfig,
) -> Result<Option<PoseEstimate>> {
    cfg.validate()?;
    if matches.len() < 2 {
        return Ok(None);
    }
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    let mut best: Option<(Vec<Match>, f64, Pose2D)> = None;
    for _ in 0..cfg.iterations {
        let i = rng.gen_range(0..matches.len());
        let mut j = rng.gen_range(0..matches.len() - 1);
        if j >= i {
            j += 1;
        }
        let sample: Vec<((f64, f64), (f64, f64))> = [matches[i], matches[j]]
            .iter()
            .map(|m| {
                let r = &ref_kps[m.ref_index];
                let t = &test_kps[m.test_index];
                ((r.x, r.y), (t.x, t.y))
            })
            .collect();
        let Ok(pose) = estimate_euclidean_lsq(&sample, cfg.with_scale) else {
            continue;
        };
        if pose.scale < cfg.scale_bounds.0 || pose.scale > cfg.scale_bounds.1 {
            continue;
        }
        let (inliers, mean_err) =
            count_inliers(matches, test_kps, ref_kps, &pose, cfg.inlier_threshold);
        let better = match &best {
            None => true,
            Some((bi, be, _)) => {
                inliers.len() > bi.len() || (inliers.len() == bi.len() && mean_err < *be)
            }
        };
        if better {
            best = Some((inliers, mean_err, pose));
        }
    }
    let Some((inliers, _, pose)) = best else {
        return Ok(None);
    };
    if inliers.len() < cfg.min_inliers {
        return Ok(None);
    }
    // Refit on the full consensus set and recount once.
    let pairs: Vec<((f64, f64), (f64, f64))> = inliers
        .iter()
        .map(|m| {
            let r = &ref_kps[m.ref_index];
            let t = &test_kps[m.test_index];
            ((r.x, r.y), (t.x, t.y))
        })
        .collect();
    let refit = estimate_euclidean_lsq(&pairs, cfg.with_scale).unwrap_or(pose);
    let (final_pose, final_inliers) =
        if refit.scale >= cfg.scale_bounds.0 && refit.scale <= cfg.scale_bounds.1 {
            let (set, _) =
                count_inliers(matches, test_kps, ref_kps, &refit, cfg.inlier_threshold);
            (refit, set)
        } else {
            (pose, inliers)
        };
    if final_inliers.len() < cfg.min_inliers {
        return Ok(None);
    }
    Ok(Some(PoseEstimate {
        pose: final_pose,
        inliers: final_inliers,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kp(x: f64, y: f64) -> Keypoint {
        Keypoint {
            x,
            y,
            size: 7.0,
            angle: None,
            response: 1.0,
            octave: 0,
        }
    }

    fn rand_binary(rng: &mut ChaCha12Rng) -> Descriptor {
        Descriptor::Binary([rng.gen(), rng.gen(), rng.gen(), rng.gen()])
    }

    #[test]
    fn distance_of_identical_descriptors_is_zero() {
        let b = Descriptor::Binary([u64::MAX, 0, 5, 9]);
        assert_eq!(descriptor_distance(&b, &b).unwrap(), 0.0);
        let r = Descriptor::Real(vec![0.5; 128]);
        assert_eq!(descriptor_distance(&r, &r).unwrap(), 0.0);
    }

    #[test]
    fn distance_all_zeros_vs_all_ones_is_256() {
        let z = Descriptor::Binary([0; 4]);
        let o = Descriptor::Binary([u64::MAX; 4]);
        assert_eq!(descriptor_distance(&z, &o).unwrap(), 256.0);
    }

    #[test]
    fn hamming_matches_bit_loop_oracle() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        for _ in 0..100 {
            let a = rand_binary(&mut rng);
            let b = rand_binary(&mut rng);
            let (Descriptor::Binary(x), Descriptor::Binary(y)) = (&a, &b) else {
                unreachable!()
            };
            let mut naive = 0u32;
            for w in 0..4 {
                for bit in 0..64 {
                    if (x[w] >> bit) & 1 != (y[w] >> bit) & 1 {
                        naive += 1;
                    }
                }
            }
            assert_eq!(descriptor_distance(&a, &b).unwrap(), naive as f64);
        }
    }

    #[test]
    fn kind_mismatch_is_an_error() {
        let b = Descriptor::Binary([0; 4]);
        let r = Descriptor::Real(vec![0.0; 128]);
        assert!(descriptor_distance(&b, &r).is_err());
    }

    #[test]
    fn ratio_test_accepts_and_rejects_per_threshold() {
        // Reference descriptors at hamming distances 2 and 4 from the probe:
        // ratio 0.5 < 0.7 accepts.
        let probe = Descriptor::Binary([0; 4]);
        let refs = vec![
            Descriptor::Binary([0b11, 0, 0, 0]),
            Descriptor::Binary([0b1111, 0, 0, 0]),
        ];
        let ms = match_ratio_test(&[probe.clone()], &refs, 0.7).unwrap();
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].ref_index, 0);
        assert_eq!(ms[0].distance, 2.0);
        assert!((ms[0].ratio - 0.5).abs() < 1e-12);

        // d1 = d2: ratio 1, rejected.
        let refs_tied = vec![
            Descriptor::Binary([0b11, 0, 0, 0]),
            Descriptor::Binary([0, 0b11, 0, 0]),
        ];
        assert!(match_ratio_test(&[probe], &refs_tied, 0.7).unwrap().is_empty());
    }

    #[test]
    fn ratio_test_zero_second_distance_yields_no_match() {
        let probe = Descriptor::Binary([0; 4]);
        let refs = vec![Descriptor::Binary([0; 4]), Descriptor::Binary([0; 4])];
        assert!(match_ratio_test(&[probe], &refs, 0.7).unwrap().is_empty());
    }

    #[test]
    fn ratio_test_needs_two_references() {
        let probe = Descriptor::Binary([0; 4]);
        let refs = vec![Descriptor::Binary([1, 0, 0, 0])];
        assert!(match_ratio_test(&[probe], &refs, 0.99).unwrap().is_empty());
    }

    #[test]
    fn ratio_test_matches_exhaustive_oracle() {
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        for _ in 0..200 {
            let test: Vec<Descriptor> = (0..8).map(|_| rand_binary(&mut rng)).collect();
            let refs: Vec<Descriptor> = (0..12).map(|_| rand_binary(&mut rng)).collect();
            let got = match_ratio_test(&test, &refs, 0.8).unwrap();
            // Oracle: full distance table, stable sort, two smallest.
            let mut expect = Vec::new();
            for (ti, td) in test.iter().enumerate() {
                let mut ds: Vec<(f64, usize)> = refs
                    .iter()
                    .enumerate()
                    .map(|(ri, rd)| (descriptor_distance(td, rd).unwrap(), ri))
                    .collect();
                ds.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
                let (d1, ri) = ds[0];
                let d2 = ds[1].0;
                if d2 > 0.0 && d1 / d2 < 0.8 {
                    expect.push(Match {
                        test_index: ti,
                        ref_index: ri,
                        distance: d1,
                        ratio: d1 / d2,
                    });
                }
            }
            assert_eq!(got, expect);
        }
    }

    #[test]
    fn apply_pose_rotation_convention() {
        let pose = Pose2D {
            angle_deg: 90.0,
            tx: 0.0,
            ty: 0.0,
            scale: 1.0,
        };
        let (x, y) = pose.apply((1.0, 0.0));
        assert!(x.abs() < 1e-12 && (y - 1.0).abs() < 1e-12, "({x}, {y})");
        let p = Pose2D::identity().apply((3.5, -2.0));
        assert_eq!(p, (3.5, -2.0));
    }

    #[test]
    fn pose_inverse_composition_is_identity() {
        let pose = Pose2D {
            angle_deg: 37.0,
            tx: 12.5,
            ty: -4.25,
            scale: 1.04,
        };
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for _ in 0..100 {
            let p = (rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0));
            let q = pose.apply(pose.inverse().apply(p));
            assert!((q.0 - p.0).abs() < 1e-12 && (q.1 - p.1).abs() < 1e-12);
        }
    }

    fn planted_pairs(
        pose: &Pose2D,
        n: usize,
        seed: u64,
    ) -> Vec<((f64, f64), (f64, f64))> {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let p = (rng.gen_range(-100.0..100.0), rng.gen_range(-100.0..100.0));
                (p, pose.apply(p))
            })
            .collect()
    }

    #[test]
    fn lsq_recovers_exact_rigid_pose() {
        let pose = Pose2D {
            angle_deg: 30.0,
            tx: 5.0,
            ty: -7.0,
            scale: 1.0,
        };
        let pairs = planted_pairs(&pose, 20, 4);
        let est = estimate_euclidean_lsq(&pairs, false).unwrap();
        assert!((est.angle_deg - 30.0).abs() < 1e-9);
        assert!((est.tx - 5.0).abs() < 1e-9 && (est.ty + 7.0).abs() < 1e-9);
        assert_eq!(est.scale, 1.0);
    }

    #[test]
    fn lsq_identity_on_identical_sets() {
        let pairs: Vec<_> = [(1.0, 2.0), (3.0, -4.0), (0.0, 9.0)]
            .iter()
            .map(|&p| (p, p))
            .collect();
        let est = estimate_euclidean_lsq(&pairs, true).unwrap();
        assert!(est.angle_deg.abs() < 1e-12);
        assert!(est.tx.abs() < 1e-12 && est.ty.abs() < 1e-12);
        assert!((est.scale - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lsq_recovers_planted_similarity_poses() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for i in 0..100 {
            let pose = Pose2D {
                angle_deg: rng.gen_range(-180.0..180.0),
                tx: rng.gen_range(-50.0..50.0),
                ty: rng.gen_range(-50.0..50.0),
                scale: 1.05,
            };
            let pairs = planted_pairs(&pose, 20, 100 + i);
            let est = estimate_euclidean_lsq(&pairs, true).unwrap();
            let da = (est.angle_deg - pose.angle_deg).rem_euclid(360.0);
            let da = da.min(360.0 - da);
            assert!(da < 1e-7, "angle error {da}");
            assert!((est.tx - pose.tx).abs() < 1e-7 && (est.ty - pose.ty).abs() < 1e-7);
            assert!((est.scale - 1.05).abs() < 1e-7);
            let residual: f64 = pairs
                .iter()
                .map(|&(p, q)| {
                    let r = est.apply(p);
                    (r.0 - q.0).powi(2) + (r.1 - q.1).powi(2)
                })
                .sum();
            assert!(residual < 1e-12, "residual {residual}");
        }
    }

    #[test]
    fn lsq_residual_beats_dense_grid_search() {
        // Noisy pairs: the closed form must be at least as good as any pose
        // on a coarse (angle, tx, ty) grid.
        let pose = Pose2D {
            angle_deg: 12.0,
            tx: 3.0,
            ty: -2.0,
            scale: 1.0,
        };
        let mut rng = ChaCha12Rng::seed_from_u64(6);
        let pairs: Vec<_> = planted_pairs(&pose, 10, 7)
            .into_iter()
            .map(|(p, q)| {
                (
                    p,
                    (q.0 + rng.gen_range(-1.0..1.0), q.1 + rng.gen_range(-1.0..1.0)),
                )
            })
            .collect();
        let est = estimate_euclidean_lsq(&pairs, false).unwrap();
        let residual = |pose: &Pose2D| -> f64 {
            pairs
                .iter()
                .map(|&(p, q)| {
                    let r = pose.apply(p);
                    (r.0 - q.0).powi(2) + (r.1 - q.1).powi(2)
                })
                .sum()
        };
        let best = residual(&est);
        for ai in 0..72 {
            for txi in -8..=8 {
                for tyi in -8..=8 {
                    let cand = Pose2D {
                        angle_deg: ai as f64 * 5.0,
                        tx: txi as f64,
                        ty: tyi as f64,
                        scale: 1.0,
                    };
                    assert!(best <= residual(&cand) + 1e-9);
                }
            }
        }
    }

    #[test]
    fn lsq_rejects_degenerate_input() {
        assert!(estimate_euclidean_lsq(&[((0.0, 0.0), (1.0, 1.0))], true).is_err());
        let coincident = vec![((2.0, 2.0), (0.0, 0.0)), ((2.0, 2.0), (5.0, 5.0))];
        assert!(estimate_euclidean_lsq(&coincident, true).is_err());
    }

    fn planted_scene(
        pose: &Pose2D,
        n_in: usize,
        n_out: usize,
        seed: u64,
    ) -> (Vec<Match>, Vec<Keypoint>, Vec<Keypoint>) {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut ref_kps = Vec::new();
        let mut test_kps = Vec::new();
        let mut matches = Vec::new();
        for i in 0..n_in + n_out {
            let p = (rng.gen_range(0.0..640.0), rng.gen_range(0.0..480.0));
            ref_kps.push(kp(p.0, p.1));
            let q = if i < n_in {
                pose.apply(p)
            } else {
                (rng.gen_range(0.0..640.0), rng.gen_range(0.0..480.0))
            };
            test_kps.push(kp(q.0, q.1));
            matches.push(Match {
                test_index: i,
                ref_index: i,
                distance: 10.0,
                ratio: 0.5,
            });
        }
        (matches, test_kps, ref_kps)
    }

    #[test]
    fn ransac_outlier_free_recovery() {
        let pose = Pose2D {
            angle_deg: 10.0,
            tx: 3.0,
            ty: 4.0,
            scale: 1.0,
        };
        let (matches, test_kps, ref_kps) = planted_scene(&pose, 100, 0, 8);
        let est = ransac_pose(&matches, &test_kps, &ref_kps, &RansacConfig::default())
            .unwrap()
            .expect("pose found");
        assert_eq!(est.inliers.len(), 100);
        assert!((est.pose.angle_deg - 10.0).abs() < 1e-6);
        assert!((est.pose.tx - 3.0).abs() < 1e-6 && (est.pose.ty - 4.0).abs() < 1e-6);
        assert!((est.pose.scale - 1.0).abs() < 1e-6);
    }

    #[test]
    fn ransac_tolerates_thirty_percent_outliers() {
        let pose = Pose2D {
            angle_deg: -25.0,
            tx: 14.0,
            ty: -9.0,
            scale: 1.0,
        };
        let mut successes = 0;
        for seed in 0..50u64 {
            let (matches, test_kps, ref_kps) = planted_scene(&pose, 70, 30, 1000 + seed);
            let cfg = RansacConfig {
                seed,
                ..RansacConfig::default()
            };
            if let Some(est) = ransac_pose(&matches, &test_kps, &ref_kps, &cfg).unwrap() {
                let da = (est.pose.angle_deg - pose.angle_deg).abs();
                let dt = ((est.pose.tx - pose.tx).powi(2)
                    + (est.pose.ty - pose.ty).powi(2))
                .sqrt();
                if da < 0.05 && dt < 0.2 && est.inliers.len() >= 68 {
                    successes += 1;
                }
            }
        }
        assert!(successes >= 49, "only {successes}/50 succeeded");
    }

    #[test]
    fn ransac_inconsistent_matches_give_no_pose() {
        // 4 mutually inconsistent correspondences: min_inliers unreachable.
        let ref_kps = vec![kp(0.0, 0.0), kp(100.0, 0.0), kp(0.0, 100.0), kp(100.0, 100.0)];
        let test_kps = vec![kp(50.0, 50.0), kp(300.0, 10.0), kp(9.0, 250.0), kp(400.0, 400.0)];
        let matches: Vec<Match> = (0..4)
            .map(|i| Match {
                test_index: i,
                ref_index: i,
                distance: 1.0,
                ratio: 0.5,
            })
            .collect();
        assert!(ransac_pose(&matches, &test_kps, &ref_kps, &RansacConfig::default())
            .unwrap()
            .is_none());
    }

    #[test]
    fn ransac_is_seed_deterministic() {
        let pose = Pose2D {
            angle_deg: 5.0,
            tx: 1.0,
            ty: 2.0,
            scale: 1.02,
        };
        let (matches, test_kps, ref_kps) = planted_scene(&pose, 40, 20, 9);
        let cfg = RansacConfig {
            seed: 7,
            ..RansacConfig::default()
        };
        let a = ransac_pose(&matches, &test_kps, &ref_kps, &cfg).unwrap().unwrap();
        let b = ransac_pose(&matches, &test_kps, &ref_kps, &cfg).unwrap().unwrap();
        assert_eq!(a.pose, b.pose);
        assert_eq!(a.inliers, b.inliers);
    }

    #[test]
    fn ransac_inliers_exactly_satisfy_threshold() {
        let pose = Pose2D {
            angle_deg: 8.0,
            tx: -2.0,
            ty: 6.0,
            scale: 1.0,
        };
        let (matches, test_kps, ref_kps) = planted_scene(&pose, 30, 30, 10);
        let cfg = RansacConfig::default();
        let est = ransac_pose(&matches, &test_kps, &ref_kps, &cfg).unwrap().unwrap();
        for m in &matches {
            let e = match_error(m, &test_kps, &ref_kps, &est.pose);
            let in_set = est.inliers.iter().any(|i| i == m);
            assert_eq!(in_set, e < cfg.inlier_threshold);
        }
    }

    #[test]
    fn ransac_rejects_fewer_than_two_matches() {
        let cfg = RansacConfig::default();
        assert!(ransac_pose(&[], &[], &[], &cfg).unwrap().is_none());
    }
}
