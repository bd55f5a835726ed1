//! Keypoint budget selection: top-N non-max suppression, adaptive NMS via
//! square covering (SSC), and per-grid-cell bucketing.

use crate::detect::Keypoint;
use crate::{Error, Result};

/// Selection strategy plus its parameters, addressed by name from the
/// bench config.
#[derive(Debug, Clone)]
pub struct SelectorConfig {
    pub method: SelectorMethod,
    pub n_target: usize,
    pub ssc_tolerance: f64,
    pub grid_rows: usize,
    pub grid_cols: usize,
    pub per_cell: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectorMethod {
    Nms,
    Ssc,
    Bucketing,
}

impl Default for SelectorConfig {
    fn default() -> Self {
        Self {
            method: SelectorMethod::Nms,
            n_target: 1000,
            ssc_tolerance: 0.20,
            grid_rows: 8,
            grid_cols: 6,
            per_cell: 21,
        }
    }
}

impl SelectorConfig {
    pub fn by_name(name: &str) -> Result<Self> {
        let method = match name {
            "nms" => SelectorMethod::Nms,
            "ssc" => SelectorMethod::Ssc,
            "bucketing" => SelectorMethod::Bucketing,
            other => return Err(Error::Config(format!("unknown selector '{other}'"))),
        };
        Ok(Self {
            method,
            ..Self::default()
        })
    }

    pub fn name(&self) -> &'static str {
        match self.method {
            SelectorMethod::Nms => "nms",
            SelectorMethod::Ssc => "ssc",
            SelectorMethod::Bucketing => "bucketing",
        }
    }

    pub fn select(&self, kps: &[Keypoint], width: usize, height: usize) -> Vec<Keypoint> {
        match self.method {
            SelectorMethod::Nms => select_nms(kps, self.n_target),
            SelectorMethod::Ssc => {
                select_ssc(kps, self.n_target, self.ssc_tolerance, width, height).keypoints
            }
            SelectorMethod::Bucketing => select_bucketing(
                kps,
                self.grid_rows,
                self.grid_cols,
                self.per_cell,
                width,
                height,
            ),
        }
    }
}

/// Response-descending order with (y, x) ascending tie-break.
fn response_order(a: &Keypoint, b: &Keypoint) -> std::cmp::Ordering {
    b.response
        .partial_cmp(&a.response)
        .unwrap()
        .then(a.y.partial_cmp(&b.y).unwrap())
        .then(a.x.partial_cmp(&b.x).unwrap())
}

/// Keep the n keypoints of largest response; output sorted by response
/// descending.
pub fn select_nms(kps: &[Keypoint], n: usize) -> Vec<Keypoint> {
    let mut sorted: Vec<Keypoint> = kps.to_vec();
    sorted.sort_by(response_order);
    sorted.truncate(n);
    sorted
}

/// Result of the SSC radius search.
#[derive(Debug, Clone)]
pub struct SscResult {
    pub keypoints: Vec<Keypoint>,
    /// Final suppression half-width (L-inf).
    pub radius: f64,
    /// False when the search exhausted without landing inside
    /// [n, n*(1+tolerance)] and the closest-count result was returned.
    pub hit_tolerance: bool,
}

/// Adaptive NMS via square covering: binary-search the suppression radius
/// until the accepted count lands within [n, n*(1+tolerance)].
pub fn select_ssc(
    kps: &[Keypoint],
    n: usize,
    tolerance: f64,
    width: usize,
    height: usize,
) -> SscResult {
    let mut sorted: Vec<Keypoint> = kps.to_vec();
    sorted.sort_by(response_order);
    if sorted.len() <= n {
        return SscResult {
            keypoints: sorted,
            radius: 0.0,
            hit_tolerance: true,
        };
    }
    let high_bound = ((n as f64) * (1.0 + tolerance)).floor() as usize;

    let mut lo = 1usize;
    let mut hi = width.max(height);
    let mut best: Option<(Vec<Keypoint>, usize, usize)> = None; // (set, radius, |count-n|)
    let mut hit = false;
    let mut result = Vec::new();
    let mut result_radius = 0;
    while lo <= hi {
        let r = (lo + hi) / 2;
        let accepted = cover_greedy(&sorted, r as f64, width, height);
        let count = accepted.len();
        let dist = count.abs_diff(n);
        if best.as_ref().map_or(true, |(_, _, d)| dist < *d) {
            best = Some((accepted.clone(), r, dist));
        }
        if count >= n && count <= high_bound {
            result = accepted;
            result_radius = r;
            hit = true;
            break;
        }
        if count < n {
            // Too much suppression: shrink the radius.
            if r == 0 {
                break;
            }
            hi = r - 1;
        } else {
            lo = r + 1;
        }
    }
    if !hit {
        let (set, r, _) = best.expect("at least one radius probed");
        result = set;
        result_radius = r;
    }
    SscResult {
        keypoints: result,
        radius: result_radius as f64,
        hit_tolerance: hit,
    }
}

/// Greedy acceptance in response order, suppressing candidates within the
/// L-inf square of half-width `r` of an accepted keypoint. A coverage grid
/// of cell size r restricts the candidate comparisons.
fn cover_greedy(sorted: &[Keypoint], r: f64, width: usize, height: usize) -> Vec<Keypoint> {
    let cell = r.max(1.0);
    let cols = (width as f64 / cell).ceil() as usize + 1;
    let rows = (height as f64 / cell).ceil() as usize + 1;
    let mut grid: Vec<Vec<(f64, f64)>> = vec![Vec::new(); rows * cols];
    let mut accepted = Vec::new();
    for kp in sorted {
        let cx = (kp.x / cell) as usize;
        let cy = (kp.y / cell) as usize;
        let mut free = true;
        'scan: for gy in cy.saturating_sub(1)..(cy + 2).min(rows) {
            for gx in cx.saturating_sub(1)..(cx + 2).min(cols) {
                for &(px, py) in &grid[gy * cols + gx] {
                    if (kp.x - px).abs().max((kp.y - py).abs()) < r {
                        free = false;
                        break 'scan;
                    }
                }
            }
        }
        if free {
            grid[cy * cols + cx].push((kp.x, kp.y));
            accepted.push(*kp);
        }
    }
    accepted
}

/// Partition the frame into rows x cols equal cells (last cells absorb
/// remainders) and keep the strongest `per_cell` keypoints of each cell,
/// concatenated row-major.
pub fn select_bucketing(
    kps: &[Keypoint],
    rows: usize,
    cols: usize,
    per_cell: usize,
    width: usize,
    height: usize,
) -> Vec<Keypoint> {
    assert!(rows >= 1 && cols >= 1);
    let cell_w = width / cols;
    let cell_h = height / rows;
    let mut cells: Vec<Vec<Keypoint>> = vec![Vec::new(); rows * cols];
    for kp in kps {
        let cx = if cell_w == 0 {
            0
        } else {
            ((kp.x as usize) / cell_w).min(cols - 1)
        };
        let cy = if cell_h == 0 {
            0
        } else {
            ((kp.y as usize) / cell_h).min(rows - 1)
        };
        cells[cy * cols + cx].push(*kp);
    }
    let mut out = Vec::new();
    for cell in cells {
        out.extend(select_nms(&cell, per_cell));
    }
    out
}
