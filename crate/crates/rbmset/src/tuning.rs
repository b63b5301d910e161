//! Data-driven selection of the sausage radius ε and the hull radius r.
//!
//! Two ε rules: the connectivity infimum (half the largest Euclidean-MST
//! edge, exact for closed balls) and the random-split nearest-neighbor
//! rule with its quantile-robust variant. The hull radius is then chosen
//! to bring the r-convex hull as close as possible (in Hausdorff distance)
//! to the sausage over a finite grid of candidates.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::estimators::{alpha_hull, sausage};
use crate::geom::grid_index::GridIndex;
use crate::geom::mst::connectivity_radius;
use crate::geom::{BBox2, GeomError, Point2};
use crate::metrics::hausdorff_points;

#[derive(Debug, Error, PartialEq)]
pub enum TuningError {
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("candidate grid for r is empty")]
    EmptyGrid,
}

/// Everything the `tune` command reports.
#[derive(Debug, Clone, Serialize)]
pub struct TuningReport {
    /// connectivity rule: inf{ε : the sausage is connected}; absent when
    /// the input carries fewer than 2 distinct points
    pub eps_conn: Option<f64>,
    /// split rule, max variant
    pub eps_split: f64,
    /// split rule, (1−δ)-quantile variant
    pub eps_split_quantile: f64,
    pub delta: f64,
    pub r_hat: f64,
    pub r_search_grid: Vec<f64>,
    /// (r, d_H(C_r, sausage)) over the grid
    pub matching_distances: Vec<(f64, f64)>,
}

/// Exact infimum ε such that `B(points, ε)` is connected: half of the
/// largest MST edge (closed balls, so tangency connects).
pub fn eps_connectivity(points: &[Point2]) -> Result<f64, TuningError> {
    connectivity_radius(points).map_err(|e| match e {
        GeomError::TooFewPoints { needed, got } => TuningError::TooFewPoints { needed, got },
        _ => TuningError::TooFewPoints {
            needed: 2,
            got: points.len(),
        },
    })
}

/// Random-split rule: shuffle with the seed, give the first half (plus the
/// odd point) to the reference sample, and measure each remaining point's
/// nearest-neighbor distance into it. Returns (max dᵢ, nearest-rank
/// (1−δ)-quantile of d).
pub fn eps_split(points: &[Point2], delta: f64, seed: u64) -> Result<(f64, f64), TuningError> {
    if points.len() < 4 {
        return Err(TuningError::TooFewPoints {
            needed: 4,
            got: points.len(),
        });
    }
    assert!((0.0..1.0).contains(&delta), "delta must be in [0,1)");
    let mut order: Vec<usize> = (0..points.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let n_ref = points.len().div_ceil(2);
    let reference: Vec<Point2> = order[..n_ref].iter().map(|&i| points[i]).collect();
    let probe: Vec<Point2> = order[n_ref..].iter().map(|&i| points[i]).collect();
    let index = GridIndex::build(&reference).expect("nonempty");
    let mut d: Vec<f64> = probe.iter().map(|&p| index.nearest_dist(p)).collect();
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let eps_max = *d.last().unwrap();
    let rank = ((1.0 - delta) * d.len() as f64).ceil().max(1.0) as usize;
    let eps_quantile = d[rank.min(d.len()) - 1];
    Ok((eps_max, eps_quantile))
}

/// Result of the grid search for r.
#[derive(Debug, Clone, Serialize)]
pub struct SelectR {
    pub r_hat: f64,
    pub matching_distances: Vec<(f64, f64)>,
}

/// Choose the hull radius whose r-convex hull is closest, in Hausdorff
/// distance between boundary-plus-input discretizations, to the sausage
/// `B(points, eps)`. Among radii within `delta_slack` of the minimum the
/// smallest wins (a set r-convex for r is r'-convex for every r' < r, so
/// smaller is the safe side).
pub fn select_r(
    points: &[Point2],
    eps: f64,
    r_grid: &[f64],
    delta_slack: f64,
    hull_sample: usize,
) -> Result<SelectR, TuningError> {
    if r_grid.is_empty() {
        return Err(TuningError::EmptyGrid);
    }
    if points.is_empty() {
        return Err(TuningError::TooFewPoints { needed: 1, got: 0 });
    }
    debug_assert!(r_grid.windows(2).all(|w| w[0] <= w[1]), "grid must ascend");
    let hull_sample = hull_sample.max(64);

    let u = sausage(points, eps).expect("nonempty input");
    let mut sausage_disc = sample_arcs(
        u.arcs
            .iter()
            .map(|a| a.to_arc(&u.centers, u.eps))
            .collect::<Vec<_>>()
            .as_slice(),
        hull_sample,
    );
    sausage_disc.extend_from_slice(&u.centers);

    let matching: Vec<(f64, f64)> = r_grid
        .par_iter()
        .map(|&r| {
            let hull = alpha_hull(points, r).expect("nonempty input");
            let mut disc = sample_arcs(
                hull.boundary_loops
                    .iter()
                    .flat_map(|lp| {
                        lp.pieces.iter().filter_map(|p| match p {
                            crate::estimators::BoundaryPiece::Arc(a) => Some(*a),
                            crate::estimators::BoundaryPiece::Segment(..) => None,
                        })
                    })
                    .collect::<Vec<_>>()
                    .as_slice(),
                hull_sample,
            );
            // input points stand in for the interior (both sets contain them)
            disc.extend_from_slice(&hull.vertices);
            disc.extend(hull.isolated_points.iter().copied());
            let d = hausdorff_points(&disc, &sausage_disc).expect("nonempty");
            (r, d)
        })
        .collect();

    let best = matching
        .iter()
        .map(|&(_, d)| d)
        .fold(f64::INFINITY, f64::min);
    let r_hat = matching
        .iter()
        .find(|&&(_, d)| d <= best + delta_slack)
        .map(|&(r, _)| r)
        .unwrap();
    Ok(SelectR {
        r_hat,
        matching_distances: matching,
    })
}

/// Sample arcs at roughly `budget` points total, by arc length.
fn sample_arcs(arcs: &[crate::geom::Arc2], budget: usize) -> Vec<Point2> {
    let total: f64 = arcs.iter().map(|a| a.length()).sum();
    if total <= 0.0 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(budget + arcs.len() * 2);
    for a in arcs {
        let n = ((a.length() / total) * budget as f64).ceil().max(2.0) as usize;
        let sweep = a.span();
        for k in 0..=n {
            let t = k as f64 / n as f64;
            let theta = match a.orientation {
                crate::geom::Orientation::Ccw => a.start_angle + sweep * t,
                crate::geom::Orientation::Cw => a.start_angle - sweep * t,
            };
            out.push(a.point_at_angle(theta));
        }
    }
    out
}

/// Default log-spaced grid of 32 radii spanning [eps, diameter].
pub fn default_r_grid(points: &[Point2], eps: f64, size: usize) -> Vec<f64> {
    let bb = BBox2::of_points(points).expect("nonempty");
    let lo = eps.max(1e-9);
    let hi = bb.diameter().max(lo * 2.0);
    let n = size.max(2);
    (0..n)
        .map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64))
        .collect()
}

/// Full tuning pass: both ε rules plus the r grid search, reported as one
/// JSON-serializable record.
pub fn tune(
    points: &[Point2],
    delta: f64,
    seed: u64,
    grid_size: usize,
    hull_sample: usize,
) -> Result<TuningReport, TuningError> {
    let (eps_max, eps_quantile) = eps_split(points, delta, seed)?;
    let eps_conn = eps_connectivity(points).ok();
    let grid = default_r_grid(points, eps_quantile, grid_size);
    let sel = select_r(points, eps_quantile, &grid, 0.0, hull_sample)?;
    Ok(TuningReport {
        eps_conn,
        eps_split: eps_max,
        eps_split_quantile: eps_quantile,
        delta,
        r_hat: sel.r_hat,
        r_search_grid: grid,
        matching_distances: sel.matching_distances,
    })
}
