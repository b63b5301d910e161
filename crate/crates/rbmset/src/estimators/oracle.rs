//! Brute-force grid oracle for the r-convex hull, straight from the
//! complement definition: a cell center c is excluded iff some candidate
//! disk center y on a half-cell subgrid satisfies ‖y−c‖ < r while the open
//! disk B(y, r) contains no input point.
//!
//! The candidate sweep is accelerated without changing its outcome: the
//! subgrid nodes with point-distance ≥ r (the admissible empty-disk
//! centers) are found with a distance transform plus an exact refinement
//! band, and a second distance transform measures each cell center's
//! distance to that node set. Oracle error is one cell, from the candidate
//! discretization itself.

use crate::geom::grid_index::GridIndex;
use crate::geom::{BBox2, Point2};
use crate::mask::{edt_sq, GridGeom, GridMask};

use super::EstimatorError;

/// Rasterized r-convex hull on cells of size `cell_size` covering the
/// point bbox. Requires `cell_size ≤ r/10`.
pub fn alpha_hull_oracle(
    points: &[Point2],
    r: f64,
    cell_size: f64,
) -> Result<GridMask, EstimatorError> {
    if points.is_empty() {
        return Err(EstimatorError::TooFewPoints { needed: 1, got: 0 });
    }
    assert!(r > 0.0 && r.is_finite());
    if !(cell_size > 0.0) || cell_size > r / 10.0 {
        return Err(EstimatorError::CellSizeTooLarge {
            cell: cell_size,
            max: r / 10.0,
        });
    }

    // Grid aligned so bbox corners land on cell centers: sample points at
    // the bbox frame then sit at exact centers, keeping the degenerate
    // single-point/corner cases crisp.
    let raw = BBox2::of_points(points).unwrap();
    let mask_geom = GridGeom {
        origin: Point2::new(raw.min.x - 2.5 * cell_size, raw.min.y - 2.5 * cell_size),
        cell: cell_size,
        width: (raw.width() / cell_size).ceil() as usize + 5,
        height: (raw.height() / cell_size).ceil() as usize + 5,
    };
    alpha_hull_oracle_on(points, r, mask_geom)
}

/// As [`alpha_hull_oracle`], on a caller-fixed grid (so the result can be
/// compared cell-by-cell with other masks).
pub fn alpha_hull_oracle_on(
    points: &[Point2],
    r: f64,
    mask_geom: GridGeom,
) -> Result<GridMask, EstimatorError> {
    if points.is_empty() {
        return Err(EstimatorError::TooFewPoints { needed: 1, got: 0 });
    }
    let cell_size = mask_geom.cell;
    if !(cell_size > 0.0) || cell_size > r / 10.0 {
        return Err(EstimatorError::CellSizeTooLarge {
            cell: cell_size,
            max: r / 10.0,
        });
    }

    // Candidate subgrid at spacing s = cell/2, aligned so that every mask
    // cell center is a subgrid node; padded by r so candidates just outside
    // the mask are seen.
    let s = cell_size / 2.0;
    let pad = ((r + 2.0 * cell_size) / s).ceil() as usize + 1;
    let sub_origin = Point2::new(
        mask_geom.origin.x - pad as f64 * s,
        mask_geom.origin.y - pad as f64 * s,
    );
    let sw = 2 * mask_geom.width + 2 * pad + 2;
    let sh = 2 * mask_geom.height + 2 * pad + 2;
    let node_pos = |u: usize, v: usize| -> Point2 {
        Point2::new(sub_origin.x + u as f64 * s, sub_origin.y + v as f64 * s)
    };

    // Distance from every node to the sample, via EDT over snapped sites
    // with exact recomputation in the snapping band.
    let mut field = vec![f64::INFINITY; sw * sh];
    for p in points {
        let u = ((p.x - sub_origin.x) / s).round() as isize;
        let v = ((p.y - sub_origin.y) / s).round() as isize;
        let (u, v) = (
            u.clamp(0, sw as isize - 1) as usize,
            v.clamp(0, sh as isize - 1) as usize,
        );
        field[v * sw + u] = 0.0;
    }
    edt_sq(sw, sh, &mut field);

    let index = GridIndex::build(points).expect("nonempty");
    let snap_band = 1.5 * s;
    let r_sq_lo = {
        let t = (r - snap_band).max(0.0);
        t * t
    };
    let r_sq_hi = (r + snap_band) * (r + snap_band);

    // Admissible empty-disk centers: d(node, sample) ≥ r.
    let s_sq = s * s;
    use rayon::prelude::*;
    let empty: Vec<bool> = field
        .par_iter()
        .enumerate()
        .map(|(k, &d2_cells)| {
            let d2 = d2_cells * s_sq;
            if d2 < r_sq_lo {
                false
            } else if d2 > r_sq_hi {
                true
            } else {
                // snapped distance is ambiguous here: measure exactly
                let p = node_pos(k % sw, k / sw);
                index.nearest_dist(p) >= r
            }
        })
        .collect();

    // Distance from every node to the admissible-center set.
    let mut dist_empty = vec![f64::INFINITY; sw * sh];
    for (k, &e) in empty.iter().enumerate() {
        if e {
            dist_empty[k] = 0.0;
        }
    }
    edt_sq(sw, sh, &mut dist_empty);

    // A mask cell survives iff no admissible center lies strictly within r
    // of it. Mask center (i, j) sits at subgrid node (pad+2i+1, pad+2j+1).
    let r_sq = r * r * (1.0 - 1e-12);
    let mut mask = GridMask::empty(mask_geom);
    for j in 0..mask_geom.height {
        for i in 0..mask_geom.width {
            let u = pad + 2 * i + 1;
            let v = pad + 2 * j + 1;
            let d2 = dist_empty[v * sw + u] * s_sq;
            mask.set(i, j, d2 >= r_sq);
        }
    }
    Ok(mask)
}
