//! The two trajectory-support estimators: the r-convex hull of the sample
//! and the sausage (union of balls around the sample), with exact areas,
//! perimeters and brute-force grid oracles.

mod alpha_hull;
mod oracle;
mod sausage;

pub use alpha_hull::{alpha_hull, AlphaHull, BoundaryPiece, HullLoop};
pub use oracle::{alpha_hull_oracle, alpha_hull_oracle_on};
pub use sausage::{is_connected, sausage, UnionOfBalls};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EstimatorError {
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("all input points coincide within tolerance")]
    DegenerateAllCoincident,
    #[error("cell size {cell} too large (must be at most {max})")]
    CellSizeTooLarge { cell: f64, max: f64 },
}

/// Signed Gauss–Green contribution of a circular arc from `theta_start`
/// to `theta_start + sweep` (sweep may be negative for clockwise travel)
/// on the circle `(center, radius)`:
/// ½∫(x dy − y dx) = ½ [r²·Δθ + cx·r·Δ(sin θ) − cy·r·Δ(cos θ)].
pub(crate) fn arc_green_area(
    center: crate::geom::Point2,
    radius: f64,
    theta_start: f64,
    sweep: f64,
) -> f64 {
    let theta_end = theta_start + sweep;
    0.5 * (radius * radius * sweep
        + center.x * radius * (theta_end.sin() - theta_start.sin())
        - center.y * radius * (theta_end.cos() - theta_start.cos()))
}
