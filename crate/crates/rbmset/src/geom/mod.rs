//! Planar geometry kernel: points, disks, arcs, robust predicates,
//! Delaunay triangulation, Euclidean MST and a uniform grid index.

pub mod delaunay;
pub mod grid_index;
pub mod mst;
pub mod predicates;

use std::f64::consts::TAU;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::num::Real;

/// Errors raised by the geometry kernel.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeomError {
    #[error("input points are all collinear; no triangulation exists")]
    CollinearInput,
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("reference point set is empty")]
    EmptyReferenceSet,
    #[error("all input points coincide within tolerance")]
    DegenerateAllCoincident,
}

/// A point of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point<F> {
    pub x: F,
    pub y: F,
}

/// Concrete point used throughout the estimation pipeline.
pub type Point2 = Point<f64>;

impl<F: Real> Point<F> {
    #[inline]
    pub fn new(x: F, y: F) -> Self {
        Point { x, y }
    }

    #[inline]
    pub fn dot(self, rhs: Self) -> F {
        self.x * rhs.x + self.y * rhs.y
    }

    /// z-component of the cross product of two vectors.
    #[inline]
    pub fn cross(self, rhs: Self) -> F {
        self.x * rhs.y - self.y * rhs.x
    }

    #[inline]
    pub fn norm_sq(self) -> F {
        self.dot(self)
    }

    /// Euclidean norm. Written as `sqrt(x*x + y*y)` on purpose: every
    /// distance in the crate goes through the same expression so that
    /// equal inputs give bit-equal outputs (`hypot` rounds differently).
    #[inline]
    pub fn norm(self) -> F {
        self.norm_sq().sqrt()
    }

    #[inline]
    pub fn dist(self, rhs: Self) -> F {
        (self - rhs).norm()
    }

    #[inline]
    pub fn dist_sq(self, rhs: Self) -> F {
        (self - rhs).norm_sq()
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Angle of the vector in `[0, 2π)`.
    #[inline]
    pub fn angle(self) -> F {
        let a = self.y.atan2(self.x);
        if a < F::zero() {
            a + F::of(TAU)
        } else {
            a
        }
    }

    /// Lexicographic (x, then y) comparison; total for finite points.
    #[inline]
    pub fn lex_cmp(self, rhs: Self) -> std::cmp::Ordering {
        self.x
            .partial_cmp(&rhs.x)
            .unwrap()
            .then(self.y.partial_cmp(&rhs.y).unwrap())
    }
}

impl<F: Real> Add for Point<F> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<F: Real> Sub for Point<F> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<F: Real> Mul<F> for Point<F> {
    type Output = Self;
    #[inline]
    fn mul(self, s: F) -> Self {
        Point::new(self.x * s, self.y * s)
    }
}

impl<F: Real> Div<F> for Point<F> {
    type Output = Self;
    #[inline]
    fn div(self, s: F) -> Self {
        Point::new(self.x / s, self.y / s)
    }
}

impl<F: Real> Neg for Point<F> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Point::new(-self.x, -self.y)
    }
}

/// Closed disk with positive radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk<F> {
    pub center: Point<F>,
    pub radius: F,
}

pub type Disk2 = Disk<f64>;

impl<F: Real> Disk<F> {
    pub fn new(center: Point<F>, radius: F) -> Self {
        assert!(radius > F::zero(), "disk radius must be positive");
        Disk { center, radius }
    }

    #[inline]
    pub fn contains(&self, p: Point<F>) -> bool {
        p.dist_sq(self.center) <= self.radius * self.radius
    }
}

/// Orientation of an arc sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Ccw,
    Cw,
}

/// Circular arc. Angles are normalized to `[0, 2π)`; the sweep runs from
/// `start_angle` to `end_angle` in the stored orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc<F> {
    pub center: Point<F>,
    pub radius: F,
    pub start_angle: F,
    pub end_angle: F,
    pub orientation: Orientation,
}

pub type Arc2 = Arc<f64>;

pub(crate) fn normalize_angle<F: Real>(a: F) -> F {
    let tau = F::of(TAU);
    let mut a = a % tau;
    if a < F::zero() {
        a = a + tau;
    }
    // `-1e-30 % tau` rounds to tau itself; keep the invariant a ∈ [0, tau).
    if a >= tau {
        a = a - tau;
    }
    a
}

impl<F: Real> Arc<F> {
    pub fn new(center: Point<F>, radius: F, start_angle: F, end_angle: F, orientation: Orientation) -> Self {
        assert!(radius > F::zero(), "arc radius must be positive");
        Arc {
            center,
            radius,
            start_angle: normalize_angle(start_angle),
            end_angle: normalize_angle(end_angle),
            orientation,
        }
    }

    /// Angular span in `[0, 2π)` measured along the stored orientation.
    /// A zero span denotes the full circle when `start == end`.
    pub fn span(&self) -> F {
        let tau = F::of(TAU);
        let raw = match self.orientation {
            Orientation::Ccw => self.end_angle - self.start_angle,
            Orientation::Cw => self.start_angle - self.end_angle,
        };
        normalize_angle(raw + tau) // keep exact zero as zero
    }

    pub fn length(&self) -> F {
        self.radius * self.span()
    }

    pub fn point_at_angle(&self, theta: F) -> Point<F> {
        Point::new(
            self.center.x + self.radius * theta.cos(),
            self.center.y + self.radius * theta.sin(),
        )
    }

    pub fn start_point(&self) -> Point<F> {
        self.point_at_angle(self.start_angle)
    }

    pub fn end_point(&self) -> Point<F> {
        self.point_at_angle(self.end_angle)
    }
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BBox<F> {
    pub min: Point<F>,
    pub max: Point<F>,
}

pub type BBox2 = BBox<f64>;

impl<F: Real> BBox<F> {
    pub fn new(min: Point<F>, max: Point<F>) -> Self {
        BBox { min, max }
    }

    pub fn of_points(points: &[Point<F>]) -> Option<Self> {
        let first = *points.first()?;
        let mut bb = BBox { min: first, max: first };
        for p in &points[1..] {
            bb.min.x = bb.min.x.min(p.x);
            bb.min.y = bb.min.y.min(p.y);
            bb.max.x = bb.max.x.max(p.x);
            bb.max.y = bb.max.y.max(p.y);
        }
        Some(bb)
    }

    pub fn inflate(&self, by: F) -> Self {
        BBox {
            min: Point::new(self.min.x - by, self.min.y - by),
            max: Point::new(self.max.x + by, self.max.y + by),
        }
    }

    #[inline]
    pub fn contains(&self, p: Point<F>) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn width(&self) -> F {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> F {
        self.max.y - self.min.y
    }

    pub fn diameter(&self) -> F {
        (self.max - self.min).norm()
    }
}

/// Convex hull by Andrew's monotone chain, counter-clockwise, without
/// repeating the first vertex. Collinear interior points are dropped.
pub fn convex_hull<F: Real>(points: &[Point<F>]) -> Vec<Point<F>> {
    let mut pts: Vec<Point<F>> = points.to_vec();
    pts.sort_by(|a, b| a.lex_cmp(*b));
    pts.dedup_by(|a, b| a == b);
    let n = pts.len();
    if n < 3 {
        return pts;
    }
    let mut lower: Vec<Point<F>> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 {
            let a = lower[lower.len() - 2];
            let b = lower[lower.len() - 1];
            if (b - a).cross(p - a) <= F::zero() {
                lower.pop();
            } else {
                break;
            }
        }
        lower.push(p);
    }
    let mut upper: Vec<Point<F>> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 {
            let a = upper[upper.len() - 2];
            let b = upper[upper.len() - 1];
            if (b - a).cross(p - a) <= F::zero() {
                upper.pop();
            } else {
                break;
            }
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Signed area of a polygon (positive when counter-clockwise).
pub fn polygon_signed_area<F: Real>(poly: &[Point<F>]) -> F {
    let n = poly.len();
    let mut acc = F::zero();
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        acc = acc + a.cross(b);
    }
    acc / F::of(2.0)
}
