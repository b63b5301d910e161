//! Ground-truth domains: membership, boundary projection, inward normals,
//! rasterization and rolling-condition diagnostics.
//!
//! A `Domain` stands for the unknown compact set being estimated. All
//! built-ins are closures of their interiors with connected interior;
//! uniform exterior-sphere / interior-cone regularity is a documented
//! assumption probed numerically by [`Domain::rolling_diagnostic`], not
//! verified exactly.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{BBox2, Point2};
use crate::mask::{GridGeom, GridMask};

#[derive(Debug, Error)]
pub enum DomainError {
    #[error("cell size {cell} exceeds the smallest bbox side {side}")]
    CellSizeTooLarge { cell: f64, side: f64 },
    #[error("projection did not converge after {0} iterations")]
    ProjectionDidNotConverge(usize),
    #[error("domain interior is empty or disconnected on a {0}x{0} probe raster")]
    DisconnectedInterior(usize),
    #[error("invalid domain descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("i/o error reading domain data: {0}")]
    Io(#[from] std::io::Error),
}

/// Serializable construction recipe for a [`Domain`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainDescriptor {
    Disk {
        center: [f64; 2],
        radius: f64,
    },
    Rectangle {
        min: [f64; 2],
        max: [f64; 2],
    },
    Polygon {
        outer: Vec<[f64; 2]>,
        #[serde(default)]
        holes: Vec<Vec<[f64; 2]>>,
    },
    CrookedEggMinusDisk {
        #[serde(default = "default_hole_center")]
        hole_center: [f64; 2],
        #[serde(default = "default_hole_radius")]
        hole_radius: f64,
    },
    /// Signed-distance raster stored as CSV (header row `origin_x,origin_y,cell_size`,
    /// one row of those values, then `height` rows of `width` samples at cell centers).
    ImplicitGrid { path: String },
}

fn default_hole_center() -> [f64; 2] {
    [0.05, 0.6]
}

fn default_hole_radius() -> f64 {
    0.15
}

#[derive(Debug, Clone)]
enum Kind {
    Disk {
        center: Point2,
        radius: f64,
    },
    Rectangle {
        min: Point2,
        max: Point2,
    },
    Polygon {
        loops: Vec<Vec<Point2>>,
    },
    CrookedEgg {
        hole_center: Point2,
        hole_radius: f64,
        /// Dense polyline of the egg curve for projections.
        curve: Vec<(f64, Point2)>,
    },
    Implicit {
        geom: GridGeom,
        sdf: Vec<f64>,
    },
}

/// A compact planar region S (closure of its interior).
#[derive(Debug, Clone)]
pub struct Domain {
    kind: Kind,
    bbox: BBox2,
    anchor: Point2,
    label: String,
}

/// Boundary probe: a point of ∂S with its inward unit normal.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryProbe {
    pub point: Point2,
    pub inward_normal: Point2,
    pub distance_error: f64,
}

/// Fractions of boundary probes at which a disk of the requested radius
/// fits inside S (inner) and inside the closure of the complement (outer).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RollingReport {
    pub inner_ok_fraction: f64,
    pub outer_ok_fraction: f64,
    pub probes: usize,
}

const EGG_SAMPLES: usize = 4096;

fn egg_radius(theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    s * s * s + c * c * c
}

fn egg_point(theta: f64) -> Point2 {
    let r = egg_radius(theta);
    Point2::new(r * theta.cos(), r * theta.sin())
}

impl Domain {
    pub fn disk(center: Point2, radius: f64) -> Domain {
        assert!(radius > 0.0);
        Domain {
            bbox: BBox2::new(
                Point2::new(center.x - radius, center.y - radius),
                Point2::new(center.x + radius, center.y + radius),
            ),
            anchor: center,
            label: "disk".into(),
            kind: Kind::Disk { center, radius },
        }
    }

    pub fn unit_disk() -> Domain {
        Domain::disk(Point2::new(0.0, 0.0), 1.0)
    }

    pub fn rectangle(min: Point2, max: Point2) -> Domain {
        assert!(max.x > min.x && max.y > min.y);
        Domain {
            bbox: BBox2::new(min, max),
            anchor: (min + max) * 0.5,
            label: "rectangle".into(),
            kind: Kind::Rectangle { min, max },
        }
    }

    pub fn unit_square() -> Domain {
        Domain::rectangle(Point2::new(0.0, 0.0), Point2::new(1.0, 1.0))
    }

    /// Region bounded by the crooked-egg curve r(θ) = sin³θ + cos³θ
    /// (θ ∈ [−π/4, 3π/4], where the radius is nonnegative) minus an open
    /// disk. Defaults follow the standard test configuration: hole of
    /// radius 0.15 at (0.05, 0.6).
    pub fn crooked_egg_with(hole_center: Point2, hole_radius: f64) -> Domain {
        let mut curve = Vec::with_capacity(EGG_SAMPLES + 1);
        for k in 0..=EGG_SAMPLES {
            let theta = -FRAC_PI_4 + (k as f64 / EGG_SAMPLES as f64) * PI;
            curve.push((theta, egg_point(theta)));
        }
        let bbox = BBox2::of_points(&curve.iter().map(|&(_, p)| p).collect::<Vec<_>>())
            .unwrap()
            .inflate(1e-9);
        let domain = Domain {
            bbox,
            anchor: Point2::new(0.5, 0.2),
            label: "crooked_egg_minus_disk".into(),
            kind: Kind::CrookedEgg {
                hole_center,
                hole_radius,
                curve,
            },
        };
        debug_assert!(domain.contains(domain.anchor));
        domain
    }

    pub fn crooked_egg() -> Domain {
        Domain::crooked_egg_with(Point2::new(0.05, 0.6), 0.15)
    }

    pub fn polygon(outer: Vec<Point2>, holes: Vec<Vec<Point2>>) -> Result<Domain, DomainError> {
        if outer.len() < 3 {
            return Err(DomainError::InvalidDescriptor(
                "polygon outer loop needs at least 3 vertices".into(),
            ));
        }
        let bbox = BBox2::of_points(&outer).unwrap();
        let mut loops = vec![outer];
        loops.extend(holes);
        let mut domain = Domain {
            bbox,
            anchor: Point2::new(0.0, 0.0),
            label: "polygon".into(),
            kind: Kind::Polygon { loops },
        };
        domain.anchor = domain.deep_interior_point(256)?;
        Ok(domain)
    }

    /// Load a signed-distance raster from CSV; see [`DomainDescriptor::ImplicitGrid`].
    pub fn implicit_from_csv(path: &Path) -> Result<Domain, DomainError> {
        let text = fs::read_to_string(path)?;
        Domain::implicit_from_csv_str(&text)
    }

    pub fn implicit_from_csv_str(text: &str) -> Result<Domain, DomainError> {
        let bad = |m: &str| DomainError::InvalidDescriptor(m.to_string());
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| bad("empty raster file"))?;
        let expect = ["origin_x", "origin_y", "cell_size"];
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        if cols != expect {
            return Err(bad("raster header must be origin_x,origin_y,cell_size"));
        }
        let meta = lines.next().ok_or_else(|| bad("missing raster metadata row"))?;
        let vals: Vec<f64> = meta
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| bad(&format!("bad metadata value: {e}")))?;
        if vals.len() != 3 || !(vals[2] > 0.0) {
            return Err(bad("metadata row must hold origin_x,origin_y,cell_size>0"));
        }
        let (ox, oy, cell) = (vals[0], vals[1], vals[2]);
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for line in lines {
            let row: Vec<f64> = line
                .split(',')
                .map(|v| v.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| bad(&format!("bad raster value: {e}")))?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(bad("raster has no sample rows"));
        }
        let width = rows[0].len();
        if width < 2 || rows.len() < 2 || rows.iter().any(|r| r.len() != width) {
            return Err(bad("raster must be rectangular, at least 2x2"));
        }
        let height = rows.len();
        let geom = GridGeom {
            origin: Point2::new(ox, oy),
            cell,
            width,
            height,
        };
        let sdf: Vec<f64> = rows.into_iter().flatten().collect();
        let bbox = BBox2::new(
            geom.origin,
            Point2::new(ox + width as f64 * cell, oy + height as f64 * cell),
        );
        let mut domain = Domain {
            bbox,
            anchor: Point2::new(0.0, 0.0),
            label: "implicit_grid".into(),
            kind: Kind::Implicit { geom, sdf },
        };
        domain.anchor = domain.deep_interior_point(256)?;
        domain.validate_connected(512)?;
        Ok(domain)
    }

    pub fn from_descriptor(desc: &DomainDescriptor) -> Result<Domain, DomainError> {
        let d = match desc {
            DomainDescriptor::Disk { center, radius } => {
                if !(*radius > 0.0) {
                    return Err(DomainError::InvalidDescriptor("disk radius must be > 0".into()));
                }
                Domain::disk(Point2::new(center[0], center[1]), *radius)
            }
            DomainDescriptor::Rectangle { min, max } => {
                if !(max[0] > min[0] && max[1] > min[1]) {
                    return Err(DomainError::InvalidDescriptor("rectangle must have positive extent".into()));
                }
                Domain::rectangle(Point2::new(min[0], min[1]), Point2::new(max[0], max[1]))
            }
            DomainDescriptor::Polygon { outer, holes } => {
                let conv = |v: &Vec<[f64; 2]>| v.iter().map(|p| Point2::new(p[0], p[1])).collect();
                let d = Domain::polygon(conv(outer), holes.iter().map(conv).collect())?;
                d.validate_connected(512)?;
                d
            }
            DomainDescriptor::CrookedEggMinusDisk { hole_center, hole_radius } => {
                Domain::crooked_egg_with(Point2::new(hole_center[0], hole_center[1]), *hole_radius)
            }
            DomainDescriptor::ImplicitGrid { path } => Domain::implicit_from_csv(Path::new(path))?,
        };
        Ok(d)
    }

    pub fn from_json_str(json: &str) -> Result<Domain, DomainError> {
        let desc: DomainDescriptor = serde_json::from_str(json)
            .map_err(|e| DomainError::InvalidDescriptor(e.to_string()))?;
        Domain::from_descriptor(&desc)
    }

    pub fn from_json_file(path: &Path) -> Result<Domain, DomainError> {
        let text = fs::read_to_string(path)?;
        Domain::from_json_str(&text)
    }

    pub fn bbox(&self) -> BBox2 {
        self.bbox
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// A point well inside the interior; default start for simulations.
    pub fn interior_anchor(&self) -> Point2 {
        self.anchor
    }

    /// Smallest characteristic boundary feature (used for step-size sanity
    /// warnings, not correctness).
    pub fn feature_scale(&self) -> f64 {
        match &self.kind {
            Kind::Disk { radius, .. } => *radius,
            Kind::Rectangle { min, max } => (max.x - min.x).min(max.y - min.y),
            Kind::Polygon { loops } => {
                let mut m = f64::INFINITY;
                for lp in loops {
                    for (k, &a) in lp.iter().enumerate() {
                        m = m.min(a.dist(lp[(k + 1) % lp.len()]));
                    }
                }
                m.min(self.bbox.width().min(self.bbox.height()))
            }
            Kind::CrookedEgg { hole_radius, .. } => *hole_radius,
            Kind::Implicit { geom, .. } => geom.cell * 4.0,
        }
    }

    /// Membership in the closed set S.
    pub fn contains(&self, p: Point2) -> bool {
        match &self.kind {
            Kind::Disk { center, radius } => p.dist_sq(*center) <= radius * radius,
            Kind::Rectangle { min, max } => {
                p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y
            }
            Kind::Polygon { loops } => {
                let mut inside = false;
                for lp in loops {
                    for (k, &a) in lp.iter().enumerate() {
                        let b = lp[(k + 1) % lp.len()];
                        if point_on_segment(p, a, b) {
                            return true; // closed set: boundary included
                        }
                        if (a.y > p.y) != (b.y > p.y) {
                            let xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                            if p.x < xint {
                                inside = !inside;
                            }
                        }
                    }
                }
                inside
            }
            Kind::CrookedEgg {
                hole_center,
                hole_radius,
                ..
            } => {
                let rho = p.norm();
                let theta = p.y.atan2(p.x);
                // sin³θ+cos³θ < 0 exactly outside θ ∈ (−π/4, 3π/4), so the
                // radial inequality already encodes the angular range.
                rho <= egg_radius(theta) && p.dist_sq(*hole_center) >= hole_radius * hole_radius
            }
            Kind::Implicit { .. } => self.implicit_sdf(p) <= 0.0,
        }
    }

    fn implicit_sdf(&self, p: Point2) -> f64 {
        let Kind::Implicit { geom, sdf } = &self.kind else {
            unreachable!()
        };
        let u = (p.x - geom.origin.x) / geom.cell - 0.5;
        let v = (p.y - geom.origin.y) / geom.cell - 0.5;
        let far = geom.cell * (geom.width + geom.height) as f64;
        if u < -1.0 || v < -1.0 || u > geom.width as f64 || v > geom.height as f64 {
            return far;
        }
        let uc = u.clamp(0.0, (geom.width - 1) as f64 - 1e-9);
        let vc = v.clamp(0.0, (geom.height - 1) as f64 - 1e-9);
        let (i, j) = (uc.floor() as usize, vc.floor() as usize);
        let (fu, fv) = (uc - i as f64, vc - j as f64);
        let at = |i: usize, j: usize| sdf[j * geom.width + i];
        let s = at(i, j) * (1.0 - fu) * (1.0 - fv)
            + at(i + 1, j) * fu * (1.0 - fv)
            + at(i, j + 1) * (1.0 - fu) * fv
            + at(i + 1, j + 1) * fu * fv;
        // Clamped queries outside the sample lattice fall back to the edge
        // value plus the clamp distance, keeping the sign correct outside.
        let extra = ((u - uc).abs() + (v - vc).abs()) * geom.cell;
        s + extra
    }

    /// Approximate signed distance to ∂S, negative inside. Exact for disk
    /// and rectangle; polyline/bilinear-based otherwise.
    pub fn signed_distance(&self, p: Point2) -> f64 {
        match &self.kind {
            Kind::Disk { center, radius } => p.dist(*center) - radius,
            Kind::Rectangle { min, max } => {
                let c = (*min + *max) * 0.5;
                let half = (*max - *min) * 0.5;
                let dx = (p.x - c.x).abs() - half.x;
                let dy = (p.y - c.y).abs() - half.y;
                let outside = Point2::new(dx.max(0.0), dy.max(0.0)).norm();
                outside + dx.max(dy).min(0.0)
            }
            Kind::Polygon { loops } => {
                let mut d = f64::INFINITY;
                for lp in loops {
                    for (k, &a) in lp.iter().enumerate() {
                        d = d.min(dist_point_segment(p, a, lp[(k + 1) % lp.len()]));
                    }
                }
                if self.contains(p) {
                    -d
                } else {
                    d
                }
            }
            Kind::CrookedEgg {
                hole_center,
                hole_radius,
                ..
            } => {
                let d_curve = self.egg_nearest(p).1;
                let d_hole = (p.dist(*hole_center) - hole_radius).abs();
                let d = d_curve.min(d_hole);
                if self.contains(p) {
                    -d
                } else {
                    d
                }
            }
            Kind::Implicit { .. } => self.implicit_sdf(p),
        }
    }

    /// Nearest point of the egg curve: returns (point, distance).
    fn egg_nearest(&self, p: Point2) -> (Point2, f64) {
        let Kind::CrookedEgg { curve, .. } = &self.kind else {
            unreachable!()
        };
        // Coarse scan for local minima, then golden-section refinement of
        // the best few candidates.
        let n = curve.len();
        let d = |theta: f64| p.dist_sq(egg_point(theta));
        let mut cands: Vec<(f64, usize)> = Vec::new();
        for k in 0..n {
            let dk = p.dist_sq(curve[k].1);
            let prev = p.dist_sq(curve[(k + n - 1) % n].1);
            let next = p.dist_sq(curve[(k + 1) % n].1);
            if dk <= prev && dk <= next {
                cands.push((dk, k));
            }
        }
        cands.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        cands.truncate(4);
        let mut best = (curve[cands[0].1].1, cands[0].0.sqrt());
        for &(_, k) in &cands {
            let lo = curve[k.saturating_sub(2)].0;
            let hi = curve[(k + 2).min(n - 1)].0;
            let (mut a, mut b) = (lo, hi);
            let phi = 0.618_033_988_749_894_9;
            let (mut x1, mut x2) = (b - phi * (b - a), a + phi * (b - a));
            let (mut f1, mut f2) = (d(x1), d(x2));
            for _ in 0..60 {
                if f1 < f2 {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - phi * (b - a);
                    f1 = d(x1);
                } else {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + phi * (b - a);
                    f2 = d(x2);
                }
            }
            let t = 0.5 * (a + b);
            let q = egg_point(t);
            let dist = p.dist(q);
            if dist < best.1 {
                best = (q, dist);
            }
        }
        best
    }

    /// Nearest point of S; identity for points already inside.
    pub fn project_to_closure(&self, p: Point2) -> Result<Point2, DomainError> {
        if self.contains(p) {
            return Ok(p);
        }
        let q = match &self.kind {
            Kind::Disk { center, radius } => {
                *center + (p - *center) * (radius / p.dist(*center)) * (1.0 - 1e-12)
            }
            Kind::Rectangle { min, max } => Point2::new(
                p.x.clamp(min.x, max.x),
                p.y.clamp(min.y, max.y),
            ),
            Kind::Polygon { loops } => {
                let mut best = (f64::INFINITY, p);
                for lp in loops {
                    for (k, &a) in lp.iter().enumerate() {
                        let b = lp[(k + 1) % lp.len()];
                        let q = nearest_point_segment(p, a, b);
                        let d = p.dist(q);
                        if d < best.0 {
                            best = (d, q);
                        }
                    }
                }
                best.1
            }
            Kind::CrookedEgg {
                hole_center,
                hole_radius,
                ..
            } => {
                if p.dist_sq(*hole_center) < hole_radius * hole_radius {
                    // inside the hole: push radially onto the hole circle
                    let dir = p - *hole_center;
                    let n = dir.norm();
                    let dir = if n < 1e-300 { Point2::new(1.0, 0.0) } else { dir * (1.0 / n) };
                    *hole_center + dir * (hole_radius * (1.0 + 1e-12))
                } else {
                    // outside the egg: nearest curve point, pulled inward
                    // (the region is star-shaped about the origin)
                    self.egg_nearest(p).0 * (1.0 - 1e-12)
                }
            }
            Kind::Implicit { geom, .. } => {
                // damped descent on the interpolated signed distance, then
                // bisection along the segment to the last inside iterate
                let mut q = p;
                let mut inside: Option<Point2> = None;
                for _ in 0..60 {
                    let s = self.implicit_sdf(q);
                    if s <= 0.0 {
                        inside = Some(q);
                        break;
                    }
                    let h = geom.cell * 1e-3;
                    let gx = (self.implicit_sdf(Point2::new(q.x + h, q.y))
                        - self.implicit_sdf(Point2::new(q.x - h, q.y)))
                        / (2.0 * h);
                    let gy = (self.implicit_sdf(Point2::new(q.x, q.y + h))
                        - self.implicit_sdf(Point2::new(q.x, q.y - h)))
                        / (2.0 * h);
                    let g2 = gx * gx + gy * gy;
                    if g2 < 1e-18 {
                        break;
                    }
                    q = Point2::new(q.x - 0.9 * s * gx / g2, q.y - 0.9 * s * gy / g2);
                }
                let inner = inside.unwrap_or(self.anchor);
                let mut lo = inner; // inside
                let mut hi = p; // outside
                for _ in 0..80 {
                    let mid = (lo + hi) * 0.5;
                    if self.contains(mid) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                lo
            }
        };
        // The constructions above land on (or just inside) the boundary;
        // walk toward the interior anchor if rounding left us outside.
        let mut q = q;
        let mut tries = 0;
        while !self.contains(q) {
            tries += 1;
            if tries > 100 {
                return Err(DomainError::ProjectionDidNotConverge(100));
            }
            let pull = 1e-12 * (1 << tries.min(30)) as f64;
            q = q + (self.anchor - q) * pull.min(0.5);
        }
        Ok(q)
    }

    /// Evenly spread boundary points (by parameter, per boundary loop).
    pub fn boundary_points(&self, n: usize) -> Vec<Point2> {
        let n = n.max(8);
        match &self.kind {
            Kind::Disk { center, radius } => (0..n)
                .map(|k| {
                    let t = k as f64 / n as f64 * 2.0 * PI;
                    Point2::new(center.x + radius * t.cos(), center.y + radius * t.sin())
                })
                .collect(),
            Kind::Rectangle { min, max } => {
                let per = [
                    (Point2::new(min.x, min.y), Point2::new(max.x, min.y)),
                    (Point2::new(max.x, min.y), Point2::new(max.x, max.y)),
                    (Point2::new(max.x, max.y), Point2::new(min.x, max.y)),
                    (Point2::new(min.x, max.y), Point2::new(min.x, min.y)),
                ];
                let total: f64 = per.iter().map(|(a, b)| a.dist(*b)).sum();
                let mut out = Vec::with_capacity(n);
                for (a, b) in per {
                    let m = ((a.dist(b) / total) * n as f64).round().max(1.0) as usize;
                    for k in 0..m {
                        out.push(a + (b - a) * (k as f64 / m as f64));
                    }
                }
                out
            }
            Kind::Polygon { loops } => {
                let total: f64 = loops
                    .iter()
                    .map(|lp| {
                        lp.iter()
                            .enumerate()
                            .map(|(k, &a)| a.dist(lp[(k + 1) % lp.len()]))
                            .sum::<f64>()
                    })
                    .sum();
                let mut out = Vec::with_capacity(n);
                for lp in loops {
                    for (k, &a) in lp.iter().enumerate() {
                        let b = lp[(k + 1) % lp.len()];
                        let m = ((a.dist(b) / total) * n as f64).round().max(1.0) as usize;
                        for t in 0..m {
                            out.push(a + (b - a) * (t as f64 / m as f64));
                        }
                    }
                }
                out
            }
            Kind::CrookedEgg {
                hole_center,
                hole_radius,
                ..
            } => {
                // split the budget by boundary length between curve and hole
                let curve_len: f64 = {
                    let mut acc = 0.0;
                    let mut prev = egg_point(-FRAC_PI_4);
                    for k in 1..=512 {
                        let t = -FRAC_PI_4 + k as f64 / 512.0 * PI;
                        let q = egg_point(t);
                        acc += prev.dist(q);
                        prev = q;
                    }
                    acc
                };
                let hole_len = 2.0 * PI * hole_radius;
                let n_curve = ((curve_len / (curve_len + hole_len)) * n as f64).round() as usize;
                let n_hole = n.saturating_sub(n_curve).max(8);
                let mut out: Vec<Point2> = (0..n_curve.max(8))
                    .map(|k| egg_point(-FRAC_PI_4 + k as f64 / n_curve.max(8) as f64 * PI))
                    .collect();
                out.extend((0..n_hole).map(|k| {
                    let t = k as f64 / n_hole as f64 * 2.0 * PI;
                    Point2::new(
                        hole_center.x + hole_radius * t.cos(),
                        hole_center.y + hole_radius * t.sin(),
                    )
                }));
                out
            }
            Kind::Implicit { geom, .. } => {
                // sign flips along grid lines, bisected onto the level set
                let mut out = Vec::new();
                let step = ((geom.width * geom.height) as f64 / n as f64)
                    .sqrt()
                    .max(1.0) as usize;
                for j in (0..geom.height).step_by(step.max(1)) {
                    for i in 0..geom.width - 1 {
                        let a = geom.center(i, j);
                        let b = geom.center(i + 1, j);
                        if (self.implicit_sdf(a) <= 0.0) != (self.implicit_sdf(b) <= 0.0) {
                            out.push(bisect_boundary(self, a, b));
                        }
                    }
                }
                for i in (0..geom.width).step_by(step.max(1)) {
                    for j in 0..geom.height - 1 {
                        let a = geom.center(i, j);
                        let b = geom.center(i, j + 1);
                        if (self.implicit_sdf(a) <= 0.0) != (self.implicit_sdf(b) <= 0.0) {
                            out.push(bisect_boundary(self, a, b));
                        }
                    }
                }
                out
            }
        }
    }

    /// Boundary probes with inward normals from central differences of the
    /// signed distance (step 1e-6).
    pub fn boundary_probes(&self, n: usize) -> Vec<BoundaryProbe> {
        self.boundary_points(n)
            .into_iter()
            .map(|p| {
                let h = 1e-6;
                let gx = (self.signed_distance(Point2::new(p.x + h, p.y))
                    - self.signed_distance(Point2::new(p.x - h, p.y)))
                    / (2.0 * h);
                let gy = (self.signed_distance(Point2::new(p.x, p.y + h))
                    - self.signed_distance(Point2::new(p.x, p.y - h)))
                    / (2.0 * h);
                let g = Point2::new(gx, gy);
                let norm = g.norm();
                let inward = if norm > 1e-12 { -g * (1.0 / norm) } else { Point2::new(0.0, 0.0) };
                BoundaryProbe {
                    point: p,
                    inward_normal: inward,
                    distance_error: self.signed_distance(p).abs(),
                }
            })
            .collect()
    }

    /// Rasterize membership at cell centers.
    pub fn rasterize(&self, cell: f64) -> Result<GridMask, DomainError> {
        let side = self.bbox.width().min(self.bbox.height());
        if !(cell > 0.0) || cell > side {
            return Err(DomainError::CellSizeTooLarge { cell, side });
        }
        let geom = GridGeom::covering(self.bbox, cell);
        Ok(GridMask::from_predicate(geom, |p| self.contains(p)))
    }

    /// Rasterize membership on an externally fixed grid (so masks from
    /// different sources stay comparable).
    pub fn rasterize_on(&self, geom: GridGeom) -> GridMask {
        GridMask::from_predicate(geom, |p| self.contains(p))
    }

    /// Numeric probe of the inner/outer rolling conditions at radius `r`.
    ///
    /// For each boundary probe, a disk of radius `r` tangent from inside
    /// (resp. outside) is membership-sampled on rings scaled by 0.999 to
    /// stay clear of the tangency itself.
    pub fn rolling_diagnostic(&self, r: f64, n_probes: usize) -> RollingReport {
        assert!(n_probes >= 100, "need at least 100 probes");
        assert!(r > 0.0);
        let probes = self.boundary_probes(n_probes);
        let mut inner_ok = 0usize;
        let mut outer_ok = 0usize;
        let shrink = 0.999;
        let tol = 1e-7 * r.max(1.0);
        for probe in &probes {
            if probe.inward_normal.norm() < 0.5 {
                continue;
            }
            let cin = probe.point + probe.inward_normal * r;
            let cout = probe.point - probe.inward_normal * r;
            let mut ok_in = true;
            let mut ok_out = true;
            for ring in [0.25, 0.5, 0.75, 1.0] {
                let rr = r * ring * shrink;
                for a in 0..16 {
                    let t = a as f64 / 16.0 * 2.0 * PI;
                    let off = Point2::new(rr * t.cos(), rr * t.sin());
                    if ok_in && !self.contains(cin + off) {
                        ok_in = false;
                    }
                    if ok_out {
                        let q = cout + off;
                        // closure(Sᶜ) membership: outside, or within tol of ∂S
                        if self.contains(q) && self.signed_distance(q) < -tol {
                            ok_out = false;
                        }
                    }
                }
                if !ok_in && !ok_out {
                    break;
                }
            }
            if ok_in && self.contains(cin) {
                inner_ok += 1;
            }
            if ok_out {
                outer_ok += 1;
            }
        }
        let n = probes.len().max(1) as f64;
        RollingReport {
            inner_ok_fraction: inner_ok as f64 / n,
            outer_ok_fraction: outer_ok as f64 / n,
            probes: probes.len(),
        }
    }

    /// Deepest cell center of a coarse rasterization; used as an interior
    /// anchor for projections and default simulation starts.
    fn deep_interior_point(&self, res: usize) -> Result<Point2, DomainError> {
        let cell = self.bbox.width().max(self.bbox.height()) / res as f64;
        let geom = GridGeom::covering(self.bbox, cell);
        let mask = GridMask::from_predicate(geom, |p| self.contains(p));
        if mask.count() == 0 {
            return Err(DomainError::DisconnectedInterior(res));
        }
        // distance to the complement: invert, then EDT
        let inv = GridMask {
            geom: mask.geom,
            bits: mask.bits.iter().map(|&b| !b).collect(),
        };
        let d2 = if inv.count() == 0 {
            vec![1.0; mask.geom.len()]
        } else {
            inv.distance_sq_cells()
        };
        let mut best = (0.0f64, 0usize);
        for (k, &b) in mask.bits.iter().enumerate() {
            if b && d2[k] > best.0 {
                best = (d2[k], k);
            }
        }
        Ok(geom.center(best.1 % geom.width, best.1 / geom.width))
    }

    /// Flood-fill connectivity check of the rasterized interior.
    pub fn validate_connected(&self, res: usize) -> Result<(), DomainError> {
        let cell = self.bbox.width().max(self.bbox.height()) / res as f64;
        let geom = GridGeom::covering(self.bbox, cell);
        let mask = GridMask::from_predicate(geom, |p| self.contains(p));
        if mask.count() == 0 || mask.component_count() != 1 {
            return Err(DomainError::DisconnectedInterior(res));
        }
        Ok(())
    }
}

fn bisect_boundary(domain: &Domain, inside_hint: Point2, outside_hint: Point2) -> Point2 {
    let (mut lo, mut hi) = if domain.contains(inside_hint) {
        (inside_hint, outside_hint)
    } else {
        (outside_hint, inside_hint)
    };
    for _ in 0..40 {
        let mid = (lo + hi) * 0.5;
        if domain.contains(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) * 0.5
}

fn nearest_point_segment(p: Point2, a: Point2, b: Point2) -> Point2 {
    let ab = b - a;
    let len2 = ab.norm_sq();
    if len2 < 1e-300 {
        return a;
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    a + ab * t
}

fn dist_point_segment(p: Point2, a: Point2, b: Point2) -> f64 {
    p.dist(nearest_point_segment(p, a, b))
}

fn point_on_segment(p: Point2, a: Point2, b: Point2) -> bool {
    dist_point_segment(p, a, b) <= 1e-12
}
