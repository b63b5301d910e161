//! Deterministic SVG and GeoJSON export of domains, trajectories and
//! estimator boundaries. Arcs go to SVG as true elliptical-arc commands
//! with equal radii; GeoJSON gets them flattened at a chord tolerance.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use crate::domains::Domain;
use crate::estimators::{AlphaHull, BoundaryPiece, UnionOfBalls};
use crate::geom::{Arc2, BBox2, Orientation, Point2};
use crate::sim::{OccupancyHistogram, Trajectory};

/// Default chord tolerance for GeoJSON arc flattening (domain units).
pub const GEOJSON_CHORD_TOL: f64 = 1e-4;

/// Stroke/fill choices for the SVG scene.
#[derive(Debug, Clone)]
pub struct SvgStyle {
    pub domain_fill: String,
    pub trajectory_stroke: String,
    pub boundary_stroke: String,
    pub stroke_width_frac: f64,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle {
            domain_fill: "#d9d9d9".into(),
            trajectory_stroke: "#3366cc".into(),
            boundary_stroke: "#cc2222".into(),
            stroke_width_frac: 0.002,
        }
    }
}

/// Composable SVG scene in domain coordinates (y up).
pub struct SvgScene {
    bbox: BBox2,
    style: SvgStyle,
    elements: Vec<String>,
}

fn fmt_coord(v: f64) -> String {
    format!("{v:.6}")
}

impl SvgScene {
    pub fn new(bbox: BBox2) -> SvgScene {
        SvgScene {
            bbox: bbox.inflate(0.03 * bbox.width().max(bbox.height()).max(1e-9)),
            style: SvgStyle::default(),
            elements: Vec::new(),
        }
    }

    pub fn with_style(mut self, style: SvgStyle) -> Self {
        self.style = style;
        self
    }

    fn map(&self, p: Point2) -> (f64, f64) {
        (p.x - self.bbox.min.x, self.bbox.max.y - p.y)
    }

    fn stroke_width(&self) -> f64 {
        self.style.stroke_width_frac * self.bbox.width().max(self.bbox.height())
    }

    pub fn add_domain(&mut self, domain: &Domain) {
        let outline = domain.boundary_points(720);
        if outline.is_empty() {
            return;
        }
        // the boundary sampler emits loops back to back; split on jumps
        let mut d = String::new();
        let mut prev: Option<Point2> = None;
        let jump = 0.15 * self.bbox.width().max(self.bbox.height());
        for &p in &outline {
            let (x, y) = self.map(p);
            let cmd = match prev {
                Some(q) if p.dist(q) < jump => 'L',
                _ => 'M',
            };
            let _ = write!(d, "{cmd}{} {} ", fmt_coord(x), fmt_coord(y));
            prev = Some(p);
        }
        d.push('Z');
        self.elements.push(format!(
            r#"<path d="{d}" fill="{}" fill-rule="evenodd" stroke="none"/>"#,
            self.style.domain_fill
        ));
    }

    pub fn add_trajectory(&mut self, traj: &Trajectory) {
        if traj.points.is_empty() {
            return;
        }
        let mut pts = String::new();
        for p in &traj.points {
            let (x, y) = self.map(*p);
            let _ = write!(pts, "{},{} ", fmt_coord(x), fmt_coord(y));
        }
        self.elements.push(format!(
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="{}"/>"#,
            pts.trim_end(),
            self.style.trajectory_stroke,
            fmt_coord(self.stroke_width() * 0.5)
        ));
    }

    fn arc_path(&self, arcs: &[Arc2]) -> String {
        let mut d = String::new();
        let mut cursor: Option<Point2> = None;
        for a in arcs {
            let (from, to, sweep) = match a.orientation {
                Orientation::Ccw => (a.start_point(), a.end_point(), a.span()),
                Orientation::Cw => (a.start_point(), a.end_point(), a.span()),
            };
            let (fx, fy) = self.map(from);
            let (tx, ty) = self.map(to);
            let needs_move = match cursor {
                Some(c) => c.dist(from) > 1e-9 * self.bbox.width().max(1.0),
                None => true,
            };
            if needs_move {
                let _ = write!(d, "M{} {} ", fmt_coord(fx), fmt_coord(fy));
            }
            let large = if sweep > PI { 1 } else { 0 };
            // y-flip reverses the turning sense: math-ccw renders as svg
            // sweep 0, math-cw as sweep 1
            let svg_sweep = match a.orientation {
                Orientation::Ccw => 0,
                Orientation::Cw => 1,
            };
            let _ = write!(
                d,
                "A{r} {r} 0 {large} {svg_sweep} {} {} ",
                fmt_coord(tx),
                fmt_coord(ty),
                r = fmt_coord(a.radius),
            );
            cursor = Some(to);
        }
        d.trim_end().to_string()
    }

    pub fn add_union_boundary(&mut self, u: &UnionOfBalls) {
        for chain in u.boundary_loops() {
            let d = self.arc_path(&chain);
            if !d.is_empty() {
                self.elements.push(format!(
                    r#"<path d="{d}" fill="none" stroke="{}" stroke-width="{}"/>"#,
                    self.style.boundary_stroke,
                    fmt_coord(self.stroke_width())
                ));
            }
        }
    }

    pub fn add_hull_boundary(&mut self, hull: &AlphaHull) {
        for lp in &hull.boundary_loops {
            let arcs: Vec<Arc2> = lp
                .pieces
                .iter()
                .filter_map(|p| match p {
                    BoundaryPiece::Arc(a) => Some(*a),
                    BoundaryPiece::Segment(..) => None,
                })
                .collect();
            let d = self.arc_path(&arcs);
            if !d.is_empty() {
                self.elements.push(format!(
                    r#"<path d="{d}" fill="none" stroke="{}" stroke-width="{}"/>"#,
                    self.style.boundary_stroke,
                    fmt_coord(self.stroke_width())
                ));
            }
        }
        for p in &hull.isolated_points {
            let (x, y) = self.map(*p);
            self.elements.push(format!(
                r#"<circle cx="{}" cy="{}" r="{}" fill="{}"/>"#,
                fmt_coord(x),
                fmt_coord(y),
                fmt_coord(self.stroke_width()),
                self.style.boundary_stroke
            ));
        }
    }

    /// Occupancy heat map: one rect per visited cell, opacity scaled to
    /// the maximum count.
    pub fn add_heatmap(&mut self, occ: &OccupancyHistogram) {
        let max = occ.counts.iter().copied().max().unwrap_or(0);
        if max == 0 {
            return;
        }
        for j in 0..occ.geom.height {
            for i in 0..occ.geom.width {
                let c = occ.counts[j * occ.geom.width + i];
                if c == 0 {
                    continue;
                }
                let center = occ.geom.center(i, j);
                let (x, y) = self.map(Point2::new(
                    center.x - 0.5 * occ.geom.cell,
                    center.y + 0.5 * occ.geom.cell,
                ));
                self.elements.push(format!(
                    r##"<rect x="{}" y="{}" width="{w}" height="{w}" fill="#205090" fill-opacity="{:.4}"/>"##,
                    fmt_coord(x),
                    fmt_coord(y),
                    c as f64 / max as f64,
                    w = fmt_coord(occ.geom.cell),
                ));
            }
        }
    }

    pub fn to_svg(&self) -> String {
        let w = self.bbox.width();
        let h = self.bbox.height();
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {} {}" width="640" height="{:.0}">"#,
            fmt_coord(w),
            fmt_coord(h),
            640.0 * h / w
        );
        for e in &self.elements {
            let _ = writeln!(out, "  {e}");
        }
        out.push_str("</svg>\n");
        out
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        fs::write(path, self.to_svg())
    }
}

/// Flatten an arc into chords with sagitta below `tol`.
pub fn flatten_arc(a: &Arc2, tol: f64) -> Vec<Point2> {
    let span = a.span();
    let max_step = 2.0 * (1.0 - (tol / a.radius).min(1.0)).clamp(-1.0, 1.0).acos();
    let n = if max_step > 1e-9 {
        (span / max_step).ceil().max(1.0) as usize
    } else {
        1
    };
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let t = k as f64 / n as f64;
        let theta = match a.orientation {
            Orientation::Ccw => a.start_angle + span * t,
            Orientation::Cw => a.start_angle - span * t,
        };
        out.push(a.point_at_angle(theta));
    }
    out
}

fn ring_from_arcs(arcs: &[Arc2], tol: f64) -> Vec<[f64; 2]> {
    let mut ring: Vec<[f64; 2]> = Vec::new();
    for a in arcs {
        let pts = flatten_arc(a, tol);
        let skip = usize::from(!ring.is_empty());
        for p in pts.into_iter().skip(skip) {
            ring.push([p.x, p.y]);
        }
    }
    if let (Some(&first), Some(&last)) = (ring.first(), ring.last()) {
        if first != last {
            ring.push(first);
        }
    }
    ring
}

/// GeoJSON FeatureCollection for a hull boundary (arcs flattened).
pub fn geojson_hull(hull: &AlphaHull, tol: f64) -> Value {
    let mut features = Vec::new();
    for lp in &hull.boundary_loops {
        let arcs: Vec<Arc2> = lp
            .pieces
            .iter()
            .filter_map(|p| match p {
                BoundaryPiece::Arc(a) => Some(*a),
                BoundaryPiece::Segment(..) => None,
            })
            .collect();
        let ring = ring_from_arcs(&arcs, tol);
        if ring.len() >= 4 {
            features.push(json!({
                "type": "Feature",
                "geometry": {"type": "Polygon", "coordinates": [ring]},
                "properties": {"role": "hull_boundary", "r": hull.r}
            }));
        }
    }
    for p in &hull.isolated_points {
        features.push(json!({
            "type": "Feature",
            "geometry": {"type": "Point", "coordinates": [p.x, p.y]},
            "properties": {"role": "isolated_point"}
        }));
    }
    json!({"type": "FeatureCollection", "features": features})
}

/// GeoJSON FeatureCollection for a sausage boundary (arcs flattened).
pub fn geojson_union(u: &UnionOfBalls, tol: f64) -> Value {
    let mut features = Vec::new();
    for chain in u.boundary_loops() {
        let ring = ring_from_arcs(&chain, tol);
        if ring.len() >= 4 {
            features.push(json!({
                "type": "Feature",
                "geometry": {"type": "Polygon", "coordinates": [ring]},
                "properties": {"role": "sausage_boundary", "eps": u.eps}
            }));
        }
    }
    json!({"type": "FeatureCollection", "features": features})
}

/// GeoJSON LineString for a trajectory.
pub fn geojson_trajectory(traj: &Trajectory) -> Value {
    let coords: Vec<[f64; 2]> = traj.points.iter().map(|p| [p.x, p.y]).collect();
    json!({
        "type": "FeatureCollection",
        "features": [{
            "type": "Feature",
            "geometry": {"type": "LineString", "coordinates": coords},
            "properties": {"role": "trajectory", "h": traj.h}
        }]
    })
}
