//! Union of equal-radius closed balls around sample points, with the exact
//! arc-decomposed boundary and area.
//!
//! For every disk, the angular intervals of its circle covered by other
//! disks are merged; what remains are boundary arcs of the union. Each
//! boundary arc traversed counter-clockwise around its own disk keeps the
//! region on the left, so Green's theorem over all arcs gives the exact
//! area, holes included.

use std::f64::consts::{PI, TAU};

use crate::geom::grid_index::GridIndex;
use crate::geom::{normalize_angle, Arc2, Orientation, Point2};

use super::{arc_green_area, EstimatorError};

/// Boundary arc of the union: a sub-arc of disk `disk`.
#[derive(Debug, Clone, Copy)]
pub struct SausageArc {
    pub disk: usize,
    /// start angle on the disk circle, in [0, 2π)
    pub theta_start: f64,
    /// positive CCW sweep in (0, 2π]
    pub sweep: f64,
}

impl SausageArc {
    pub fn to_arc(&self, centers: &[Point2], eps: f64) -> Arc2 {
        Arc2::new(
            centers[self.disk],
            eps,
            self.theta_start,
            normalize_angle(self.theta_start + self.sweep),
            Orientation::Ccw,
        )
    }

    pub fn endpoints(&self, centers: &[Point2], eps: f64) -> (Point2, Point2) {
        let c = centers[self.disk];
        let at = |t: f64| Point2::new(c.x + eps * t.cos(), c.y + eps * t.sin());
        (at(self.theta_start), at(self.theta_start + self.sweep))
    }
}

/// The sausage estimator `B(points, eps)`.
#[derive(Debug, Clone)]
pub struct UnionOfBalls {
    pub centers: Vec<Point2>,
    pub eps: f64,
    pub arcs: Vec<SausageArc>,
    pub area: f64,
    index: GridIndex<f64>,
}

impl UnionOfBalls {
    /// Closed-ball membership.
    pub fn contains(&self, p: Point2) -> bool {
        self.index.any_within(p, self.eps)
    }

    /// Total boundary length.
    pub fn boundary_length(&self) -> f64 {
        self.arcs.iter().map(|a| a.sweep * self.eps).sum()
    }

    /// Number of connected components of the union.
    pub fn component_count(&self) -> usize {
        component_count(&self.centers, self.eps, &self.index)
    }

    /// Boundary loops as chains of arcs (endpoint-matched within 1e-9).
    pub fn boundary_loops(&self) -> Vec<Vec<Arc2>> {
        let scale = self.eps.max(1e-12);
        let key = |p: Point2| -> (i64, i64) {
            (
                (p.x / (1e-9 * scale)).round() as i64,
                (p.y / (1e-9 * scale)).round() as i64,
            )
        };
        let mut by_start: std::collections::HashMap<(i64, i64), Vec<usize>> =
            std::collections::HashMap::new();
        for (i, a) in self.arcs.iter().enumerate() {
            by_start
                .entry(key(a.endpoints(&self.centers, self.eps).0))
                .or_default()
                .push(i);
        }
        let mut used = vec![false; self.arcs.len()];
        let mut loops = Vec::new();
        for start in 0..self.arcs.len() {
            if used[start] {
                continue;
            }
            let mut chain = Vec::new();
            let mut cur = start;
            loop {
                used[cur] = true;
                chain.push(self.arcs[cur].to_arc(&self.centers, self.eps));
                let end = self.arcs[cur].endpoints(&self.centers, self.eps).1;
                let Some(cands) = by_start.get(&key(end)) else {
                    break;
                };
                let Some(&next) = cands.iter().find(|&&i| !used[i]) else {
                    break;
                };
                cur = next;
            }
            loops.push(chain);
        }
        loops
    }
}

/// Build the sausage estimator around `points` with radius `eps`.
pub fn sausage(points: &[Point2], eps: f64) -> Result<UnionOfBalls, EstimatorError> {
    if points.is_empty() {
        return Err(EstimatorError::TooFewPoints { needed: 1, got: 0 });
    }
    assert!(eps > 0.0 && eps.is_finite(), "eps must be positive");

    // Exact duplicate centers contribute nothing; drop them so the angular
    // sweep sees each circle once.
    let mut centers: Vec<Point2> = Vec::with_capacity(points.len());
    {
        let mut seen = std::collections::HashSet::new();
        for p in points {
            assert!(p.is_finite());
            if seen.insert((p.x.to_bits(), p.y.to_bits())) {
                centers.push(*p);
            }
        }
    }

    let index = GridIndex::build_with_cell(
        &centers,
        suitable_cell(&centers, eps),
    )
    .expect("nonempty");

    let mut arcs: Vec<SausageArc> = Vec::new();
    let mut area = 0.0;
    for (i, &c) in centers.iter().enumerate() {
        // angular intervals of ∂B(c, eps) covered by other disks
        let mut covered: Vec<(f64, f64)> = Vec::new(); // (start, end) CCW, may wrap
        let mut swallowed = false;
        for j in index.within(c, 2.0 * eps) {
            if j == i {
                continue;
            }
            let d = c.dist(centers[j]);
            if d < 1e-15 {
                // coincident circle: the lower-index copy owns the boundary
                if j < i {
                    swallowed = true;
                    break;
                }
                continue;
            }
            if d >= 2.0 * eps {
                continue; // tangent or farther: open coverage is empty
            }
            let mid = (centers[j] - c).angle();
            let half = (d / (2.0 * eps)).clamp(-1.0, 1.0).acos();
            covered.push((mid - half, mid + half));
        }
        if swallowed {
            continue;
        }
        let uncovered = complement_on_circle(&covered);
        for &(start, sweep) in &uncovered {
            if sweep >= TAU - 1e-15 {
                // free circle: two semicircle arcs
                arcs.push(SausageArc {
                    disk: i,
                    theta_start: normalize_angle(start),
                    sweep: PI,
                });
                arcs.push(SausageArc {
                    disk: i,
                    theta_start: normalize_angle(start + PI),
                    sweep: PI,
                });
            } else if sweep > 0.0 {
                arcs.push(SausageArc {
                    disk: i,
                    theta_start: normalize_angle(start),
                    sweep,
                });
            }
        }
        for &(start, sweep) in &uncovered {
            area += arc_green_area(c, eps, start, sweep);
        }
    }

    Ok(UnionOfBalls {
        centers,
        eps,
        arcs,
        area,
        index,
    })
}

fn suitable_cell(centers: &[Point2], eps: f64) -> f64 {
    let bb = crate::geom::BBox2::of_points(centers).unwrap();
    let extent = bb.width().max(bb.height()).max(1e-12);
    // keep the grid between "one point per cell" and "few cells per eps"
    let by_count = extent / (centers.len() as f64).sqrt().ceil().max(1.0);
    by_count.max(extent / 2048.0).max(eps / 8.0)
}

/// Complement of a set of (possibly wrapping) closed angular intervals on
/// the circle, as (start, positive sweep) pairs. No intervals → the full
/// circle, reported as (0, 2π).
fn complement_on_circle(covered: &[(f64, f64)]) -> Vec<(f64, f64)> {
    if covered.is_empty() {
        return vec![(0.0, TAU)];
    }
    // normalize into [0, 2π), splitting wrapped intervals
    let mut ivals: Vec<(f64, f64)> = Vec::with_capacity(covered.len() + 1);
    for &(a, b) in covered {
        debug_assert!(b > a && b - a < TAU);
        let a_n = normalize_angle(a);
        let b_n = a_n + (b - a);
        if b_n <= TAU {
            ivals.push((a_n, b_n));
        } else {
            ivals.push((a_n, TAU));
            ivals.push((0.0, b_n - TAU));
        }
    }
    ivals.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    // merge
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(ivals.len());
    for iv in ivals {
        match merged.last_mut() {
            Some(last) if iv.0 <= last.1 => last.1 = last.1.max(iv.1),
            _ => merged.push(iv),
        }
    }
    if merged.len() == 1 && merged[0].0 <= 0.0 && merged[0].1 >= TAU {
        return Vec::new();
    }
    // complement, wrapping the tail gap
    let mut out = Vec::with_capacity(merged.len());
    for k in 0..merged.len() {
        let end = merged[k].1;
        let next_start = if k + 1 < merged.len() {
            merged[k + 1].0
        } else {
            merged[0].0 + TAU
        };
        if next_start > end {
            out.push((end, next_start - end));
        }
    }
    if out.is_empty() && merged[0].0 > 0.0 {
        // single covered interval strictly inside [0, 2π)
        out.push((merged[0].1, merged[0].0 + TAU - merged[0].1));
    }
    out
}

fn component_count(centers: &[Point2], eps: f64, index: &GridIndex<f64>) -> usize {
    let n = centers.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, &c) in centers.iter().enumerate() {
        for j in index.within(c, 2.0 * eps) {
            if j != i {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut roots = std::collections::HashSet::new();
    for i in 0..n {
        roots.insert(find(&mut parent, i));
    }
    roots.len()
}

/// True iff the intersection graph of the closed disks (edge when the
/// center distance is at most `2·eps`, tangency included) is connected.
pub fn is_connected(u: &UnionOfBalls) -> bool {
    u.component_count() == 1
}
