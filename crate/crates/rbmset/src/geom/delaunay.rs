//! Incremental Bowyer–Watson Delaunay triangulation.
//!
//! Points closer than `MERGE_TOL` are merged before insertion. Cocircular
//! ties are resolved symbolically: on an exact zero of the in-circle
//! determinant the query point counts as "inside" iff it precedes every
//! triangle vertex lexicographically (x, then y), which makes the result
//! independent of the insertion order for cocircular quads.

use std::collections::HashMap;

use super::predicates::{incircle, orient2d, Sign};
use super::{GeomError, Point};
use crate::num::Real;

/// Merge tolerance for duplicate input points.
pub const MERGE_TOL: f64 = 1e-12;

/// A Delaunay triangulation over the merged input points.
#[derive(Debug, Clone)]
pub struct Triangulation<F> {
    /// Merged vertices, in first-occurrence order of the input.
    pub vertices: Vec<Point<F>>,
    /// For each input point, the index of its merged representative.
    pub vertex_of_input: Vec<usize>,
    /// Vertex index triples, counter-clockwise.
    pub triangles: Vec<[usize; 3]>,
    /// `adjacency[t][i]` is the triangle sharing the edge opposite
    /// `triangles[t][i]`, if any.
    pub adjacency: Vec<[Option<usize>; 3]>,
}

impl<F: Real> Triangulation<F> {
    /// Undirected edges (a < b) of the triangulation.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.triangles.len() * 3 / 2 + 3);
        for t in &self.triangles {
            for k in 0..3 {
                let a = t[k];
                let b = t[(k + 1) % 3];
                if a < b {
                    out.push((a, b));
                } else {
                    out.push((b, a));
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Merge points within `MERGE_TOL` (Euclidean), keeping first occurrences.
pub(crate) fn merge_duplicates<F: Real>(points: &[Point<F>]) -> (Vec<Point<F>>, Vec<usize>) {
    let tol = MERGE_TOL;
    let inv = 1.0 / tol;
    let mut reps: Vec<Point<F>> = Vec::with_capacity(points.len());
    let mut map: Vec<usize> = Vec::with_capacity(points.len());
    let mut cells: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for p in points {
        assert!(p.is_finite(), "point coordinates must be finite");
        let cx = (p.x.as_f64() * inv).floor() as i64;
        let cy = (p.y.as_f64() * inv).floor() as i64;
        let mut found = None;
        'search: for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = cells.get(&(cx + dx, cy + dy)) {
                    for &id in ids {
                        if reps[id].dist(*p).as_f64() <= tol {
                            found = Some(id);
                            break 'search;
                        }
                    }
                }
            }
        }
        match found {
            Some(id) => map.push(id),
            None => {
                let id = reps.len();
                reps.push(*p);
                cells.entry((cx, cy)).or_default().push(id);
                map.push(id);
            }
        }
    }
    (reps, map)
}

struct Builder<F> {
    verts: Vec<Point<F>>,
    tris: Vec<[usize; 3]>,
    neighbors: Vec<[Option<usize>; 3]>,
    alive: Vec<bool>,
    last_alive: usize,
    n_real: usize,
}

impl<F: Real> Builder<F> {
    fn new(reps: &[Point<F>]) -> Self {
        let n = reps.len();
        let bb = super::BBox::of_points(reps).expect("nonempty");
        let cx = (bb.min.x + bb.max.x) / F::of(2.0);
        let cy = (bb.min.y + bb.max.y) / F::of(2.0);
        let scale = bb.width().max(bb.height()).max(F::of(1.0)) * F::of(1e6);
        let mut verts = reps.to_vec();
        // Super-triangle vertices, far enough that every circumcircle of a
        // super triangle behaves like a half-plane for the data.
        verts.push(Point::new(cx - scale, cy - scale * F::of(0.7)));
        verts.push(Point::new(cx + scale, cy - scale * F::of(0.7)));
        verts.push(Point::new(cx, cy + scale * F::of(1.4)));
        let tris = vec![[n, n + 1, n + 2]];
        Builder {
            verts,
            tris,
            neighbors: vec![[None; 3]],
            alive: vec![true],
            last_alive: 0,
            n_real: n,
        }
    }

    fn locate(&self, p: Point<F>) -> usize {
        let mut t = self.last_alive;
        let mut steps = 0usize;
        let max_steps = self.tris.len() + 4;
        loop {
            let [a, b, c] = self.tris[t];
            let va = self.verts[a];
            let vb = self.verts[b];
            let vc = self.verts[c];
            let mut moved = false;
            for (i, (u, v)) in [(a, b), (b, c), (c, a)].into_iter().enumerate() {
                let _ = (u, v);
                let (pu, pv) = match i {
                    0 => (va, vb),
                    1 => (vb, vc),
                    _ => (vc, va),
                };
                if orient2d(pu, pv, p) == Sign::Negative {
                    // neighbor across edge (u, v) is opposite the third vertex
                    let opp = match i {
                        0 => 2,
                        1 => 0,
                        _ => 1,
                    };
                    if let Some(nb) = self.neighbors[t][opp] {
                        t = nb;
                        moved = true;
                        break;
                    }
                }
            }
            if !moved {
                return t;
            }
            steps += 1;
            if steps > max_steps {
                // Degenerate walk cycle; fall back to a scan.
                return (0..self.tris.len())
                    .find(|&i| self.alive[i] && self.contains(i, p))
                    .unwrap_or(t);
            }
        }
    }

    fn contains(&self, t: usize, p: Point<F>) -> bool {
        let [a, b, c] = self.tris[t];
        orient2d(self.verts[a], self.verts[b], p) != Sign::Negative
            && orient2d(self.verts[b], self.verts[c], p) != Sign::Negative
            && orient2d(self.verts[c], self.verts[a], p) != Sign::Negative
    }

    fn in_circumcircle(&self, t: usize, p: Point<F>) -> bool {
        let [a, b, c] = self.tris[t];
        match incircle(self.verts[a], self.verts[b], self.verts[c], p) {
            Sign::Positive => true,
            Sign::Negative => false,
            Sign::Zero => {
                // Symbolic tie-break among real vertices only.
                let mut lo: Option<Point<F>> = None;
                for &v in &[a, b, c] {
                    if v < self.n_real {
                        let q = self.verts[v];
                        lo = Some(match lo {
                            None => q,
                            Some(cur) => {
                                if q.lex_cmp(cur) == std::cmp::Ordering::Less {
                                    q
                                } else {
                                    cur
                                }
                            }
                        });
                    }
                }
                match lo {
                    Some(cur) => p.lex_cmp(cur) == std::cmp::Ordering::Less,
                    None => false,
                }
            }
        }
    }

    fn insert(&mut self, pi: usize) {
        let p = self.verts[pi];
        let seed = self.locate(p);

        // Grow the cavity of triangles whose circumcircle contains p.
        let mut cavity = Vec::new();
        let mut in_cavity = HashMap::new();
        let mut stack = vec![seed];
        while let Some(t) = stack.pop() {
            if in_cavity.contains_key(&t) || !self.alive[t] {
                continue;
            }
            if !self.in_circumcircle(t, p) {
                continue;
            }
            in_cavity.insert(t, true);
            cavity.push(t);
            for nb in self.neighbors[t].into_iter().flatten() {
                stack.push(nb);
            }
        }
        debug_assert!(!cavity.is_empty(), "located triangle must be in cavity");

        // Boundary edges of the cavity, CCW as seen from inside.
        let mut boundary: Vec<(usize, usize, Option<usize>)> = Vec::new();
        for &t in &cavity {
            let [a, b, c] = self.tris[t];
            for (i, (u, v)) in [(b, c), (c, a), (a, b)].into_iter().enumerate() {
                let nb = self.neighbors[t][i];
                let outside = match nb {
                    Some(x) => !in_cavity.contains_key(&x),
                    None => true,
                };
                if outside {
                    boundary.push((u, v, nb));
                }
            }
        }
        for &t in &cavity {
            self.alive[t] = false;
        }

        // Fan from p over the boundary edges. In triangle [u, v, p] the
        // edge (v, p) is opposite index 0 and (p, u) is opposite index 1.
        let mut start_map: HashMap<usize, usize> = HashMap::new();
        let mut created = Vec::with_capacity(boundary.len());
        for &(u, v, outer) in &boundary {
            let nt = self.tris.len();
            debug_assert_ne!(
                orient2d(self.verts[u], self.verts[v], p),
                Sign::Negative,
                "cavity boundary must see the new point"
            );
            self.tris.push([u, v, pi]);
            self.neighbors.push([None, None, outer]);
            self.alive.push(true);
            if let Some(o) = outer {
                for k in 0..3 {
                    let (ou, ov) = (self.tris[o][(k + 1) % 3], self.tris[o][(k + 2) % 3]);
                    if (ou, ov) == (v, u) {
                        self.neighbors[o][k] = Some(nt);
                    }
                }
            }
            start_map.insert(u, nt);
            created.push(nt);
        }
        // The boundary is a closed cycle; the fan triangle whose base ends
        // at v shares its (v, p) edge with the one whose base starts at v.
        for &nt in &created {
            let [_, v, _] = self.tris[nt];
            if let Some(&other) = start_map.get(&v) {
                self.neighbors[nt][0] = Some(other);
                self.neighbors[other][1] = Some(nt);
            }
        }
        self.last_alive = *created.last().expect("fan nonempty");
    }

    fn finish(self) -> (Vec<[usize; 3]>, Vec<[Option<usize>; 3]>) {
        let n = self.n_real;
        let mut keep_id = vec![usize::MAX; self.tris.len()];
        let mut tris = Vec::new();
        for (i, t) in self.tris.iter().enumerate() {
            if self.alive[i] && t.iter().all(|&v| v < n) {
                keep_id[i] = tris.len();
                tris.push(*t);
            }
        }
        let mut adj = vec![[None; 3]; tris.len()];
        for (i, t) in self.tris.iter().enumerate() {
            if keep_id[i] == usize::MAX {
                continue;
            }
            let _ = t;
            for k in 0..3 {
                if let Some(nb) = self.neighbors[i][k] {
                    if keep_id[nb] != usize::MAX {
                        adj[keep_id[i]][k] = Some(keep_id[nb]);
                    }
                }
            }
        }
        (tris, adj)
    }
}

/// Delaunay triangulation of a planar point set.
///
/// Duplicates within [`MERGE_TOL`] are merged. Fails with
/// [`GeomError::CollinearInput`] when every merged point is collinear.
pub fn delaunay<F: Real>(points: &[Point<F>]) -> Result<Triangulation<F>, GeomError> {
    if points.len() < 3 {
        return Err(GeomError::TooFewPoints {
            needed: 3,
            got: points.len(),
        });
    }
    let (reps, map) = merge_duplicates(points);
    if reps.len() < 3 {
        if reps.len() <= 1 {
            return Err(GeomError::DegenerateAllCoincident);
        }
        return Err(GeomError::CollinearInput);
    }
    // Reject all-collinear inputs up front (the scaffold would otherwise
    // produce super-triangle slivers only).
    let collinear = {
        let a = reps[0];
        let b = reps
            .iter()
            .copied()
            .find(|p| p.dist(a).as_f64() > MERGE_TOL);
        match b {
            None => true,
            Some(b) => reps.iter().all(|&c| orient2d(a, b, c) == Sign::Zero),
        }
    };
    if collinear {
        return Err(GeomError::CollinearInput);
    }

    let mut builder = Builder::new(&reps);
    for i in 0..reps.len() {
        builder.insert(i);
    }
    let (mut triangles, mut adjacency) = builder.finish();
    canonicalize_cocircular(&reps, &mut triangles, &mut adjacency);
    Ok(Triangulation {
        vertices: reps,
        vertex_of_input: map,
        triangles,
        adjacency,
    })
}

/// Flip exactly-cocircular quads until every such diagonal passes through
/// the lexicographically smallest vertex of its quad. Both diagonals of a
/// cocircular quad are Delaunay; this pins a canonical one so the result
/// does not depend on insertion order.
fn canonicalize_cocircular<F: Real>(
    verts: &[Point<F>],
    tris: &mut [[usize; 3]],
    adj: &mut [[Option<usize>; 3]],
) {
    for _pass in 0..32 {
        let mut flipped = false;
        for t in 0..tris.len() {
            for k in 0..3 {
                let Some(u) = adj[t][k] else { continue };
                if u < t {
                    continue;
                }
                let p = tris[t][(k + 1) % 3];
                let q = tris[t][(k + 2) % 3];
                let a = tris[t][k];
                let Some(kk) = (0..3).find(|&i| {
                    tris[u][(i + 1) % 3] == q && tris[u][(i + 2) % 3] == p
                }) else {
                    continue;
                };
                let b = tris[u][kk];
                if incircle(verts[tris[t][0]], verts[tris[t][1]], verts[tris[t][2]], verts[b])
                    != Sign::Zero
                {
                    continue;
                }
                let lexmin = [p, q, a, b]
                    .into_iter()
                    .min_by(|&x, &y| verts[x].lex_cmp(verts[y]))
                    .unwrap();
                if lexmin == p || lexmin == q {
                    continue;
                }
                // Flip (p,q) → (a,b): t = (a,p,b), u = (b,q,a).
                let n_pb = adj[u][(kk + 1) % 3]; // across (p,b) in u
                let n_bq = adj[u][(kk + 2) % 3]; // across (b,q) in u
                let n_qa = adj[t][(k + 1) % 3]; // across (q,a) in t
                let n_ap = adj[t][(k + 2) % 3]; // across (a,p) in t
                tris[t] = [a, p, b];
                tris[u] = [b, q, a];
                adj[t] = [n_pb, Some(u), n_ap];
                adj[u] = [n_qa, Some(t), n_bq];
                for (nb, me, edge) in [
                    (n_pb, t, (b, p)),
                    (n_ap, t, (p, a)),
                    (n_qa, u, (a, q)),
                    (n_bq, u, (q, b)),
                ] {
                    if let Some(nb) = nb {
                        for i in 0..3 {
                            let (eu, ev) = (tris[nb][(i + 1) % 3], tris[nb][(i + 2) % 3]);
                            if (eu, ev) == edge {
                                adj[nb][i] = Some(me);
                            }
                        }
                    }
                }
                flipped = true;
            }
        }
        if !flipped {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point2;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn three_points_one_triangle() {
        let t = delaunay(&[
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
        ])
        .unwrap();
        assert_eq!(t.triangles.len(), 1);
    }

    #[test]
    fn unit_square_tie_break_is_order_independent() {
        let corners = [
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ];
        let mut diagonals = Vec::new();
        let orders: [[usize; 4]; 4] = [[0, 1, 2, 3], [3, 2, 1, 0], [2, 0, 3, 1], [1, 3, 0, 2]];
        for ord in orders {
            let pts: Vec<Point2> = ord.iter().map(|&i| corners[i]).collect();
            let t = delaunay(&pts).unwrap();
            assert_eq!(t.triangles.len(), 2);
            // shared edge = the diagonal
            let mut counts = HashMap::new();
            for tri in &t.triangles {
                for k in 0..3 {
                    let (a, b) = (tri[k], tri[(k + 1) % 3]);
                    let key = if a < b { (a, b) } else { (b, a) };
                    *counts.entry(key).or_insert(0) += 1;
                }
            }
            let diag = counts
                .into_iter()
                .find(|&(_, c)| c == 2)
                .map(|((a, b), _)| {
                    let mut ends = [t.vertices[a], t.vertices[b]];
                    ends.sort_by(|p, q| p.lex_cmp(*q));
                    ends
                })
                .unwrap();
            diagonals.push(diag);
        }
        for d in &diagonals[1..] {
            assert_eq!(d, &diagonals[0]);
        }
        // lexicographic rule keeps the diagonal through (0,0)
        assert_eq!(diagonals[0][0], Point2::new(0.0, 0.0));
        assert_eq!(diagonals[0][1], Point2::new(1.0, 1.0));
    }

    #[test]
    fn collinear_input_errors() {
        let pts: Vec<Point2> = (0..5).map(|i| Point2::new(i as f64, 2.0 * i as f64)).collect();
        assert_eq!(delaunay(&pts).unwrap_err(), GeomError::CollinearInput);
    }

    #[test]
    fn duplicates_are_merged() {
        let t = delaunay(&[
            Point2::new(0.0, 0.0),
            Point2::new(0.0, 5e-13),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
        ])
        .unwrap();
        assert_eq!(t.vertices.len(), 3);
        assert_eq!(t.vertex_of_input, vec![0, 0, 1, 2]);
    }

    /// Euler's relation for a triangulated point set: with `h` hull points
    /// and `i` interior points, triangle count = 2i + h - 2.
    #[test]
    fn euler_count_on_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let pts: Vec<Point2> = (0..1000)
            .map(|_| Point2::new(rng.random::<f64>(), rng.random::<f64>()))
            .collect();
        let t = delaunay(&pts).unwrap();
        let hull = crate::geom::convex_hull(&t.vertices);
        let h = hull.len();
        let i = t.vertices.len() - h;
        assert_eq!(t.triangles.len(), 2 * i + h - 2);
    }

    /// Empty circumcircle property against every input vertex.
    #[test]
    fn delaunay_property_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let pts: Vec<Point2> = (0..250)
            .map(|_| Point2::new(rng.random::<f64>(), rng.random::<f64>()))
            .collect();
        let t = delaunay(&pts).unwrap();
        for tri in &t.triangles {
            let (a, b, c) = (t.vertices[tri[0]], t.vertices[tri[1]], t.vertices[tri[2]]);
            for (vi, &v) in t.vertices.iter().enumerate() {
                if tri.contains(&vi) {
                    continue;
                }
                assert_ne!(
                    incircle(a, b, c, v),
                    Sign::Positive,
                    "vertex {vi} strictly inside a circumcircle"
                );
            }
        }
    }

    #[test]
    fn triangles_are_ccw() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pts: Vec<Point2> = (0..200)
            .map(|_| Point2::new(rng.random::<f64>(), rng.random::<f64>()))
            .collect();
        let t = delaunay(&pts).unwrap();
        for tri in &t.triangles {
            assert_eq!(
                orient2d(t.vertices[tri[0]], t.vertices[tri[1]], t.vertices[tri[2]]),
                Sign::Positive
            );
        }
    }
}
