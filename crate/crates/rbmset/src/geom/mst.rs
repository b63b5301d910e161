//! Euclidean minimum spanning tree, computed on the Delaunay edge set
//! (the EMST is always a subgraph of the Delaunay graph).

use super::delaunay::{delaunay, merge_duplicates};
use super::{GeomError, Point};
use crate::num::Real;

/// Weighted undirected edges over input-point indices.
#[derive(Debug, Clone)]
pub struct EdgeSet<F> {
    /// `(i, j, length)` with `i`, `j` indices into the original input.
    pub edges: Vec<(usize, usize, F)>,
}

impl<F: Real> EdgeSet<F> {
    pub fn total_weight(&self) -> F {
        self.edges
            .iter()
            .fold(F::zero(), |acc, &(_, _, w)| acc + w)
    }

    pub fn max_edge(&self) -> F {
        self.edges
            .iter()
            .fold(F::zero(), |acc, &(_, _, w)| acc.max(w))
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

/// Euclidean MST over all input points.
///
/// Exact duplicates (within the Delaunay merge tolerance) are attached to
/// their representative by zero-length edges, so the result always spans
/// the full input with `n - 1` edges. Collinear inputs fall back to a
/// quadratic Prim scan.
pub fn euclidean_mst<F: Real>(points: &[Point<F>]) -> Result<EdgeSet<F>, GeomError> {
    if points.len() < 2 {
        return Err(GeomError::TooFewPoints {
            needed: 2,
            got: points.len(),
        });
    }

    let candidate_edges: Vec<(usize, usize)> = match delaunay(points) {
        Ok(tri) => {
            let mut rep_first: Vec<usize> = vec![usize::MAX; tri.vertices.len()];
            for (orig, &rep) in tri.vertex_of_input.iter().enumerate() {
                if rep_first[rep] == usize::MAX {
                    rep_first[rep] = orig;
                }
            }
            let mut edges: Vec<(usize, usize)> = tri
                .edges()
                .into_iter()
                .map(|(a, b)| (rep_first[a], rep_first[b]))
                .collect();
            // Zero-length links for merged duplicates.
            for (orig, &rep) in tri.vertex_of_input.iter().enumerate() {
                if rep_first[rep] != orig {
                    edges.push((rep_first[rep], orig));
                }
            }
            edges
        }
        Err(GeomError::CollinearInput)
        | Err(GeomError::DegenerateAllCoincident)
        | Err(GeomError::TooFewPoints { .. }) => all_pairs(points.len()),
        Err(e) => return Err(e),
    };

    let mut weighted: Vec<(usize, usize, F)> = candidate_edges
        .into_iter()
        .map(|(a, b)| (a, b, points[a].dist(points[b])))
        .collect();
    weighted.sort_by(|x, y| {
        x.2.partial_cmp(&y.2)
            .unwrap()
            .then(x.0.cmp(&y.0))
            .then(x.1.cmp(&y.1))
    });

    let mut uf = UnionFind::new(points.len());
    let mut edges = Vec::with_capacity(points.len() - 1);
    for (a, b, w) in weighted {
        if uf.union(a, b) {
            edges.push((a, b, w));
            if edges.len() == points.len() - 1 {
                break;
            }
        }
    }
    debug_assert_eq!(edges.len(), points.len() - 1, "MST must span the input");
    Ok(EdgeSet { edges })
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

/// Smallest radius `eps` such that the union of closed balls
/// `B(points, eps)` is connected: half of the largest MST edge.
pub fn connectivity_radius<F: Real>(points: &[Point<F>]) -> Result<F, GeomError> {
    let mst = euclidean_mst(points)?;
    Ok(mst.max_edge() / F::of(2.0))
}

/// Reference O(n²) Prim implementation; used by tests as an oracle and by
/// `euclidean_mst` for degenerate inputs via `all_pairs`.
pub fn prim_brute_force<F: Real>(points: &[Point<F>]) -> Result<EdgeSet<F>, GeomError> {
    let n = points.len();
    if n < 2 {
        return Err(GeomError::TooFewPoints { needed: 2, got: n });
    }
    let _ = merge_duplicates(points); // validates finiteness
    let mut in_tree = vec![false; n];
    let mut best = vec![(F::infinity(), usize::MAX); n];
    in_tree[0] = true;
    for j in 1..n {
        best[j] = (points[0].dist(points[j]), 0);
    }
    let mut edges = Vec::with_capacity(n - 1);
    for _ in 1..n {
        let mut pick = usize::MAX;
        let mut w = F::infinity();
        for j in 0..n {
            if !in_tree[j] && best[j].0 < w {
                w = best[j].0;
                pick = j;
            }
        }
        edges.push((best[pick].1, pick, w));
        in_tree[pick] = true;
        for j in 0..n {
            if !in_tree[j] {
                let d = points[pick].dist(points[j]);
                if d < best[j].0 {
                    best[j] = (d, pick);
                }
            }
        }
    }
    Ok(EdgeSet { edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point2;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn collinear_chain() {
        let pts: Vec<Point2> = (0..4).map(|i| Point2::new(i as f64, 0.0)).collect();
        let mst = euclidean_mst(&pts).unwrap();
        assert_eq!(mst.edges.len(), 3);
        for &(_, _, w) in &mst.edges {
            assert!((w - 1.0).abs() < 1e-15);
        }
        assert!((mst.max_edge() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_clusters_forced_bridge() {
        let mut pts = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            pts.push(Point2::new(rng.random::<f64>() * 0.1, rng.random::<f64>() * 0.1));
        }
        for _ in 0..20 {
            pts.push(Point2::new(5.0 + rng.random::<f64>() * 0.1, rng.random::<f64>() * 0.1));
        }
        let mst = euclidean_mst(&pts).unwrap();
        let long_edges: Vec<_> = mst.edges.iter().filter(|&&(_, _, w)| w > 1.0).collect();
        assert_eq!(long_edges.len(), 1, "exactly one inter-cluster bridge");
        // the bridge joins the closest cross-cluster pair
        let mut gap = f64::INFINITY;
        for i in 0..20 {
            for j in 20..40 {
                gap = gap.min(pts[i].dist(pts[j]));
            }
        }
        assert!((long_edges[0].2 - gap).abs() < 1e-12);
        assert!((mst.max_edge() - gap).abs() < 1e-12);
    }

    #[test]
    fn matches_brute_force_prim() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pts: Vec<Point2> = (0..200)
            .map(|_| Point2::new(rng.random::<f64>(), rng.random::<f64>()))
            .collect();
        let fast = euclidean_mst(&pts).unwrap();
        let brute = prim_brute_force(&pts).unwrap();
        assert!((fast.total_weight() - brute.total_weight()).abs() < 1e-9);
        assert!((fast.max_edge() - brute.max_edge()).abs() < 1e-12);
    }

    #[test]
    fn weight_invariant_under_permutation_and_rigid_motion() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let pts: Vec<Point2> = (0..80)
            .map(|_| Point2::new(rng.random::<f64>(), rng.random::<f64>()))
            .collect();
        let base = euclidean_mst(&pts).unwrap();

        let mut shuffled = pts.clone();
        shuffled.shuffle(&mut rng);
        let permuted = euclidean_mst(&shuffled).unwrap();
        assert!((base.total_weight() - permuted.total_weight()).abs() < 1e-9);

        let (s, c) = (0.731f64.sin(), 0.731f64.cos());
        let moved: Vec<Point2> = pts
            .iter()
            .map(|p| Point2::new(c * p.x - s * p.y + 3.0, s * p.x + c * p.y - 1.0))
            .collect();
        let rigid = euclidean_mst(&moved).unwrap();
        assert!((base.max_edge() - rigid.max_edge()).abs() < 1e-12);
    }
}
