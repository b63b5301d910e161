//! Uniform-grid spatial index for nearest-neighbor and range queries.
//! Acceleration only: query results are identical to a brute-force scan.

use super::{BBox, GeomError, Point};
use crate::num::Real;

#[derive(Debug, Clone)]
pub struct GridIndex<F> {
    points: Vec<Point<F>>,
    origin: Point<F>,
    cell: F,
    w: usize,
    h: usize,
    starts: Vec<u32>,
    items: Vec<u32>,
}

impl<F: Real> GridIndex<F> {
    /// Build an index with an automatic cell size (~1 point per cell).
    pub fn build(points: &[Point<F>]) -> Result<Self, GeomError> {
        if points.is_empty() {
            return Err(GeomError::EmptyReferenceSet);
        }
        let bb = BBox::of_points(points).unwrap();
        let extent = bb.width().max(bb.height()).max(F::of(1e-12));
        let target = (points.len() as f64).sqrt().ceil().max(1.0);
        let cell = extent / F::of(target);
        Self::build_with_cell(points, cell)
    }

    pub fn build_with_cell(points: &[Point<F>], cell: F) -> Result<Self, GeomError> {
        if points.is_empty() {
            return Err(GeomError::EmptyReferenceSet);
        }
        assert!(cell > F::zero() && cell.is_finite());
        let bb = BBox::of_points(points).unwrap();
        let w = ((bb.width() / cell).as_f64().floor() as usize + 1).min(4096).max(1);
        let h = ((bb.height() / cell).as_f64().floor() as usize + 1).min(4096).max(1);
        // If clamping changed the grid shape, stretch cells to cover the bbox.
        let cell_x = (bb.width() / F::of(w as f64)).max(cell);
        let cell_y = (bb.height() / F::of(h as f64)).max(cell);
        let cell = cell_x.max(cell_y);

        let origin = bb.min;
        let idx_of = |p: &Point<F>| -> usize {
            let i = (((p.x - origin.x) / cell).as_f64().floor() as isize).clamp(0, w as isize - 1)
                as usize;
            let j = (((p.y - origin.y) / cell).as_f64().floor() as isize).clamp(0, h as isize - 1)
                as usize;
            j * w + i
        };

        let mut counts = vec![0u32; w * h + 1];
        for p in points {
            counts[idx_of(p) + 1] += 1;
        }
        for k in 1..counts.len() {
            counts[k] += counts[k - 1];
        }
        let starts = counts.clone();
        let mut fill = starts.clone();
        let mut items = vec![0u32; points.len()];
        for (pi, p) in points.iter().enumerate() {
            let c = idx_of(p);
            items[fill[c] as usize] = pi as u32;
            fill[c] += 1;
        }
        Ok(GridIndex {
            points: points.to_vec(),
            origin,
            cell,
            w,
            h,
            starts,
            items,
        })
    }

    #[inline]
    fn cell_coords(&self, p: Point<F>) -> (isize, isize) {
        let i = ((p.x - self.origin.x) / self.cell).as_f64().floor() as isize;
        let j = ((p.y - self.origin.y) / self.cell).as_f64().floor() as isize;
        (i.clamp(0, self.w as isize - 1), j.clamp(0, self.h as isize - 1))
    }

    #[inline]
    fn scan_cell(&self, i: isize, j: isize, q: Point<F>, best: &mut (F, usize)) {
        if i < 0 || j < 0 || i >= self.w as isize || j >= self.h as isize {
            return;
        }
        let c = j as usize * self.w + i as usize;
        let (s, e) = (self.starts[c] as usize, self.starts[c + 1] as usize);
        for &pi in &self.items[s..e] {
            let d = q.dist_sq(self.points[pi as usize]);
            if d < best.0 {
                *best = (d, pi as usize);
            }
        }
    }

    /// Nearest point index and distance.
    pub fn nearest(&self, q: Point<F>) -> (usize, F) {
        let (ci, cj) = self.cell_coords(q);
        let mut best = (F::infinity(), usize::MAX);
        let max_ring = self.w.max(self.h) as isize + 1;
        let mut ring: isize = 0;
        loop {
            if ring == 0 {
                self.scan_cell(ci, cj, q, &mut best);
            } else {
                for i in (ci - ring)..=(ci + ring) {
                    self.scan_cell(i, cj - ring, q, &mut best);
                    self.scan_cell(i, cj + ring, q, &mut best);
                }
                for j in (cj - ring + 1)..=(cj + ring - 1) {
                    self.scan_cell(ci - ring, j, q, &mut best);
                    self.scan_cell(ci + ring, j, q, &mut best);
                }
            }
            // A point in a cell at Chebyshev ring r+1 is at least r*cell
            // away from q (q may sit anywhere in its own cell).
            if best.1 != usize::MAX {
                let safe = F::of(ring.max(0) as f64) * self.cell;
                if best.0 <= safe * safe {
                    break;
                }
            }
            ring += 1;
            if ring > max_ring {
                break;
            }
        }
        debug_assert!(best.1 != usize::MAX);
        (best.1, best.0.sqrt())
    }

    /// Distance from `q` to the point set.
    #[inline]
    pub fn nearest_dist(&self, q: Point<F>) -> F {
        self.nearest(q).1
    }

    /// Indices of all points within `radius` of `q` (closed ball).
    pub fn within(&self, q: Point<F>, radius: F) -> Vec<usize> {
        let r2 = radius * radius;
        let lo = self.cell_coords(Point::new(q.x - radius, q.y - radius));
        let hi = self.cell_coords(Point::new(q.x + radius, q.y + radius));
        let mut out = Vec::new();
        for j in lo.1..=hi.1 {
            for i in lo.0..=hi.0 {
                let c = j as usize * self.w + i as usize;
                let (s, e) = (self.starts[c] as usize, self.starts[c + 1] as usize);
                for &pi in &self.items[s..e] {
                    if q.dist_sq(self.points[pi as usize]) <= r2 {
                        out.push(pi as usize);
                    }
                }
            }
        }
        out
    }

    /// True iff any point lies within `radius` of `q` (closed ball).
    pub fn any_within(&self, q: Point<F>, radius: F) -> bool {
        let r2 = radius * radius;
        let lo = self.cell_coords(Point::new(q.x - radius, q.y - radius));
        let hi = self.cell_coords(Point::new(q.x + radius, q.y + radius));
        for j in lo.1..=hi.1 {
            for i in lo.0..=hi.0 {
                let c = j as usize * self.w + i as usize;
                let (s, e) = (self.starts[c] as usize, self.starts[c + 1] as usize);
                for &pi in &self.items[s..e] {
                    if q.dist_sq(self.points[pi as usize]) <= r2 {
                        return true;
                    }
                }
            }
        }
        false
    }

    pub fn points(&self) -> &[Point<F>] {
        &self.points
    }
}

/// Exact nearest-reference distance for each query point.
pub fn nn_distances<F: Real>(
    queries: &[Point<F>],
    refs: &[Point<F>],
) -> Result<Vec<F>, GeomError> {
    let index = GridIndex::build(refs)?;
    Ok(queries.iter().map(|&q| index.nearest_dist(q)).collect())
}
