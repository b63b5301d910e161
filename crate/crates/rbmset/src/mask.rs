//! Raster masks over a uniform grid: the common currency for distance in
//! measure, Minkowski content and the brute-force estimator oracles.

use serde::{Deserialize, Serialize};

use crate::geom::{BBox2, Point2};

/// Placement of a uniform cell grid in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridGeom {
    pub origin: Point2,
    pub cell: f64,
    pub width: usize,
    pub height: usize,
}

impl GridGeom {
    /// Smallest grid of `cell`-sized cells covering `bbox`.
    pub fn covering(bbox: BBox2, cell: f64) -> GridGeom {
        assert!(cell > 0.0 && cell.is_finite());
        let width = ((bbox.width() / cell).ceil() as usize).max(1);
        let height = ((bbox.height() / cell).ceil() as usize).max(1);
        GridGeom {
            origin: bbox.min,
            cell,
            width,
            height,
        }
    }

    #[inline]
    pub fn center(&self, i: usize, j: usize) -> Point2 {
        Point2::new(
            self.origin.x + (i as f64 + 0.5) * self.cell,
            self.origin.y + (j as f64 + 0.5) * self.cell,
        )
    }

    /// Cell containing `p`, if inside the grid.
    #[inline]
    pub fn cell_of(&self, p: Point2) -> Option<(usize, usize)> {
        let i = ((p.x - self.origin.x) / self.cell).floor() as isize;
        let j = ((p.y - self.origin.y) / self.cell).floor() as isize;
        if i < 0 || j < 0 || i >= self.width as isize || j >= self.height as isize {
            None
        } else {
            Some((i as usize, j as usize))
        }
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grids interchangeable for cell-by-cell comparison.
    pub fn same_as(&self, other: &GridGeom) -> bool {
        self.width == other.width
            && self.height == other.height
            && (self.cell - other.cell).abs() <= 1e-12 * self.cell.abs()
            && self.origin.dist(other.origin) <= 1e-9 * self.cell.max(1.0)
    }
}

/// Bit mask over a [`GridGeom`]; a set bit means the cell belongs to the set.
#[derive(Debug, Clone, PartialEq)]
pub struct GridMask {
    pub geom: GridGeom,
    pub bits: Vec<bool>,
}

impl GridMask {
    pub fn empty(geom: GridGeom) -> GridMask {
        GridMask {
            bits: vec![false; geom.len()],
            geom,
        }
    }

    /// Set each cell whose center satisfies the predicate.
    pub fn from_predicate<F: Fn(Point2) -> bool + Sync>(geom: GridGeom, pred: F) -> GridMask {
        use rayon::prelude::*;
        let w = geom.width;
        let bits: Vec<bool> = (0..geom.len())
            .into_par_iter()
            .map(|k| pred(geom.center(k % w, k / w)))
            .collect();
        GridMask { geom, bits }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[j * self.geom.width + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.bits[j * self.geom.width + i] = v;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Area represented by the mask: set cells × cell².
    pub fn area(&self) -> f64 {
        self.count() as f64 * self.geom.cell * self.geom.cell
    }

    /// Centers of all set cells.
    pub fn set_centers(&self) -> Vec<Point2> {
        let mut out = Vec::with_capacity(self.count());
        for j in 0..self.geom.height {
            for i in 0..self.geom.width {
                if self.get(i, j) {
                    out.push(self.geom.center(i, j));
                }
            }
        }
        out
    }

    /// Number of cells where the two masks differ. Panics on geometry
    /// mismatch; callers comparing user input should check `same_as` first.
    pub fn diff_count(&self, other: &GridMask) -> usize {
        assert!(self.geom.same_as(&other.geom), "grid geometry mismatch");
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count()
    }

    /// True iff every set cell of `self` is also set in `other`.
    pub fn subset_of(&self, other: &GridMask) -> bool {
        assert!(self.geom.same_as(&other.geom), "grid geometry mismatch");
        self.bits
            .iter()
            .zip(&other.bits)
            .all(|(a, b)| !a || *b)
    }

    /// Squared Euclidean distance (in cell units) from every cell center to
    /// the nearest set cell center. Unset grids give all-infinity.
    pub fn distance_sq_cells(&self) -> Vec<f64> {
        let mut field = vec![f64::INFINITY; self.geom.len()];
        for (k, &b) in self.bits.iter().enumerate() {
            if b {
                field[k] = 0.0;
            }
        }
        edt_sq(self.geom.width, self.geom.height, &mut field);
        field
    }

    /// Morphological dilation by a Euclidean disk of radius `radius`
    /// (domain units, center-to-center, closed: ties at exactly `radius`
    /// are included).
    pub fn dilate(&self, radius: f64) -> GridMask {
        assert!(radius >= 0.0);
        let d2 = self.distance_sq_cells();
        let r_cells = radius / self.geom.cell;
        let thr = r_cells * r_cells * (1.0 + 1e-9);
        GridMask {
            geom: self.geom,
            bits: d2.iter().map(|&d| d <= thr).collect(),
        }
    }

    /// Number of 4-connected components among set cells.
    pub fn component_count(&self) -> usize {
        let (w, h) = (self.geom.width, self.geom.height);
        let mut seen = vec![false; w * h];
        let mut n = 0;
        let mut stack = Vec::new();
        for start in 0..w * h {
            if !self.bits[start] || seen[start] {
                continue;
            }
            n += 1;
            seen[start] = true;
            stack.push(start);
            while let Some(k) = stack.pop() {
                let (i, j) = (k % w, k / w);
                let mut push = |ni: usize, nj: usize, stack: &mut Vec<usize>| {
                    let nk = nj * w + ni;
                    if self.bits[nk] && !seen[nk] {
                        seen[nk] = true;
                        stack.push(nk);
                    }
                };
                if i > 0 {
                    push(i - 1, j, &mut stack);
                }
                if i + 1 < w {
                    push(i + 1, j, &mut stack);
                }
                if j > 0 {
                    push(i, j - 1, &mut stack);
                }
                if j + 1 < h {
                    push(i, j + 1, &mut stack);
                }
            }
        }
        n
    }
}

/// In-place exact squared Euclidean distance transform (Felzenszwalb &
/// Huttenlocher). `field` holds 0 at sites and +inf elsewhere on input;
/// on output it holds squared distances in cell units.
pub fn edt_sq(width: usize, height: usize, field: &mut [f64]) {
    assert_eq!(field.len(), width * height);
    let n = width.max(height);
    let mut f = vec![0.0f64; n];
    let mut d = vec![0.0f64; n];
    let mut v = vec![0usize; n];
    let mut z = vec![0.0f64; n + 1];

    // columns
    for i in 0..width {
        for j in 0..height {
            f[j] = field[j * width + i];
        }
        dt_1d(&f[..height], &mut d, &mut v, &mut z);
        for j in 0..height {
            field[j * width + i] = d[j];
        }
    }
    // rows
    for j in 0..height {
        let row = &mut field[j * width..(j + 1) * width];
        f[..width].copy_from_slice(row);
        dt_1d(&f[..width], &mut d, &mut v, &mut z);
        row.copy_from_slice(&d[..width]);
    }
}

/// 1-D squared distance transform under a parabola lower envelope.
fn dt_1d(f: &[f64], d: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    if n == 0 {
        return;
    }
    let mut k = 0usize;
    v[0] = 0;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in 1..n {
        if f[q].is_infinite() {
            continue;
        }
        loop {
            let p = v[k];
            let s = if f[p].is_infinite() {
                f64::NEG_INFINITY
            } else {
                ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q - p) as f64)
            };
            if s <= z[k] {
                if k == 0 {
                    v[0] = q;
                    z[0] = f64::NEG_INFINITY;
                    z[1] = f64::INFINITY;
                    break;
                }
                k -= 1;
            } else {
                k += 1;
                v[k] = q;
                z[k] = s;
                z[k + 1] = f64::INFINITY;
                break;
            }
        }
    }
    let mut k = 0usize;
    for q in 0..n {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let dq = q as f64 - p as f64;
        d[q] = dq * dq + f[p];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::BBox2;

    fn unit_geom(cell: f64) -> GridGeom {
        GridGeom::covering(
            BBox2::new(Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)),
            cell,
        )
    }

    #[test]
    fn covering_and_centers() {
        let g = unit_geom(0.25);
        assert_eq!((g.width, g.height), (4, 4));
        assert_eq!(g.center(0, 0), Point2::new(0.125, 0.125));
        assert_eq!(g.cell_of(Point2::new(0.9, 0.1)), Some((3, 0)));
        assert_eq!(g.cell_of(Point2::new(-0.1, 0.1)), None);
    }

    #[test]
    fn edt_single_site() {
        let g = GridGeom {
            origin: Point2::new(0.0, 0.0),
            cell: 1.0,
            width: 5,
            height: 4,
        };
        let mut m = GridMask::empty(g);
        m.set(1, 1, true);
        let d2 = m.distance_sq_cells();
        assert_eq!(d2[1 * 5 + 1], 0.0);
        assert_eq!(d2[0], 2.0); // (0,0) vs (1,1)
        assert_eq!(d2[3 * 5 + 4], 13.0); // (4,3): dx=3, dy=2
    }

    #[test]
    fn edt_matches_brute_force() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = GridGeom {
            origin: Point2::new(0.0, 0.0),
            cell: 1.0,
            width: 23,
            height: 17,
        };
        let mut m = GridMask::empty(g);
        let mut sites = Vec::new();
        for _ in 0..12 {
            let i = rng.random_range(0..23);
            let j = rng.random_range(0..17);
            m.set(i, j, true);
            sites.push((i as f64, j as f64));
        }
        let d2 = m.distance_sq_cells();
        for j in 0..17 {
            for i in 0..23 {
                let brute = sites
                    .iter()
                    .map(|&(si, sj)| {
                        let (dx, dy) = (i as f64 - si, j as f64 - sj);
                        dx * dx + dy * dy
                    })
                    .fold(f64::INFINITY, f64::min);
                assert_eq!(d2[j * 23 + i], brute, "cell ({i},{j})");
            }
        }
    }

    #[test]
    fn dilate_grows_by_radius() {
        let g = GridGeom {
            origin: Point2::new(0.0, 0.0),
            cell: 0.1,
            width: 21,
            height: 21,
        };
        let mut m = GridMask::empty(g);
        m.set(10, 10, true);
        let d = m.dilate(0.3);
        // closed ball of radius 3 cells: 1 + 4 + 8 + ... = 29 cells
        assert_eq!(d.count(), 29);
        assert!(m.subset_of(&d));
    }

    #[test]
    fn components() {
        let g = GridGeom {
            origin: Point2::new(0.0, 0.0),
            cell: 1.0,
            width: 4,
            height: 4,
        };
        let mut m = GridMask::empty(g);
        m.set(0, 0, true);
        m.set(1, 0, true);
        m.set(3, 3, true);
        assert_eq!(m.component_count(), 2);
    }
}
