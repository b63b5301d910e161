//! Evaluation metrics: Hausdorff distance, distance in measure, outer
//! Minkowski content and log-log rate fits.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domains::Domain;
use crate::geom::grid_index::GridIndex;
use crate::geom::Point2;
use crate::mask::GridMask;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("point set must be nonempty")]
    EmptyInput,
    #[error("masks live on different grids")]
    GridMismatch,
    #[error("eps {eps} below twice the cell size {cell}")]
    EpsTooSmallForGrid { eps: f64, cell: f64 },
    #[error("rate fit needs at least 3 usable samples with distinct T")]
    DegenerateDesign,
}

/// Hausdorff distance between two finite point sets.
pub fn hausdorff_points(a: &[Point2], b: &[Point2]) -> Result<f64, MetricsError> {
    if a.is_empty() || b.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    let ia = GridIndex::build(a).map_err(|_| MetricsError::EmptyInput)?;
    let ib = GridIndex::build(b).map_err(|_| MetricsError::EmptyInput)?;
    let d_ab = a
        .iter()
        .map(|&p| ib.nearest_dist(p))
        .fold(0.0f64, f64::max);
    let d_ba = b
        .iter()
        .map(|&p| ia.nearest_dist(p))
        .fold(0.0f64, f64::max);
    Ok(d_ab.max(d_ba))
}

/// Point representation of an estimator for set-vs-domain distances.
#[derive(Debug, Clone, Copy)]
pub enum EstimatorSample<'a> {
    Points(&'a [Point2]),
    Mask(&'a GridMask),
}

/// Hausdorff distance between an estimator (its points, or mask cell
/// centers) and a dense discretization of the domain: an interior grid of
/// spacing `interior_cell` plus `boundary_samples` boundary points.
/// Discretization error is at most max(interior_cell, boundary spacing).
pub fn hausdorff_set_vs_domain_with(
    input: EstimatorSample<'_>,
    domain: &Domain,
    boundary_samples: usize,
    interior_cell: f64,
) -> Result<f64, MetricsError> {
    let est_points: Vec<Point2> = match input {
        EstimatorSample::Points(p) => p.to_vec(),
        EstimatorSample::Mask(m) => m.set_centers(),
    };
    if est_points.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    let mut sample = domain
        .rasterize(interior_cell)
        .map_err(|_| MetricsError::EmptyInput)?
        .set_centers();
    sample.extend(domain.boundary_points(boundary_samples));
    hausdorff_points(&est_points, &sample)
}

/// As [`hausdorff_set_vs_domain_with`], with the interior spacing tied to
/// the boundary budget (four times the observed boundary spacing).
pub fn hausdorff_set_vs_domain(
    input: EstimatorSample<'_>,
    domain: &Domain,
    boundary_samples: usize,
) -> Result<f64, MetricsError> {
    assert!(boundary_samples >= 1000, "need at least 1000 boundary samples");
    let bnd = domain.boundary_points(boundary_samples);
    let mut total = 0.0;
    for w in bnd.windows(2) {
        total += w[0].dist(w[1]);
    }
    let spacing = (total / bnd.len() as f64).max(1e-9);
    let cell = (4.0 * spacing).min(domain.bbox().width().min(domain.bbox().height()) / 8.0);
    hausdorff_set_vs_domain_with(input, domain, boundary_samples, cell)
}

/// Distance in measure between two masks on the same grid: the area of
/// the symmetric difference.
pub fn dmu_masks(a: &GridMask, b: &GridMask) -> Result<f64, MetricsError> {
    if !a.geom.same_as(&b.geom) {
        return Err(MetricsError::GridMismatch);
    }
    Ok(a.diff_count(b) as f64 * a.geom.cell * a.geom.cell)
}

/// Outer Minkowski content proxy at scale `eps`:
/// μ(B(mask, eps) ∖ mask)/eps via disk dilation of the raster.
pub fn minkowski_content(mask: &GridMask, eps: f64) -> Result<f64, MetricsError> {
    if eps < 2.0 * mask.geom.cell {
        return Err(MetricsError::EpsTooSmallForGrid {
            eps,
            cell: mask.geom.cell,
        });
    }
    // the dilation must fit in the grid; pad if the mask touches the frame
    let pad_cells = (eps / mask.geom.cell).ceil() as usize + 1;
    let padded = pad_mask(mask, pad_cells);
    let dilated = padded.dilate(eps);
    Ok((dilated.area() - padded.area()) / eps)
}

fn pad_mask(mask: &GridMask, pad: usize) -> GridMask {
    let geom = crate::mask::GridGeom {
        origin: Point2::new(
            mask.geom.origin.x - pad as f64 * mask.geom.cell,
            mask.geom.origin.y - pad as f64 * mask.geom.cell,
        ),
        cell: mask.geom.cell,
        width: mask.geom.width + 2 * pad,
        height: mask.geom.height + 2 * pad,
    };
    let mut out = GridMask::empty(geom);
    for j in 0..mask.geom.height {
        for i in 0..mask.geom.width {
            if mask.get(i, j) {
                out.set(i + pad, j + pad, true);
            }
        }
    }
    out
}

/// Log-log regression model for rate fits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateModel {
    /// regress log(value) on log(T)
    RawT,
    /// regress log(value) on log(T / log(T)²)
    Log2Corrected,
}

/// Least-squares fit of a decay rate on the log-log scale.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points_used: usize,
}

/// Fit `log(value) ~ slope · x + intercept` with `x` given by the model.
/// Samples with nonpositive values, nonpositive T, or an undefined
/// regressor (T = 1 under the corrected model) are dropped.
pub fn fit_rate(samples: &[(f64, f64)], model: RateModel) -> Result<RateFit, MetricsError> {
    let mut xs = Vec::with_capacity(samples.len());
    let mut ys = Vec::with_capacity(samples.len());
    for &(t, v) in samples {
        if !(t > 0.0) || !(v > 0.0) {
            continue;
        }
        let x = match model {
            RateModel::RawT => t.ln(),
            RateModel::Log2Corrected => {
                let lt = t.ln();
                if lt.abs() < 1e-12 {
                    continue;
                }
                (t / (lt * lt)).ln()
            }
        };
        xs.push(x);
        ys.push(v.ln());
    }
    let n = xs.len();
    if n < 3 {
        return Err(MetricsError::DegenerateDesign);
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for k in 0..n {
        let dx = xs[k] - mx;
        let dy = ys[k] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx < 1e-18 {
        return Err(MetricsError::DegenerateDesign);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy < 1e-30 {
        1.0 // constant response is fit exactly by slope 0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Ok(RateFit {
        slope,
        intercept,
        r_squared,
        points_used: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mask::GridGeom;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn hausdorff_trivia() {
        let a = vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)];
        assert_eq!(hausdorff_points(&a, &a).unwrap(), 0.0);
        let b = vec![Point2::new(3.0, 0.0)];
        assert_eq!(
            hausdorff_points(&[Point2::new(0.0, 0.0)], &b).unwrap(),
            3.0
        );
        // asymmetric term dominates
        assert_eq!(
            hausdorff_points(&a, &[Point2::new(0.0, 0.0)]).unwrap(),
            1.0
        );
        assert_eq!(hausdorff_points(&[], &a).unwrap_err(), MetricsError::EmptyInput);
    }

    #[test]
    fn hausdorff_is_a_metric_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..25 {
            let gen = |rng: &mut ChaCha8Rng, n: usize| -> Vec<Point2> {
                (0..n)
                    .map(|_| Point2::new(rng.random::<f64>(), rng.random::<f64>()))
                    .collect()
            };
            let a = gen(&mut rng, 12);
            let b = gen(&mut rng, 9);
            let c = gen(&mut rng, 15);
            let dab = hausdorff_points(&a, &b).unwrap();
            let dba = hausdorff_points(&b, &a).unwrap();
            assert!((dab - dba).abs() < 1e-12, "symmetry");
            assert_eq!(hausdorff_points(&a, &a).unwrap(), 0.0, "identity");
            let dac = hausdorff_points(&a, &c).unwrap();
            let dcb = hausdorff_points(&c, &b).unwrap();
            assert!(dab <= dac + dcb + 1e-12, "triangle inequality");
        }
    }

    #[test]
    fn set_vs_domain_self_distance_is_discretization_bound() {
        let d = crate::domains::Domain::unit_disk();
        let m = d.rasterize(0.02).unwrap();
        let v = hausdorff_set_vs_domain_with(EstimatorSample::Mask(&m), &d, 2000, 0.02).unwrap();
        assert!(v <= 0.02 * std::f64::consts::SQRT_2, "self distance {v}");
    }

    #[test]
    fn set_vs_domain_sees_a_missing_ball() {
        let d = crate::domains::Domain::unit_disk();
        let rho = 0.25;
        let hole = Point2::new(0.3, 0.1);
        let m = d.rasterize(0.01).unwrap();
        let carved = GridMask {
            geom: m.geom,
            bits: (0..m.geom.len())
                .map(|k| {
                    let c = m.geom.center(k % m.geom.width, k / m.geom.width);
                    m.bits[k] && c.dist(hole) > rho
                })
                .collect(),
        };
        let v =
            hausdorff_set_vs_domain_with(EstimatorSample::Mask(&carved), &d, 2000, 0.01).unwrap();
        assert!((v - rho).abs() < 0.02, "defect radius {rho} vs measured {v}");
    }

    #[test]
    fn dmu_basics_and_metric_props() {
        let g = GridGeom {
            origin: Point2::new(0.0, 0.0),
            cell: 0.1,
            width: 10,
            height: 10,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rand_mask = |rng: &mut ChaCha8Rng| -> GridMask {
            GridMask {
                geom: g,
                bits: (0..100).map(|_| rng.random::<bool>()).collect(),
            }
        };
        let a = rand_mask(&mut rng);
        let b = rand_mask(&mut rng);
        let c = rand_mask(&mut rng);
        assert_eq!(dmu_masks(&a, &a).unwrap(), 0.0);
        let comp = GridMask {
            geom: g,
            bits: a.bits.iter().map(|&x| !x).collect(),
        };
        assert!((dmu_masks(&a, &comp).unwrap() - 1.0).abs() < 1e-12, "complement = bbox area");
        let dab = dmu_masks(&a, &b).unwrap();
        assert_eq!(dab, dmu_masks(&b, &a).unwrap());
        assert!(dab <= dmu_masks(&a, &c).unwrap() + dmu_masks(&c, &b).unwrap() + 1e-15);
        let g2 = GridGeom { cell: 0.2, ..g };
        let other = GridMask::empty(g2);
        assert_eq!(dmu_masks(&a, &other).unwrap_err(), MetricsError::GridMismatch);
    }

    #[test]
    fn minkowski_square_and_disk() {
        let sq = crate::domains::Domain::unit_square().rasterize(0.002).unwrap();
        let eps = 0.02;
        let v = minkowski_content(&sq, eps).unwrap();
        assert!((v - 4.0).abs() / 4.0 < 0.03, "square content {v}");
        // Steiner: content ≈ perimeter + π·eps for convex sets
        assert!((v - (4.0 + PI * eps)).abs() / (4.0 + PI * eps) < 0.05);

        let disk = crate::domains::Domain::unit_disk().rasterize(0.004).unwrap();
        let eps = 0.04;
        let v = minkowski_content(&disk, eps).unwrap();
        assert!((v - 2.0 * PI).abs() / (2.0 * PI) < 0.03, "disk content {v}");
        assert!((v - (2.0 * PI + PI * eps)).abs() / (2.0 * PI + PI * eps) < 0.05);

        assert!(matches!(
            minkowski_content(&disk, 0.004),
            Err(MetricsError::EpsTooSmallForGrid { .. })
        ));
    }

    #[test]
    fn minkowski_refines_with_the_grid() {
        let d = crate::domains::Domain::unit_disk();
        let coarse = minkowski_content(&d.rasterize(0.01).unwrap(), 0.05).unwrap();
        let fine = minkowski_content(&d.rasterize(0.005).unwrap(), 0.05).unwrap();
        let target = 2.0 * PI + PI * 0.05;
        assert!(coarse > 0.0 && fine > 0.0);
        assert!((fine - target).abs() <= (coarse - target).abs() + 0.05);
    }

    #[test]
    fn fit_rate_power_law() {
        let samples: Vec<(f64, f64)> = (1..=8)
            .map(|k| {
                let t = (1u64 << k) as f64;
                (t, t.powf(-0.5))
            })
            .collect();
        let fit = fit_rate(&samples, RateModel::RawT).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(fit.points_used, 8);
    }

    #[test]
    fn fit_rate_constant_and_scaling() {
        let flat: Vec<(f64, f64)> = (1..=6).map(|k| (k as f64 * 2.0, 3.5)).collect();
        let fit = fit_rate(&flat, RateModel::RawT).unwrap();
        assert!(fit.slope.abs() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let samples: Vec<(f64, f64)> = (1..=8)
            .map(|k| {
                let t = (1u64 << k) as f64;
                (t, t.powf(-0.7) * (1.0 + 0.1 * rng.random::<f64>()))
            })
            .collect();
        let base = fit_rate(&samples, RateModel::Log2Corrected).unwrap();
        let scaled: Vec<(f64, f64)> = samples.iter().map(|&(t, v)| (t, 17.0 * v)).collect();
        let fit2 = fit_rate(&scaled, RateModel::Log2Corrected).unwrap();
        assert!((base.slope - fit2.slope).abs() < 1e-12);
        assert!((fit2.intercept - base.intercept - 17.0f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn fit_rate_degenerate() {
        assert_eq!(
            fit_rate(&[(2.0, 1.0), (4.0, 0.5)], RateModel::RawT).unwrap_err(),
            MetricsError::DegenerateDesign
        );
        assert_eq!(
            fit_rate(&[(2.0, 1.0), (2.0, 0.5), (2.0, 0.25)], RateModel::RawT).unwrap_err(),
            MetricsError::DegenerateDesign
        );
    }
}
