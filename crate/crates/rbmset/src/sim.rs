//! Euler scheme with projection reflection for reflected diffusions.
//!
//! Each proposal step `X + b(X)·h + σ(X)·√h·ξ` is pushed back to the
//! nearest point of the domain whenever it exits, which discretizes the
//! Skorohod reflection along the inward normal. The boundary local time is
//! not simulated; `l_proxy` accumulates the projection displacements as a
//! monitoring quantity only.

use std::fmt;
use std::sync::Arc as StdArc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domains::{Domain, DomainError};
use crate::geom::Point2;
use crate::mask::{GridGeom, GridMask};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("start point lies outside the domain")]
    StartOutsideDomain,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Domain(#[from] DomainError),
}

type DriftFn = StdArc<dyn Fn(Point2) -> Point2 + Send + Sync>;
type SigmaFn = StdArc<dyn Fn(Point2) -> [[f64; 2]; 2] + Send + Sync>;

/// Drift/diffusion coefficients. The reflected Brownian motion is the
/// special case b ≡ 0, σ ≡ identity.
#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum DiffusionSpec {
    Rbm,
    ConstantDrift { b: [f64; 2] },
    /// State-dependent coefficients supplied as closures (not serializable;
    /// constructed through [`DiffusionSpec::custom`]).
    #[serde(skip)]
    Custom {
        label: String,
        drift: DriftFn,
        sigma: SigmaFn,
    },
}

impl fmt::Debug for DiffusionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiffusionSpec::Rbm => write!(f, "Rbm"),
            DiffusionSpec::ConstantDrift { b } => write!(f, "ConstantDrift({}, {})", b[0], b[1]),
            DiffusionSpec::Custom { label, .. } => write!(f, "Custom({label})"),
        }
    }
}

impl DiffusionSpec {
    pub fn rbm() -> Self {
        DiffusionSpec::Rbm
    }

    pub fn constant_drift(bx: f64, by: f64) -> Self {
        DiffusionSpec::ConstantDrift { b: [bx, by] }
    }

    pub fn custom(
        label: impl Into<String>,
        drift: impl Fn(Point2) -> Point2 + Send + Sync + 'static,
        sigma: impl Fn(Point2) -> [[f64; 2]; 2] + Send + Sync + 'static,
    ) -> Self {
        DiffusionSpec::Custom {
            label: label.into(),
            drift: StdArc::new(drift),
            sigma: StdArc::new(sigma),
        }
    }

    pub fn label(&self) -> String {
        match self {
            DiffusionSpec::Rbm => "rbm".into(),
            DiffusionSpec::ConstantDrift { b } => format!("drift({},{})", b[0], b[1]),
            DiffusionSpec::Custom { label, .. } => label.clone(),
        }
    }

    #[inline]
    fn drift(&self, p: Point2) -> Point2 {
        match self {
            DiffusionSpec::Rbm => Point2::new(0.0, 0.0),
            DiffusionSpec::ConstantDrift { b } => Point2::new(b[0], b[1]),
            DiffusionSpec::Custom { drift, .. } => drift(p),
        }
    }

    #[inline]
    fn sigma_apply(&self, p: Point2, v: Point2) -> Point2 {
        match self {
            DiffusionSpec::Rbm => v,
            DiffusionSpec::ConstantDrift { .. } => v,
            DiffusionSpec::Custom { sigma, .. } => {
                let m = sigma(p);
                Point2::new(m[0][0] * v.x + m[0][1] * v.y, m[1][0] * v.x + m[1][1] * v.y)
            }
        }
    }
}

/// Discretized trajectory with uniform time step.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub t0: f64,
    pub h: f64,
    pub points: Vec<Point2>,
    /// Seed used to generate the path; `None` for ingested tracks.
    pub seed: Option<u64>,
    /// Steps at which the projection displaced the proposal.
    pub reflections: u64,
    /// Cumulative projection displacement (crude local-time proxy).
    pub l_proxy: f64,
    /// Largest deviation from the uniform step, for ingested tracks.
    pub max_gap_skew: f64,
}

impl Trajectory {
    pub fn n_steps(&self) -> usize {
        self.points.len().saturating_sub(1)
    }

    pub fn duration(&self) -> f64 {
        self.n_steps() as f64 * self.h
    }

    pub fn time_at(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.h
    }

    /// First `keep` points as a trajectory (prefix in time).
    pub fn prefix(&self, keep: usize) -> Trajectory {
        let keep = keep.clamp(1, self.points.len());
        Trajectory {
            t0: self.t0,
            h: self.h,
            points: self.points[..keep].to_vec(),
            seed: self.seed,
            reflections: self.reflections,
            l_proxy: self.l_proxy,
            max_gap_skew: self.max_gap_skew,
        }
    }
}

/// Euler scheme with projection reflection.
///
/// `N = floor(T/h)` steps of `X ← Π_S(X + b(X)h + σ(X)√h ξ)` from `x0`;
/// the returned trajectory has `N + 1` points and is bit-reproducible for
/// a fixed `(domain, spec, x0, T, h, seed)`.
pub fn simulate(
    domain: &Domain,
    spec: &DiffusionSpec,
    x0: Point2,
    t_total: f64,
    h: f64,
    seed: u64,
) -> Result<Trajectory, SimError> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(SimError::InvalidParams(format!("step h={h} must be > 0")));
    }
    if !(t_total >= h) {
        return Err(SimError::InvalidParams(format!(
            "duration T={t_total} must be at least h={h}"
        )));
    }
    if !domain.contains(x0) {
        return Err(SimError::StartOutsideDomain);
    }
    let n = (t_total / h).floor() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sqrt_h = h.sqrt();
    let mut points = Vec::with_capacity(n + 1);
    points.push(x0);
    let mut x = x0;
    let mut reflections = 0u64;
    let mut l_proxy = 0.0f64;
    for _ in 0..n {
        let gx: f64 = rng.sample(StandardNormal);
        let gy: f64 = rng.sample(StandardNormal);
        let noise = spec.sigma_apply(x, Point2::new(gx * sqrt_h, gy * sqrt_h));
        let b = spec.drift(x);
        let proposal = Point2::new(x.x + b.x * h + noise.x, x.y + b.y * h + noise.y);
        x = if domain.contains(proposal) {
            proposal
        } else {
            let projected = domain.project_to_closure(proposal)?;
            reflections += 1;
            l_proxy += proposal.dist(projected);
            projected
        };
        points.push(x);
    }
    Ok(Trajectory {
        t0: 0.0,
        h,
        points,
        seed: Some(seed),
        reflections,
        l_proxy,
        max_gap_skew: 0.0,
    })
}

/// Keep every `keep_every`-th point (the first point always stays); the
/// step size is multiplied accordingly.
pub fn decimate(traj: &Trajectory, keep_every: usize) -> Trajectory {
    assert!(keep_every >= 1);
    Trajectory {
        t0: traj.t0,
        h: traj.h * keep_every as f64,
        points: traj.points.iter().copied().step_by(keep_every).collect(),
        seed: traj.seed,
        reflections: traj.reflections,
        l_proxy: traj.l_proxy,
        max_gap_skew: traj.max_gap_skew,
    }
}

/// Per-cell visit counts of a trajectory.
#[derive(Debug, Clone)]
pub struct OccupancyHistogram {
    pub geom: GridGeom,
    pub counts: Vec<u64>,
    pub recorded: u64,
}

impl OccupancyHistogram {
    /// Maximum relative deviation of per-cell counts from the uniform
    /// expectation, over the cells marked in `support`.
    pub fn max_rel_deviation(&self, support: &GridMask) -> f64 {
        assert!(support.geom.same_as(&self.geom));
        let cells: Vec<u64> = self
            .counts
            .iter()
            .zip(&support.bits)
            .filter(|(_, &b)| b)
            .map(|(&c, _)| c)
            .collect();
        if cells.is_empty() {
            return 0.0;
        }
        let mean = cells.iter().sum::<u64>() as f64 / cells.len() as f64;
        cells
            .iter()
            .map(|&c| (c as f64 - mean).abs() / mean)
            .fold(0.0, f64::max)
    }
}

/// Visit counts over a grid covering the domain, for trajectory points
/// with index ≥ `burn_in`.
pub fn occupancy(
    traj: &Trajectory,
    domain: &Domain,
    cell_size: f64,
    burn_in: usize,
) -> Result<OccupancyHistogram, SimError> {
    if burn_in >= traj.points.len() {
        return Err(SimError::InvalidParams(format!(
            "burn_in {burn_in} must be below the point count {}",
            traj.points.len()
        )));
    }
    let geom = GridGeom::covering(domain.bbox(), cell_size);
    let mut counts = vec![0u64; geom.len()];
    for p in &traj.points[burn_in..] {
        // trajectory points live inside the bbox; clamp edge hits
        let i = (((p.x - geom.origin.x) / geom.cell).floor() as isize)
            .clamp(0, geom.width as isize - 1) as usize;
        let j = (((p.y - geom.origin.y) / geom.cell).floor() as isize)
            .clamp(0, geom.height as isize - 1) as usize;
        counts[j * geom.width + i] += 1;
    }
    Ok(OccupancyHistogram {
        geom,
        counts,
        recorded: (traj.points.len() - burn_in) as u64,
    })
}
