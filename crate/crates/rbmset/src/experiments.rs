//! Monte Carlo experiment harness: seeded rate studies over a grid of
//! horizons, plus canned figure recipes. Reports are deterministic byte
//! for byte given the same configuration.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domains::{Domain, DomainDescriptor, DomainError};
use crate::estimators::{alpha_hull, alpha_hull_oracle_on, sausage};
use crate::export::SvgScene;
use crate::geom::grid_index::GridIndex;
use crate::geom::Point2;
use crate::ingest::write_trajectory_csv_file;
use crate::mask::{GridGeom, GridMask};
use crate::metrics::{fit_rate, RateFit, RateModel};
use crate::sim::{occupancy, simulate, DiffusionSpec, SimError, Trajectory};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Smoothing-radius rule for the sausage estimator.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum EpsRule {
    Fixed { value: f64 },
    /// ε_T = c·(log(T)²/T)^{1/2}, the d = 2 rate prescription.
    Rate { c: f64 },
}

impl EpsRule {
    pub fn eps_at(&self, t: f64) -> f64 {
        match self {
            EpsRule::Fixed { value } => *value,
            EpsRule::Rate { c } => {
                let lt = t.ln();
                c * (lt * lt / t).sqrt().max(1e-9)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EstimatorChoice {
    AlphaHull { r: f64 },
    Sausage { eps: EpsRule },
}

impl EstimatorChoice {
    fn label(&self) -> &'static str {
        match self {
            EstimatorChoice::AlphaHull { .. } => "alpha_hull",
            EstimatorChoice::Sausage { .. } => "sausage",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    DH,
    DMu,
    Perimeter,
}

impl MetricKind {
    fn name(&self) -> &'static str {
        match self {
            MetricKind::DH => "d_h",
            MetricKind::DMu => "d_mu",
            MetricKind::Perimeter => "perimeter",
        }
    }
}

fn default_boundary_samples() -> usize {
    2000
}

fn default_rate_model() -> RateModel {
    RateModel::Log2Corrected
}

/// Everything a rate study needs; JSON-serializable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub domain: DomainDescriptor,
    #[serde(default = "DiffusionSpec::rbm")]
    pub diffusion: DiffusionSpec,
    pub t_grid: Vec<f64>,
    pub h: f64,
    pub replications: usize,
    pub base_seed: u64,
    pub estimator: EstimatorChoice,
    pub metrics: Vec<MetricKind>,
    pub cell_size: f64,
    #[serde(default)]
    pub x0: Option<[f64; 2]>,
    #[serde(default = "default_boundary_samples")]
    pub boundary_samples: usize,
    #[serde(default)]
    pub interior_cell: Option<f64>,
    #[serde(default = "default_rate_model")]
    pub rate_model: RateModel,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.t_grid.is_empty() {
            return Err(ExperimentError::InvalidConfig("t_grid is empty".into()));
        }
        if self.t_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ExperimentError::InvalidConfig(
                "t_grid must be strictly ascending".into(),
            ));
        }
        if self.replications == 0 {
            return Err(ExperimentError::InvalidConfig("replications must be ≥ 1".into()));
        }
        if !(self.h > 0.0) || !(self.cell_size > 0.0) {
            return Err(ExperimentError::InvalidConfig("h and cell_size must be > 0".into()));
        }
        Ok(())
    }

    pub fn from_json_file(path: &Path) -> Result<ExperimentConfig, ExperimentError> {
        let text = fs::read_to_string(path)?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)
            .map_err(|e| ExperimentError::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// FNV-1a hash of the canonical JSON, for provenance lines.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        let mut h: u64 = 0xcbf29ce484222325;
        for b in text.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        format!("{h:016x}")
    }
}

/// One metric evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub t: f64,
    pub replicate: usize,
    pub seed: u64,
    pub metric: &'static str,
    pub value: f64,
    pub estimator: &'static str,
    pub param: f64,
}

#[derive(Debug, Serialize)]
pub struct ExperimentReport {
    pub rows: Vec<ReportRow>,
    /// metric name → fit (absent when fewer than 3 distinct horizons)
    pub fits: Vec<(String, Option<RateFit>)>,
    pub config_hash: String,
    pub rate_model: RateModel,
    /// set when some replicate failed; rows hold the partial results
    pub error: Option<String>,
}

impl ExperimentReport {
    /// Fixed-header CSV, rows ordered by (T, replicate, metric order).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("T,replicate,seed,metric,value,estimator,param\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{:.11e},{},{},{},{:.11e},{},{:.11e}\n",
                r.t, r.replicate, r.seed, r.metric, r.value, r.estimator, r.param
            ));
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> std::io::Result<()> {
        fs::write(path, self.to_csv())
    }

    pub fn fits_json(&self) -> serde_json::Value {
        let fits: serde_json::Map<String, serde_json::Value> = self
            .fits
            .iter()
            .map(|(name, fit)| {
                (
                    name.clone(),
                    match fit {
                        Some(f) => serde_json::to_value(f).unwrap(),
                        None => serde_json::Value::Null,
                    },
                )
            })
            .collect();
        serde_json::json!({
            "config_hash": self.config_hash,
            "rate_model": self.rate_model,
            "fits": fits,
            "error": self.error,
        })
    }
}

/// Dense domain discretization reused across replications.
struct DomainSample {
    index: GridIndex<f64>,
    points: Vec<Point2>,
}

fn domain_sample(domain: &Domain, boundary_samples: usize, interior_cell: Option<f64>) -> DomainSample {
    let bnd = domain.boundary_points(boundary_samples.max(1000));
    let mut total = 0.0;
    for w in bnd.windows(2) {
        total += w[0].dist(w[1]);
    }
    let spacing = (total / bnd.len() as f64).max(1e-9);
    let cell = interior_cell.unwrap_or(
        (4.0 * spacing).min(domain.bbox().width().min(domain.bbox().height()) / 8.0),
    );
    let mut points = domain.rasterize(cell).expect("valid cell").set_centers();
    points.extend(bnd);
    let index = GridIndex::build(&points).expect("nonempty");
    DomainSample { index, points }
}

fn hausdorff_points_vs_sample(points: &[Point2], sample: &DomainSample) -> f64 {
    let traj_index = GridIndex::build(points).expect("nonempty");
    let d1 = sample
        .points
        .par_iter()
        .map(|&p| traj_index.nearest_dist(p))
        .reduce(|| 0.0, f64::max);
    let d2 = points
        .iter()
        .map(|&p| sample.index.nearest_dist(p))
        .fold(0.0f64, f64::max);
    d1.max(d2)
}

/// Mask of the sausage on a fixed grid (cell center within eps of a point).
pub fn sausage_mask_on(points: &[Point2], eps: f64, geom: GridGeom) -> GridMask {
    let index = GridIndex::build(points).expect("nonempty");
    GridMask::from_predicate(geom, |c| index.any_within(c, eps))
}

/// Run the full rate study described by `config`.
pub fn run_rate_study(config: &ExperimentConfig) -> Result<ExperimentReport, ExperimentError> {
    config.validate()?;
    let domain = Domain::from_descriptor(&config.domain)?;
    let x0 = config
        .x0
        .map(|p| Point2::new(p[0], p[1]))
        .unwrap_or_else(|| domain.interior_anchor());
    if !domain.contains(x0) {
        return Err(ExperimentError::Sim(SimError::StartOutsideDomain));
    }
    let t_max = *config.t_grid.last().unwrap();

    let wants_dh = config.metrics.contains(&MetricKind::DH);
    let wants_dmu = config.metrics.contains(&MetricKind::DMu);

    let sample = if wants_dh {
        Some(domain_sample(&domain, config.boundary_samples, config.interior_cell))
    } else {
        None
    };
    // Shared grid for d_μ masks, inflated so the sausage never clips.
    let (mask_geom, domain_mask) = if wants_dmu {
        let max_eps = match config.estimator {
            EstimatorChoice::Sausage { eps } => config
                .t_grid
                .iter()
                .map(|&t| eps.eps_at(t))
                .fold(0.0f64, f64::max),
            EstimatorChoice::AlphaHull { .. } => 0.0,
        };
        let geom = GridGeom::covering(
            domain.bbox().inflate(max_eps + 2.0 * config.cell_size),
            config.cell_size,
        );
        let mask = domain.rasterize_on(geom);
        (Some(geom), Some(mask))
    } else {
        (None, None)
    };

    type RepResult = Result<Vec<ReportRow>, String>;
    let per_rep: Vec<RepResult> = (0..config.replications)
        .into_par_iter()
        .map(|rep| {
            let seed = config.base_seed + rep as u64;
            let traj = simulate(&domain, &config.diffusion, x0, t_max, config.h, seed)
                .map_err(|e| format!("replicate {rep}: {e}"))?;
            let mut rows = Vec::new();
            // estimators are materialized lazily per metric: d_h needs the
            // points only, d_mu a distance-threshold mask, and only the
            // perimeter metric pays for the exact arc decomposition
            for &t in &config.t_grid {
                let n_points = (t / config.h).floor() as usize + 1;
                let prefix = &traj.points[..n_points.min(traj.points.len())];
                let param = match config.estimator {
                    EstimatorChoice::AlphaHull { r } => r,
                    EstimatorChoice::Sausage { eps } => eps.eps_at(t),
                };
                for metric in &config.metrics {
                    let value = match metric {
                        MetricKind::DH => {
                            hausdorff_points_vs_sample(prefix, sample.as_ref().unwrap())
                        }
                        MetricKind::DMu => {
                            let geom = mask_geom.unwrap();
                            let est_mask = match config.estimator {
                                EstimatorChoice::AlphaHull { .. } => {
                                    alpha_hull_oracle_on(prefix, param, geom)
                                        .map_err(|e| e.to_string())?
                                }
                                EstimatorChoice::Sausage { .. } => {
                                    sausage_mask_on(prefix, param, geom)
                                }
                            };
                            crate::metrics::dmu_masks(&est_mask, domain_mask.as_ref().unwrap())
                                .map_err(|e| e.to_string())?
                        }
                        MetricKind::Perimeter => match config.estimator {
                            EstimatorChoice::AlphaHull { .. } => alpha_hull(prefix, param)
                                .map_err(|e| e.to_string())?
                                .perimeter(true),
                            EstimatorChoice::Sausage { .. } => sausage(prefix, param)
                                .map_err(|e| e.to_string())?
                                .boundary_length(),
                        },
                    };
                    rows.push(ReportRow {
                        t,
                        replicate: rep,
                        seed,
                        metric: metric.name(),
                        value,
                        estimator: config.estimator.label(),
                        param,
                    });
                }
            }
            Ok(rows)
        })
        .collect();

    let mut rows: Vec<ReportRow> = Vec::new();
    let mut error = None;
    for r in per_rep {
        match r {
            Ok(mut v) => rows.append(&mut v),
            Err(e) => {
                error = Some(e);
            }
        }
    }
    rows.sort_by(|a, b| {
        a.t.partial_cmp(&b.t)
            .unwrap()
            .then(a.replicate.cmp(&b.replicate))
            .then(a.metric.cmp(b.metric))
    });

    let distinct_t = config.t_grid.len();
    let mut fits = Vec::new();
    for metric in &config.metrics {
        let samples: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.metric == metric.name())
            .map(|r| (r.t, r.value))
            .collect();
        let fit = if distinct_t >= 3 {
            fit_rate(&samples, config.rate_model).ok()
        } else {
            None
        };
        fits.push((metric.name().to_string(), fit));
    }

    Ok(ExperimentReport {
        rows,
        fits,
        config_hash: config.hash(),
        rate_model: config.rate_model,
        error,
    })
}

/// Canned figure recipes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[clap(rename_all = "kebab-case")]
pub enum FigureRecipe {
    /// sausage boundary at N ∈ {1000, 5000, 10000}, ε = 0.04
    Rbm2,
    /// hull (r = 0.1) for N = 10000 and decimations to 2000 and 500
    Rbm3,
    /// occupancy heat map of the reflected Brownian motion in the square
    Stationary,
    /// occupancy heat map under a constant drift
    DriftDemo,
}

/// Regenerate a simulation figure set; returns the created files.
pub fn run_figure(
    recipe: FigureRecipe,
    seed: u64,
    out_dir: &Path,
) -> Result<Vec<PathBuf>, ExperimentError> {
    fs::create_dir_all(out_dir)?;
    let mut created = Vec::new();
    match recipe {
        FigureRecipe::Rbm2 | FigureRecipe::Rbm3 => {
            let domain = Domain::crooked_egg();
            let h = 0.001;
            let traj = simulate(&domain, &DiffusionSpec::rbm(), domain.interior_anchor(), 10.0, h, seed)?;
            let geom = GridGeom::covering(domain.bbox().inflate(0.05), 0.002);
            let domain_mask = domain.rasterize_on(geom);
            let mu_s = domain_mask.area();
            let sample = domain_sample(&domain, 2000, None);

            let mut csv = String::from("variant,n_points,metric,value\n");
            let variants: Vec<(String, Trajectory)> = match recipe {
                FigureRecipe::Rbm2 => [1000usize, 5000, 10000]
                    .into_iter()
                    .map(|n| (format!("n{n}"), traj.prefix(n + 1)))
                    .collect(),
                _ => [1usize, 5, 20]
                    .into_iter()
                    .map(|k| (format!("every{k}"), crate::sim::decimate(&traj, k)))
                    .collect(),
            };
            for (name, part) in &variants {
                let mut scene = SvgScene::new(domain.bbox());
                scene.add_domain(&domain);
                scene.add_trajectory(part);
                let (dmu, boundary_len) = match recipe {
                    FigureRecipe::Rbm2 => {
                        let u = sausage(&part.points, 0.04).expect("points");
                        scene.add_union_boundary(&u);
                        let m = sausage_mask_on(&part.points, 0.04, geom);
                        (
                            crate::metrics::dmu_masks(&m, &domain_mask).unwrap(),
                            u.boundary_length(),
                        )
                    }
                    _ => {
                        let hull = alpha_hull(&part.points, 0.1).expect("points");
                        scene.add_hull_boundary(&hull);
                        let m = alpha_hull_oracle_on(&part.points, 0.1, geom)
                            .expect("cell fits");
                        (
                            crate::metrics::dmu_masks(&m, &domain_mask).unwrap(),
                            hull.perimeter(true),
                        )
                    }
                };
                let dh = hausdorff_points_vs_sample(&part.points, &sample);
                let file = out_dir.join(format!("{}_{name}.svg", recipe_tag(recipe)));
                scene.write(&file)?;
                created.push(file);
                csv.push_str(&format!(
                    "{name},{},d_h,{dh:.11e}\n{name},{},d_mu_rel,{:.11e}\n{name},{},boundary_length,{boundary_len:.11e}\n",
                    part.points.len(),
                    part.points.len(),
                    dmu / mu_s,
                    part.points.len(),
                ));
            }
            let file = out_dir.join(format!("{}_metrics.csv", recipe_tag(recipe)));
            fs::write(&file, csv)?;
            created.push(file);
        }
        FigureRecipe::Stationary | FigureRecipe::DriftDemo => {
            let domain = Domain::unit_square();
            let spec = match recipe {
                FigureRecipe::Stationary => DiffusionSpec::rbm(),
                _ => DiffusionSpec::constant_drift(0.5, 0.0),
            };
            let traj = simulate(&domain, &spec, Point2::new(0.5, 0.5), 1000.0, 0.001, seed)?;
            let occ = occupancy(&traj, &domain, 0.1, 100_000)?;
            let mut scene = SvgScene::new(domain.bbox());
            scene.add_heatmap(&occ);
            let file = out_dir.join(format!("{}.svg", recipe_tag(recipe)));
            scene.write(&file)?;
            created.push(file);
            let mut csv = String::from("i,j,count\n");
            for j in 0..occ.geom.height {
                for i in 0..occ.geom.width {
                    csv.push_str(&format!("{i},{j},{}\n", occ.counts[j * occ.geom.width + i]));
                }
            }
            let file = out_dir.join(format!("{}_occupancy.csv", recipe_tag(recipe)));
            fs::write(&file, csv)?;
            created.push(file);
            let file = out_dir.join(format!("{}_trajectory.csv", recipe_tag(recipe)));
            write_trajectory_csv_file(&traj.prefix(10_001), &file)
                .map_err(|e| ExperimentError::InvalidConfig(e.to_string()))?;
            created.push(file);
        }
    }
    Ok(created)
}

fn recipe_tag(r: FigureRecipe) -> &'static str {
    match r {
        FigureRecipe::Rbm2 => "sausage_growth",
        FigureRecipe::Rbm3 => "hull_decimation",
        FigureRecipe::Stationary => "stationary",
        FigureRecipe::DriftDemo => "drift_demo",
    }
}

/// Write a report (and fits) to disk; used by the CLI and tests.
pub fn write_report(
    report: &ExperimentReport,
    csv_path: &Path,
    fits_path: Option<&Path>,
) -> Result<(), ExperimentError> {
    report.write_csv(csv_path)?;
    if let Some(p) = fits_path {
        let mut f = fs::File::create(p)?;
        writeln!(f, "{}", serde_json::to_string_pretty(&report.fits_json()).unwrap())?;
    }
    Ok(())
}
