//! Command-line interface: simulate, estimate, tune, metrics, experiment,
//! figure. Exit codes: 0 success, 1 usage error, 2 data/runtime error.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::domains::Domain;
use crate::estimators::{alpha_hull, is_connected, sausage};
use crate::experiments::{run_figure, run_rate_study, ExperimentConfig, FigureRecipe};
use crate::export::{geojson_hull, geojson_union, SvgScene, GEOJSON_CHORD_TOL};
use crate::geom::Point2;
use crate::ingest::{read_track_csv, write_trajectory_csv_file, ColumnMapping};
use crate::metrics::hausdorff_points;
use crate::sim::{simulate, DiffusionSpec};
use crate::tuning::{eps_connectivity, tune};

#[derive(Parser)]
#[command(
    name = "rbmset",
    about = "Support-set estimation from reflected-diffusion trajectories",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a reflected diffusion and write the trajectory CSV
    Simulate(SimulateArgs),
    /// Build an estimator from a trajectory CSV
    Estimate(EstimateArgs),
    /// Data-driven ε and r selection for a trajectory CSV
    Tune(TuneArgs),
    /// Distances between two point sets (and optionally a domain)
    Metrics(MetricsArgs),
    /// Run a seeded Monte Carlo rate study from a JSON config
    Experiment(ExperimentArgs),
    /// Regenerate a canned simulation figure set
    Figure(FigureArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// builtin name (disk | square | crooked-egg) or a descriptor JSON path
    #[arg(long, default_value = "crooked-egg")]
    domain: String,
    /// rbm, or drift:BX,BY
    #[arg(long, default_value = "rbm")]
    spec: String,
    #[arg(long, default_value_t = 10.0)]
    t: f64,
    #[arg(long, default_value_t = 0.001)]
    h: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// start point "x,y" (defaults to a deep interior point)
    #[arg(long)]
    x0: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long)]
    input: PathBuf,
    /// r-convex hull radius
    #[arg(long, conflicts_with = "sausage")]
    alpha: Option<f64>,
    /// sausage radius ε
    #[arg(long)]
    sausage: Option<f64>,
    /// normalize coordinates into the unit square before estimating
    #[arg(long, default_value_t = false)]
    normalize: bool,
    #[arg(long)]
    out_json: Option<PathBuf>,
    #[arg(long)]
    out_svg: Option<PathBuf>,
    #[arg(long)]
    out_geojson: Option<PathBuf>,
}

#[derive(Args)]
struct TuneArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 32)]
    grid: usize,
    #[arg(long, default_value_t = 2048)]
    hull_sample: usize,
    /// write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MetricsArgs {
    /// first point CSV (t,x,y)
    #[arg(long)]
    a: PathBuf,
    /// second point CSV
    #[arg(long)]
    b: Option<PathBuf>,
    /// optional domain (builtin or JSON path) for set-vs-domain distance
    #[arg(long)]
    domain: Option<String>,
    #[arg(long, default_value_t = 2000)]
    boundary_samples: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out_report: PathBuf,
    #[arg(long)]
    out_fits: Option<PathBuf>,
}

#[derive(Args)]
struct FigureArgs {
    #[arg(long, value_enum)]
    recipe: FigureRecipe,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value = "figures")]
    out_dir: PathBuf,
}

fn parse_domain(spec: &str) -> Result<Domain, String> {
    match spec {
        "disk" | "unit-disk" => Ok(Domain::unit_disk()),
        "square" | "unit-square" => Ok(Domain::unit_square()),
        "crooked-egg" | "egg" => Ok(Domain::crooked_egg()),
        path => Domain::from_json_file(Path::new(path)).map_err(|e| e.to_string()),
    }
}

fn parse_spec(text: &str) -> Result<DiffusionSpec, String> {
    if text == "rbm" {
        return Ok(DiffusionSpec::rbm());
    }
    if let Some(rest) = text.strip_prefix("drift:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 2 {
            return Err(format!("expected drift:BX,BY, got {text:?}"));
        }
        let bx: f64 = parts[0].parse().map_err(|e| format!("bad drift x: {e}"))?;
        let by: f64 = parts[1].parse().map_err(|e| format!("bad drift y: {e}"))?;
        return Ok(DiffusionSpec::constant_drift(bx, by));
    }
    Err(format!("unknown diffusion spec {text:?} (rbm | drift:BX,BY)"))
}

fn parse_point(text: &str) -> Result<Point2, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected x,y, got {text:?}"));
    }
    Ok(Point2::new(
        parts[0].trim().parse().map_err(|e| format!("bad x: {e}"))?,
        parts[1].trim().parse().map_err(|e| format!("bad y: {e}"))?,
    ))
}

fn emit(json: serde_json::Value, out: Option<&PathBuf>) -> Result<(), String> {
    let text = serde_json::to_string_pretty(&json).expect("serializable");
    match out {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| e.to_string()),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

/// Run the CLI on explicit arguments; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // help/version requests are successful exits
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Simulate(a) => {
            let domain = parse_domain(&a.domain)?;
            let spec = parse_spec(&a.spec)?;
            let x0 = match &a.x0 {
                Some(t) => parse_point(t)?,
                None => domain.interior_anchor(),
            };
            if a.h > 0.05 * domain.feature_scale() {
                eprintln!(
                    "warning: step h={} exceeds 5% of the domain feature scale {}; \
                     reflections may overshoot fine boundary features",
                    a.h,
                    domain.feature_scale()
                );
            }
            let traj = simulate(&domain, &spec, x0, a.t, a.h, a.seed).map_err(|e| e.to_string())?;
            write_trajectory_csv_file(&traj, &a.out).map_err(|e| e.to_string())?;
            eprintln!(
                "wrote {} points (reflections: {}, l_proxy: {:.6})",
                traj.points.len(),
                traj.reflections,
                traj.l_proxy
            );
            Ok(())
        }
        Command::Estimate(a) => {
            let traj = read_track_csv(&a.input, &ColumnMapping::default(), a.normalize)
                .map_err(|e| e.to_string())?;
            let bbox = crate::geom::BBox2::of_points(&traj.points).ok_or("empty trajectory")?;
            match (a.alpha, a.sausage) {
                (Some(r), None) => {
                    let hull = alpha_hull(&traj.points, r).map_err(|e| e.to_string())?;
                    let json = serde_json::json!({
                        "estimator": "alpha_hull",
                        "r": r,
                        "n_points": traj.points.len(),
                        "area": hull.area,
                        "perimeter": hull.perimeter(true),
                        "boundary_loop_count": hull.loop_count(),
                        "isolated_point_count": hull.isolated_points.len(),
                    });
                    emit(json, a.out_json.as_ref())?;
                    if let Some(svg) = &a.out_svg {
                        let mut scene = SvgScene::new(bbox);
                        scene.add_trajectory(&traj);
                        scene.add_hull_boundary(&hull);
                        scene.write(svg).map_err(|e| e.to_string())?;
                    }
                    if let Some(gj) = &a.out_geojson {
                        let v = geojson_hull(&hull, GEOJSON_CHORD_TOL);
                        std::fs::write(gj, serde_json::to_string_pretty(&v).unwrap())
                            .map_err(|e| e.to_string())?;
                    }
                    Ok(())
                }
                (None, Some(eps)) => {
                    let u = sausage(&traj.points, eps).map_err(|e| e.to_string())?;
                    let json = serde_json::json!({
                        "estimator": "sausage",
                        "eps": eps,
                        "n_points": traj.points.len(),
                        "area": u.area,
                        "boundary_length": u.boundary_length(),
                        "boundary_loop_count": u.boundary_loops().len(),
                        "component_count": u.component_count(),
                        "connected": is_connected(&u),
                    });
                    emit(json, a.out_json.as_ref())?;
                    if let Some(svg) = &a.out_svg {
                        let mut scene = SvgScene::new(bbox);
                        scene.add_trajectory(&traj);
                        scene.add_union_boundary(&u);
                        scene.write(svg).map_err(|e| e.to_string())?;
                    }
                    if let Some(gj) = &a.out_geojson {
                        let v = geojson_union(&u, GEOJSON_CHORD_TOL);
                        std::fs::write(gj, serde_json::to_string_pretty(&v).unwrap())
                            .map_err(|e| e.to_string())?;
                    }
                    Ok(())
                }
                _ => Err("choose exactly one of --alpha R or --sausage EPS".into()),
            }
        }
        Command::Tune(a) => {
            let traj = read_track_csv(&a.input, &ColumnMapping::default(), false)
                .map_err(|e| e.to_string())?;
            let report = tune(&traj.points, a.delta, a.seed, a.grid, a.hull_sample)
                .map_err(|e| e.to_string())?;
            emit(serde_json::to_value(&report).unwrap(), a.out.as_ref())
        }
        Command::Metrics(a) => {
            let ta = read_track_csv(&a.a, &ColumnMapping::default(), false)
                .map_err(|e| e.to_string())?;
            let mut json = serde_json::json!({
                "a": {
                    "n_points": ta.points.len(),
                    "eps_conn": eps_connectivity(&ta.points).ok(),
                }
            });
            if let Some(bpath) = &a.b {
                let tb = read_track_csv(bpath, &ColumnMapping::default(), false)
                    .map_err(|e| e.to_string())?;
                json["b"] = serde_json::json!({
                    "n_points": tb.points.len(),
                    "eps_conn": eps_connectivity(&tb.points).ok(),
                });
                json["hausdorff"] = serde_json::json!(
                    hausdorff_points(&ta.points, &tb.points).map_err(|e| e.to_string())?
                );
            }
            if let Some(dspec) = &a.domain {
                let domain = parse_domain(dspec)?;
                let v = crate::metrics::hausdorff_set_vs_domain(
                    crate::metrics::EstimatorSample::Points(&ta.points),
                    &domain,
                    a.boundary_samples,
                )
                .map_err(|e| e.to_string())?;
                json["d_h_a_vs_domain"] = serde_json::json!(v);
            }
            emit(json, a.out.as_ref())
        }
        Command::Experiment(a) => {
            let cfg = ExperimentConfig::from_json_file(&a.config).map_err(|e| e.to_string())?;
            let report = run_rate_study(&cfg).map_err(|e| e.to_string())?;
            crate::experiments::write_report(&report, &a.out_report, a.out_fits.as_deref())
                .map_err(|e| e.to_string())?;
            if let Some(err) = &report.error {
                return Err(format!("partial results written; a replicate failed: {err}"));
            }
            eprintln!(
                "wrote {} rows (config {})",
                report.rows.len(),
                report.config_hash
            );
            Ok(())
        }
        Command::Figure(a) => {
            let files = run_figure(a.recipe, a.seed, &a.out_dir).map_err(|e| e.to_string())?;
            for f in files {
                eprintln!("wrote {}", f.display());
            }
            Ok(())
        }
    }
}
