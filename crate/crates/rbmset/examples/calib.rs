// scratch calibration probe; not part of the deliverable test suite
use rbmset::domains::Domain;
use rbmset::experiments::*;
use rbmset::mask::GridMask;
use rbmset::metrics::{fit_rate, RateModel};
use rbmset::sim::{occupancy, simulate, DiffusionSpec};

fn main() {
    let which = std::env::args().nth(1).unwrap_or_default();
    if which.contains('1') { crit1(); }
    if which.contains('2') { crit2(); }
    if which.contains('3') { crit3(); }
}

fn crit1() {
    let cfg = ExperimentConfig {
        domain: rbmset::domains::DomainDescriptor::Disk { center: [0.0, 0.0], radius: 1.0 },
        diffusion: DiffusionSpec::rbm(),
        t_grid: vec![2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0],
        h: 1e-3,
        replications: 20,
        base_seed: 42,
        estimator: EstimatorChoice::Sausage { eps: EpsRule::Rate { c: 1.0 } },
        metrics: vec![MetricKind::DH],
        cell_size: 0.02,
        x0: None,
        boundary_samples: 4000,
        interior_cell: Some(0.004),
        rate_model: RateModel::Log2Corrected,
    };
    let t0 = std::time::Instant::now();
    let report = run_rate_study(&cfg).unwrap();
    println!("crit1 runtime: {:?}", t0.elapsed());
    for &t in &cfg.t_grid {
        let vals: Vec<f64> = report.rows.iter().filter(|r| r.t == t).map(|r| r.value).collect();
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        let gm = (vals.iter().map(|v| v.ln()).sum::<f64>() / vals.len() as f64).exp();
        println!("T={t:7.1}  mean_dH={mean:.5}  geo_mean={gm:.5}");
    }
    let samples: Vec<(f64,f64)> = report.rows.iter().map(|r| (r.t, r.value)).collect();
    let corr = fit_rate(&samples, RateModel::Log2Corrected).unwrap();
    let raw  = fit_rate(&samples, RateModel::RawT).unwrap();
    println!("log2_corrected slope = {:.4} (r2={:.3})", corr.slope, corr.r_squared);
    println!("raw_T slope         = {:.4} (r2={:.3})", raw.slope, raw.r_squared);
}

fn crit2() {
    let cfg = ExperimentConfig {
        domain: rbmset::domains::DomainDescriptor::CrookedEggMinusDisk { hole_center: [0.05,0.6], hole_radius: 0.15 },
        diffusion: DiffusionSpec::rbm(),
        t_grid: vec![10.0],
        h: 1e-3,
        replications: 20,
        base_seed: 1000,
        estimator: EstimatorChoice::Sausage { eps: EpsRule::Fixed { value: 0.04 } },
        metrics: vec![MetricKind::DMu],
        cell_size: 0.002,
        x0: None,
        boundary_samples: 2000,
        interior_cell: None,
        rate_model: RateModel::Log2Corrected,
    };
    let t0 = std::time::Instant::now();
    let report = run_rate_study(&cfg).unwrap();
    let domain = Domain::crooked_egg();
    let mu_s = domain.rasterize(0.002).unwrap().area();
    println!("crit2 runtime: {:?}, mu(S)={mu_s:.5}", t0.elapsed());
    let mut ok = 0;
    for r in &report.rows {
        let rel = r.value / mu_s;
        if rel < 0.05 { ok += 1; }
        println!("rep {:2}  d_mu={:.5}  rel={:.4}", r.replicate, r.value, rel);
    }
    println!("pass {ok}/20 at rel<0.05");
}

fn crit3() {
    for h in [1e-3, 4e-3, 1e-2] {
        let d = Domain::unit_square();
        let t0 = std::time::Instant::now();
        let traj = simulate(&d, &DiffusionSpec::rbm(), rbmset::geom::Point2::new(0.5,0.5), 1_000_000.0*h, h, 7).unwrap();
        let occ = occupancy(&traj, &d, 0.1, 100_000).unwrap();
        let support = GridMask::from_predicate(occ.geom, |p| d.contains(p));
        println!("h={h}: max rel dev = {:.4}  ({:?})", occ.max_rel_deviation(&support), t0.elapsed());
    }
}
