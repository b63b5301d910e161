// scratch: time run_rate_study with small replication counts
use rbmset::experiments::*;
use rbmset::metrics::RateModel;
use rbmset::sim::DiffusionSpec;
use std::time::Instant;

fn main() {
    for reps in [1usize, 2] {
        let cfg = ExperimentConfig {
            domain: rbmset::domains::DomainDescriptor::Disk { center: [0.0, 0.0], radius: 1.0 },
            diffusion: DiffusionSpec::rbm(),
            t_grid: vec![2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0],
            h: 1e-3,
            replications: reps,
            base_seed: 42,
            estimator: EstimatorChoice::Sausage { eps: EpsRule::Rate { c: 1.0 } },
            metrics: vec![MetricKind::DH],
            cell_size: 0.02,
            x0: None,
            boundary_samples: 4000,
            interior_cell: Some(0.004),
            rate_model: RateModel::Log2Corrected,
        };
        let t0 = Instant::now();
        let report = run_rate_study(&cfg).unwrap();
        println!("reps={reps}: {:?} rows={}", t0.elapsed(), report.rows.len());
    }
}
