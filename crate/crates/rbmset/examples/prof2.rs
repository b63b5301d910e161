// scratch: time one criterion-1 replicate piece by piece
use rbmset::domains::Domain;
use rbmset::geom::grid_index::GridIndex;
use rbmset::geom::Point2;
use rbmset::sim::{simulate, DiffusionSpec};
use std::time::Instant;

fn main() {
    let d = Domain::unit_disk();
    let traj = simulate(&d, &DiffusionSpec::rbm(), Point2::new(0.0, 0.0), 256.0, 1e-3, 42).unwrap();
    let mut sample = d.rasterize(0.004).unwrap().set_centers();
    sample.extend(d.boundary_points(4000));
    let sample_index = GridIndex::build(&sample).unwrap();

    for &t in &[2.0f64, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0] {
        let n = (t / 1e-3) as usize + 1;
        let prefix = &traj.points[..n];
        let t0 = Instant::now();
        let pidx = GridIndex::build(prefix).unwrap();
        let t_build = t0.elapsed();
        let t0 = Instant::now();
        let mut d1: f64 = 0.0;
        for p in &sample {
            d1 = d1.max(pidx.nearest_dist(*p));
        }
        let t_d1 = t0.elapsed();
        let t0 = Instant::now();
        let mut d2: f64 = 0.0;
        for p in prefix {
            d2 = d2.max(sample_index.nearest_dist(*p));
        }
        let t_d2 = t0.elapsed();
        println!("T={t:6.1} N={n:7}: build {t_build:?}  d1 {t_d1:?}  d2 {t_d2:?}  dH={:.4}", d1.max(d2));
    }
}
