// scratch: profile criterion-1 inner loop pieces
use rbmset::domains::Domain;
use rbmset::geom::grid_index::GridIndex;
use rbmset::geom::Point2;
use rbmset::sim::{simulate, DiffusionSpec};
use std::time::Instant;

fn main() {
    let d = Domain::unit_disk();
    let t0 = Instant::now();
    let traj = simulate(&d, &DiffusionSpec::rbm(), Point2::new(0.0, 0.0), 256.0, 1e-3, 42).unwrap();
    println!("simulate 256k steps: {:?}", t0.elapsed());

    let t0 = Instant::now();
    let mut sample = d.rasterize(0.004).unwrap().set_centers();
    sample.extend(d.boundary_points(4000));
    println!("domain sample build ({} pts): {:?}", sample.len(), t0.elapsed());

    let t0 = Instant::now();
    let sample_index = GridIndex::build(&sample).unwrap();
    println!("sample index build: {:?}", t0.elapsed());

    let t0 = Instant::now();
    let traj_index = GridIndex::build(&traj.points).unwrap();
    println!("traj index build (256k): {:?}", t0.elapsed());

    let t0 = Instant::now();
    let mut mx: f64 = 0.0;
    for p in sample.iter().take(20_000) {
        mx = mx.max(traj_index.nearest_dist(*p));
    }
    println!("20k sample->traj queries: {:?} (max {mx:.4})", t0.elapsed());

    let t0 = Instant::now();
    let mut mx2: f64 = 0.0;
    for p in traj.points.iter().take(20_000) {
        mx2 = mx2.max(sample_index.nearest_dist(*p));
    }
    println!("20k traj->sample queries: {:?} (max {mx2:.4})", t0.elapsed());

    // small prefix: holes are larger -> ring search longer?
    let prefix = &traj.points[..2001];
    let t0 = Instant::now();
    let pidx = GridIndex::build(prefix).unwrap();
    let mut mx3: f64 = 0.0;
    for p in sample.iter().take(20_000) {
        mx3 = mx3.max(pidx.nearest_dist(*p));
    }
    println!("20k sample->prefix(2k) queries: {:?} (max {mx3:.4})", t0.elapsed());
}
