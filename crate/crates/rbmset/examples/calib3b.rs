// scratch: decompose criterion-3 deviation into edge/corner/interior cells
use rbmset::domains::Domain;
use rbmset::geom::Point2;
use rbmset::sim::{occupancy, simulate, DiffusionSpec};

fn main() {
    let d = Domain::unit_square();
    for (h, seed) in [(1e-3, 7u64), (1e-3, 8), (1e-2, 7)] {
        let traj = simulate(&d, &DiffusionSpec::rbm(), Point2::new(0.5, 0.5), 1_000_000.0 * h, h, seed).unwrap();
        let occ = occupancy(&traj, &d, 0.1, 100_000).unwrap();
        let mean = occ.counts.iter().sum::<u64>() as f64 / 100.0;
        let mut corner: Vec<f64> = vec![];
        let mut edge: Vec<f64> = vec![];
        let mut interior: Vec<f64> = vec![];
        for j in 0..10 {
            for i in 0..10 {
                let v = occ.counts[j * 10 + i] as f64 / mean - 1.0;
                let on_i = i == 0 || i == 9;
                let on_j = j == 0 || j == 9;
                if on_i && on_j { corner.push(v) }
                else if on_i || on_j { edge.push(v) }
                else { interior.push(v) }
            }
        }
        let mx = |v: &Vec<f64>| v.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        let mean_of = |v: &Vec<f64>| v.iter().sum::<f64>() / v.len() as f64;
        println!("h={h} seed={seed}: corner mean={:+.3} max|.|={:.3}; edge mean={:+.3} max={:.3}; interior mean={:+.3} max={:.3}",
            mean_of(&corner), mx(&corner), mean_of(&edge), mx(&edge), mean_of(&interior), mx(&interior));
        // theory: edge-cell excess ≈ sqrt(h)·0.3989/0.1, corners double
        println!("   atom prediction: edge {:+.3}, corner {:+.3}", h.sqrt()*0.3989/0.1, 2.0*h.sqrt()*0.3989/0.1);
    }
}
