// scratch: decompose d_mu into outer spill and inner deficit
use rbmset::domains::Domain;
use rbmset::experiments::sausage_mask_on;
use rbmset::mask::GridGeom;
use rbmset::sim::{simulate, DiffusionSpec};

fn main() {
    let d = Domain::crooked_egg();
    let geom = GridGeom::covering(d.bbox().inflate(0.04 + 0.004), 0.002);
    let dm = d.rasterize_on(geom);
    let mu_s = dm.area();
    // boundary length estimates via dense polylines
    let bnd = d.boundary_points(20000);
    let mut per = 0.0;
    for w in bnd.windows(2) { let e = w[0].dist(w[1]); if e < 0.01 { per += e; } }
    println!("mu(S)={mu_s:.5}, boundary length ≈ {per:.4}");
    for seed in [1000u64, 1001, 1002] {
        let traj = simulate(&d, &DiffusionSpec::rbm(), d.interior_anchor(), 10.0, 1e-3, seed).unwrap();
        let sm = sausage_mask_on(&traj.points, 0.04, geom);
        let cell2 = geom.cell * geom.cell;
        let mut outer = 0usize; let mut inner = 0usize;
        for k in 0..geom.len() {
            match (sm.bits[k], dm.bits[k]) {
                (true, false) => outer += 1,
                (false, true) => inner += 1,
                _ => {}
            }
        }
        println!("seed {seed}: mu(D\\S)={:.5}  mu(S\\D)={:.5}  total rel={:.4}",
            outer as f64 * cell2, inner as f64 * cell2,
            (outer + inner) as f64 * cell2 / mu_s);
    }
}
