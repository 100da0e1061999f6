use phi4lace::lattice::Coupling;
use phi4lace::mc::{critical_scan, Schedule};
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let sweeps: usize = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(60_000);
    let side: usize = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(6);
    let coupling = Coupling::nearest_neighbor(5, 0.1).unwrap();
    let schedule = Schedule::new(sweeps, 4000, 1).unwrap();
    let offsets = [0.015, 0.05, 0.08, 0.12];
    let centers = [(0.0, 1.0), (0.1, 0.9462), (0.2, 0.9008), (0.4, 0.8332)];
    let mut deltas = Vec::new();
    for (lambda, center) in centers {
        let t0 = Instant::now();
        let grid: Vec<f64> = offsets.iter().map(|o| center + o).collect();
        let rep = critical_scan(&coupling, lambda, &grid, &[side], schedule, 77, 2).unwrap();
        println!(
            "lambda={lambda}: mu_c = {:.5} +/- {:.5}, phi2 = {:.4} +/- {:.4}, delta = {:.5} +/- {:.5}, chi_inv(min mu) = {:.5} [{:.0?}]",
            rep.mu_c, rep.mu_c_err, rep.phi2_near_mu_c.mean, rep.phi2_near_mu_c.stderr,
            rep.delta, rep.delta_err,
            rep.points[0].chi_inv.mean,
            t0.elapsed()
        );
        if lambda > 0.0 { deltas.push((lambda, rep.delta)); }
        for p in &rep.points {
            println!("   mu={:.4} chi={:.3}+/-{:.3} chi_inv={:.5}+/-{:.5} phi2={:.4}", p.mu, p.susceptibility.mean, p.susceptibility.stderr, p.chi_inv.mean, p.chi_inv.stderr, p.phi2.mean);
        }
    }
    for (l, d) in &deltas { println!("lambda {l}: delta = {d:.6}"); }
}
