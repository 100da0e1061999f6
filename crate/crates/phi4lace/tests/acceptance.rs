//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! Criterion 8 runs for hours and is ignored by default:
//! `cargo test --test acceptance -- --ignored` runs it.

use phi4lace::bessel::green_bessel_nn;
use phi4lace::deconv::{self, PiSource};
use phi4lace::exact::{self, SpinGraph};
use phi4lace::green::{self, ZeroModePolicy};
use phi4lace::gs::{self, GsParams};
use phi4lace::lattice::{Coupling, StepDistribution, TorusGeometry};
use phi4lace::mc::{self, Schedule};
use std::time::Instant;

fn report(number: u32, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("[criterion {number:2}] {verdict}: {name} — {detail}");
    assert!(pass, "criterion {number} ({name}) failed: {detail}");
}

fn graph_suite() -> Vec<(f64, SpinGraph)> {
    let mut out = Vec::new();
    for j in [0.1, 0.5, 1.0] {
        for g in exact::connected_graph_suite(4, j) {
            out.push((j, g));
        }
    }
    out
}

#[test]
fn criterion_01_random_current_oracle_equivalence() {
    let t0 = Instant::now();
    let mut worst = 0.0f64;
    let mut systems = 0;
    for (_, graph) in graph_suite() {
        let spin = exact::spin_two_point(&graph).unwrap();
        let current = exact::current_two_point(&graph).unwrap();
        for (a, b) in spin.iter().zip(&current) {
            worst = worst.max((a - b).abs());
        }
        systems += 1;
    }
    let elapsed = t0.elapsed();
    let pass = worst <= 1e-12 && elapsed.as_secs_f64() < 10.0;
    report(
        1,
        "random-current oracle equivalence",
        pass,
        &format!("max |current − spin| = {worst:.2e} over {systems} systems in {elapsed:.2?}"),
    );
}

#[test]
fn criterion_02_lace_identity_depth_zero() {
    let t0 = Instant::now();
    let mut worst = f64::INFINITY;
    let mut checked = 0;
    for (_, graph) in graph_suite() {
        let rep = exact::lace_residual_check(&graph, 0).unwrap();
        worst = worst.min(rep.min_slack);
        checked += 1;
    }
    // the 2-site x N=2 block system with physical I and J
    let coupling = Coupling::nearest_neighbor(1, 0.3).unwrap();
    let params = GsParams::new(2.0, 1.0, coupling, 2).unwrap();
    let block = SpinGraph::gs_block_pair(&params, 0.3);
    let rep = exact::lace_residual_check(&block, 0).unwrap();
    worst = worst.min(rep.min_slack);
    checked += 1;

    let elapsed = t0.elapsed();
    let pass = worst >= -1e-12 && elapsed.as_secs_f64() < 30.0;
    report(
        2,
        "lace identity residual bound at depth zero",
        pass,
        &format!("min slack = {worst:.2e} over {checked} systems in {elapsed:.2?}"),
    );
}

#[test]
fn criterion_03_diagrammatic_cube_bound() {
    let t0 = Instant::now();
    let mut worst_slack = f64::INFINITY;
    let mut diag_exact = true;
    for (_, graph) in graph_suite() {
        let two_pt = exact::current_two_point(&graph).unwrap();
        let nv = graph.vertex_count();
        for root in 0..nv {
            let pi = exact::pi_zero(&graph, root).unwrap();
            if pi[root] != 1.0 {
                diag_exact = false;
            }
            for x in 0..nv {
                if x != root {
                    worst_slack = worst_slack.min(two_pt[root * nv + x].powi(3) - pi[x]);
                }
            }
        }
    }
    let elapsed = t0.elapsed();
    let pass = worst_slack >= -1e-12 && diag_exact && elapsed.as_secs_f64() < 30.0;
    report(
        3,
        "pi0 <= two-point cubed, pi0(o,o) = 1",
        pass,
        &format!("min cube slack = {worst_slack:.2e}, diagonal exact = {diag_exact}, {elapsed:.2?}"),
    );
}

#[test]
fn criterion_04_massless_green_amplitude() {
    let t0 = Instant::now();
    let amplitude = green::asymptotic_amplitude(5, 1.0).unwrap();
    let mut worst = 0.0f64;
    for n in [8i32, 10, 12, 16] {
        let x = [n, 0, 0, 0, 0];
        let value = green_bessel_nn(&x, 1.0, 26).unwrap();
        let rel = ((n as f64).powi(3) * value - amplitude).abs() / amplitude;
        worst = worst.max(rel);
    }
    let elapsed = t0.elapsed();
    let pass = worst <= 0.05 && elapsed.as_secs_f64() < 60.0;
    report(
        4,
        "free-space amplitude |x|^3 S_1(x) vs (5/2)Γ(3/2)π^{-5/2}",
        pass,
        &format!("worst relative deviation = {worst:.4} in {elapsed:.2?}"),
    );
}

#[test]
fn criterion_05_torus_sum_rule() {
    let mut worst = 0.0f64;
    for d in [4usize, 5] {
        let geom = TorusGeometry::new(d, 16).unwrap();
        let coupling = Coupling::nearest_neighbor(d, 0.1).unwrap();
        let step = StepDistribution::from_coupling(&coupling, 1.0).unwrap();
        for p in [0.3, 0.9, 0.99] {
            let table = green::green_torus_from_step(&step, &geom, p, ZeroModePolicy::Reject)
                .unwrap();
            worst = worst.max((table.sum() - 1.0 / (1.0 - p)).abs());
        }
    }
    let pass = worst <= 1e-10;
    report(
        5,
        "torus sum rule Σ S_p = 1/(1−p)",
        pass,
        &format!("worst |Σ S_p − 1/(1−p)| = {worst:.2e}"),
    );
}

#[test]
fn criterion_06_block_spin_single_site_convergence() {
    let t0 = Instant::now();
    let mut pass = true;
    let mut detail = String::new();
    for (lambda, mu) in [(1.0, 1.0), (0.5, 1.0)] {
        let coupling = Coupling::nearest_neighbor(5, 0.1).unwrap();
        let mut prev = [f64::INFINITY; 2];
        for n in [16u64, 64, 256, 1024] {
            let params = GsParams::new(lambda, mu, coupling.clone(), n).unwrap();
            let rows = gs::single_site_moments(&params, &[2, 4]).unwrap();
            for (slot, row) in prev.iter_mut().zip(&rows) {
                if row.difference >= *slot + 1e-12 {
                    pass = false;
                    detail = format!(
                        "order {} not decreasing at N={} for (λ,μ)=({lambda},{mu})",
                        row.order, row.n
                    );
                }
                *slot = row.difference;
            }
        }
    }
    let elapsed = t0.elapsed();
    if elapsed.as_secs_f64() >= 10.0 {
        pass = false;
        detail = format!("too slow: {elapsed:.2?}");
    }
    if pass {
        detail = format!("strictly decreasing moment gaps for both parameter sets in {elapsed:.2?}");
    }
    report(6, "single-site moments converge to quadrature", pass, &detail);
}

#[test]
fn criterion_07_finite_torus_schwinger_dyson() {
    let t0 = Instant::now();
    let coupling = Coupling::nearest_neighbor(5, 0.1).unwrap();
    let geom = TorusGeometry::new(5, 6).unwrap();
    let mu = coupling.jhat() + 0.5;
    let schedule = Schedule::new(100_000, 2_000, 1).unwrap();
    let displacements = [vec![0, 0, 0, 0, 0], vec![1, 0, 0, 0, 0]];
    let run = mc::run_chain(&coupling, 0.25, mu, &geom, schedule, 20240, 0, &displacements)
        .unwrap();

    let mut pass = true;
    let mut detail = String::new();
    for (x, est) in mc::sd_residual(&run) {
        let sigmas = est.mean.abs() / est.stderr;
        detail.push_str(&format!("r({x:?}) = {:.2e} ± {:.2e} ({sigmas:.2}σ); ", est.mean, est.stderr));
        if sigmas > 3.0 {
            pass = false;
        }
    }
    let (u4, u4_err) = mc::binder_u4(&run);
    detail.push_str(&format!("u4 = {u4:.3e} ± {u4_err:.1e}"));
    if u4 > 3.0 * u4_err {
        pass = false;
    }
    let elapsed = t0.elapsed();
    detail.push_str(&format!(" in {elapsed:.1?}"));
    if elapsed.as_secs() > 30 * 60 {
        pass = false;
    }
    report(7, "finite-torus Schwinger-Dyson residual and Lebowitz", pass, &detail);
}

/// Slow tier: full μ_c scan across λ with the power-law check of the
/// expansion defect. Runs for about two hours.
#[test]
#[ignore = "slow tier (runs for hours); use cargo test -- --ignored"]
fn criterion_08_mu_c_expansion() {
    let t0 = Instant::now();
    let coupling = Coupling::nearest_neighbor(5, 0.1).unwrap();
    let schedule = Schedule::new(1_200_000, 10_000, 1).unwrap();
    // the smallest offset is the ⟨φ²⟩ proxy point; the three larger ones
    // feed the linear χ^{-1} extrapolation
    let offsets = [0.010, 0.05, 0.08, 0.12];
    // grid centers: μ_c estimates from a pilot scan at moderate statistics
    let centers = [(0.0, 1.0), (0.1, 0.9478), (0.2, 0.8945), (0.4, 0.7915)];
    let sides = [4usize, 6];

    let mut reports = Vec::new();
    for (lambda, center) in centers {
        let grid: Vec<f64> = offsets.iter().map(|o| center + o).collect();
        let rep =
            mc::critical_scan(&coupling, lambda, &grid, &sides, schedule, 4181, 2).unwrap();
        println!(
            "  λ={lambda}: μ_c = {:.5} ± {:.5}, drift {:.5}, Δ = {:.5} ± {:.5}, Griffiths {}",
            rep.mu_c, rep.mu_c_err, rep.finite_size_drift, rep.delta, rep.delta_err,
            rep.griffiths_monotone
        );
        reports.push(rep);
    }

    // Gaussian control: bracket μ_c = jhat within combined error
    let gauss = &reports[0];
    let combined = gauss.mu_c_err + gauss.finite_size_drift;
    let bracket = (gauss.mu_c - coupling.jhat()).abs() <= 3.0 * combined;

    // power-law fit of |Δ| over λ ∈ {0.1, 0.2, 0.4}
    let positive: Vec<mc::ScanReport> = reports[1..].to_vec();
    let fit = mc::delta_power_fit(&positive);
    let exponent_ok = fit.slope >= 1.5 && fit.slope <= 3.0;

    let monotone = reports.iter().all(|r| r.griffiths_monotone);
    let elapsed = t0.elapsed();
    let pass = bracket && exponent_ok && monotone;
    report(
        8,
        "critical-point expansion in lambda",
        pass,
        &format!(
            "bracket λ=0: {bracket} (μ_c − 𝒥̂ = {:.2e}, err {:.2e}); |Δ| exponent = {:.2} in [1.5,3]: {exponent_ok}; Griffiths monotone: {monotone}; {elapsed:.0?}",
            gauss.mu_c - coupling.jhat(),
            combined,
            fit.slope
        ),
    );
}

/// Slow tier companion to the scan: the two-point function measured just
/// above μ_c, normalized by the torus walk Green function with the
/// measured killing rate. The ratio isolates the decay amplitude relative
/// to 𝒥̂V and must sit within 20% of one.
#[test]
#[ignore = "slow tier (~10 minutes)"]
fn amplitude_two_point_near_critical() {
    let t0 = Instant::now();
    let coupling = Coupling::nearest_neighbor(5, 0.1).unwrap();
    let geom = TorusGeometry::new(5, 12).unwrap();
    let lambda = 0.25;
    let mu = 0.878; // a calibrated hair above mu_c(0.25) ≈ 0.869
    let schedule = Schedule::new(40_000, 4_000, 2).unwrap();
    let displacements = [vec![3, 0, 0, 0, 0], vec![4, 0, 0, 0, 0]];
    let run = mc::run_chain(&coupling, lambda, mu, &geom, schedule, 314159, 0, &displacements)
        .unwrap();

    // walk reference on the same torus: step 𝒥/𝒥̂, killing from the
    // measured susceptibility, zero mode removed on both sides
    let chi_hat = run.observables.susceptibility.mean;
    let q_hat = 1.0 - 1.0 / (chi_hat * mu);
    let step = StepDistribution::from_coupling_linear(&coupling).unwrap();
    let s_q = green::green_torus_from_step(&step, &geom, q_hat, ZeroModePolicy::Reject).unwrap();
    let chi_walk = s_q.sum();

    let mut pass = true;
    let mut detail = format!("chi = {chi_hat:.1}, q = {q_hat:.5}; ");
    for (x, est) in mc::subtracted_two_point(&run, &geom) {
        let reference = (s_q.value(&x) - chi_walk / geom.volume() as f64) / mu;
        let ratio = est.mean / reference;
        let rel_err = est.stderr / reference;
        detail.push_str(&format!("ratio({x:?}) = {ratio:.3} ± {rel_err:.3}; "));
        if (ratio - 1.0).abs() > 0.20 {
            pass = false;
        }
    }
    let elapsed = t0.elapsed();
    detail.push_str(&format!("{elapsed:.0?}"));
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("[amplitude check] {verdict}: {detail}");
    assert!(pass, "near-critical amplitude check failed: {detail}");
}

#[test]
fn criterion_09_deconvolution_fixed_point() {
    let t0 = Instant::now();
    let geom = TorusGeometry::new(5, 16).unwrap();
    let coupling = Coupling::nearest_neighbor(5, 0.1).unwrap();
    let params = GsParams::new(0.5, 1.0, coupling, 64).unwrap();
    let d_table = params.step_distribution().unwrap().torus_table(&geom);
    let p = params.fugacity();
    let beta = params.intra_weight();
    let window = (2.0, 4.0); // |x| in [2, L/4]

    let mut pass = true;
    let mut detail = String::new();
    for (label, pi) in [
        ("delta", PiSource::delta(&geom, 0.05)),
        ("tail", PiSource::synthetic_tail(&geom, 0.05, 0.002)),
    ] {
        let f = deconv::f_from_pi(&pi, &d_table, p, beta).unwrap();
        let sol = deconv::qr_solve(&f, &d_table, &geom).unwrap();
        let decay = deconv::e_decay_check(&sol.e_table, sol.q, &d_table, &geom, window).unwrap();
        let ok = sol.e_sum.abs() <= 1e-8 && sol.e_curvature.abs() <= 1e-8 && decay.pass;
        detail.push_str(&format!(
            "{label}: Ê(0)={:.1e}, ∇̄²Ê(0)={:.1e}, exponent={:.2}{}; ",
            sol.e_sum,
            sol.e_curvature,
            decay.exponent,
            if decay.trivial { " (trivial)" } else { "" }
        ));
        pass &= ok;
    }
    let elapsed = t0.elapsed();
    pass &= elapsed.as_secs_f64() < 300.0;
    detail.push_str(&format!("{elapsed:.1?}"));
    report(9, "deconvolution moment cancellation and E∗S_q decay", pass, &detail);
}

#[test]
fn criterion_10_algebraic_closures() {
    // block susceptibility identity on the exact 2-site x N=2 system
    let spatial_j = 0.3;
    let coupling1 = Coupling::nearest_neighbor(1, spatial_j).unwrap();
    let params = GsParams::new(2.0, 1.0, coupling1, 2).unwrap();
    let graph = SpinGraph::gs_block_pair(&params, spatial_j);
    let matrix = exact::spin_two_point(&graph).unwrap();
    let block = gs::block_two_point(&matrix, &graph.site_ids(), &params, 1e-12).unwrap();

    let geom = TorusGeometry::new(1, 2).unwrap();
    let g_table = vec![block.g_matrix[0][0], block.g_matrix[0][1]];
    let d_table = vec![0.0, 1.0];
    let nf = params.block_size() as f64;
    let jb = spatial_j * params.epsilon2();
    let p = nf * jb.tanh() / (1.0 - (nf - 1.0) * params.intra_coupling().tanh());
    let beta = params.intra_weight();
    let pi = PiSource::from_exact_block_g(&g_table, &d_table, &geom, p, beta).unwrap();
    let f = deconv::f_from_pi(&pi, &d_table, p, beta).unwrap();
    let chi = deconv::chi_from_f(pi.sum(), &f).unwrap();
    let chi_exact: f64 = g_table.iter().sum();
    let chi_err = (chi - chi_exact).abs();

    // A = jhat·V exactly when Φ has no off-origin support
    let geom5 = TorusGeometry::new(5, 8).unwrap();
    let coupling5 = Coupling::nearest_neighbor(5, 0.1).unwrap();
    let mut phi = vec![0.0; geom5.volume()];
    phi[0] = 0.9;
    let walk = deconv::effective_linear_sd(&phi, &coupling5, 0.25, 1.2, &geom5).unwrap();
    let amp_exact = walk.amplitude == coupling5.jhat() * coupling5.variance();

    let pass = chi_err <= 1e-12 && amp_exact;
    report(
        10,
        "susceptibility identity and amplitude reduction",
        pass,
        &format!("|χ_ratio − χ_exact| = {chi_err:.2e}; A == 𝒥̂V exactly: {amp_exact}"),
    );
}
