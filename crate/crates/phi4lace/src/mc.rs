//! Metropolis sampling of the lattice φ⁴ model on a torus.
//!
//! Single-site Metropolis with Gaussian proposals, the width auto-tuned to
//! 40–60% acceptance during burn-in, sites visited in a fixed even/odd
//! (checkerboard) order. Estimates carry blocking errors; nonlinear
//! combinations go through the block jackknife. Chains are deterministic
//! given their seed: the generator is ChaCha12 and chain i of a run uses
//! stream i of the seed.

use crate::green::{gaussian_torus_covariance, GreenError};
use crate::lattice::{Coupling, LatticeError, TorusGeometry};
use crate::stats::{
    self, blocking_length, estimate_series, integrated_autocorr_time, jackknife, weighted_linear_fit,
    Estimate, LinFit,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum McError {
    #[error("lambda must be nonnegative, got {0}")]
    NegativeLambda(f64),
    #[error("schedule invalid: {0}")]
    BadSchedule(String),
    #[error("torus side must be >= 4 for sampling, got {0}")]
    SideTooSmall(usize),
    #[error("chain not equilibrated: tau_int = {tau:.1} leaves only {blocks} blocks")]
    NotEquilibrated { tau: f64, blocks: usize },
    #[error("chi^-1 extrapolation unstable: chi2/dof = {0:.1}")]
    ExtrapolationUnstable(f64),
    #[error("scan needs at least 3 mu points, got {0}")]
    GridTooSmall(usize),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Green(#[from] GreenError),
}

/// Sweep counts for one chain. `sweeps` counts measurement sweeps;
/// a measurement is taken every `thin` sweeps.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Schedule {
    pub sweeps: usize,
    pub burn_in: usize,
    pub thin: usize,
}

impl Schedule {
    pub fn new(sweeps: usize, burn_in: usize, thin: usize) -> Result<Self, McError> {
        if sweeps == 0 || thin == 0 {
            return Err(McError::BadSchedule("sweeps and thin must be positive".into()));
        }
        Ok(Schedule {
            sweeps,
            burn_in,
            thin,
        })
    }

    pub fn measurements(&self) -> usize {
        self.sweeps / self.thin
    }
}

/// Raw measurement series of one chain, one entry per measurement.
#[derive(Debug, Clone)]
pub struct SeriesSet {
    pub displacements: Vec<Vec<i32>>,
    /// (Σφ)²/V — the susceptibility estimator
    pub chi: Vec<f64>,
    pub phi2: Vec<f64>,
    pub phi4: Vec<f64>,
    /// per displacement: (1/V)Σ_s φ_s φ_{s+x}
    pub two_point: Vec<Vec<f64>>,
    /// per displacement: (1/V)Σ_s φ_s³ φ_{s+x}
    pub three_one: Vec<Vec<f64>>,
    /// per displacement: (1/V)Σ_s (Σ_v 𝒥(v)φ_{s+v}) φ_{s+x}
    pub coupling_corr: Vec<Vec<f64>>,
}

/// Blocked estimates of the standard observable set.
#[derive(Debug, Clone, Serialize)]
pub struct ObservableSet {
    pub two_point: Vec<(Vec<i32>, Estimate)>,
    pub three_one: Vec<(Vec<i32>, Estimate)>,
    pub phi2: Estimate,
    pub phi4: Estimate,
    pub susceptibility: Estimate,
}

/// One finished chain.
#[derive(Debug, Clone)]
pub struct ChainRun {
    pub observables: ObservableSet,
    pub series: SeriesSet,
    pub schedule: Schedule,
    pub seed: u64,
    pub stream: u64,
    pub acceptance: f64,
    pub proposal_width: f64,
    pub lambda: f64,
    pub mu: f64,
}

struct Phi4Lattice {
    volume: usize,
    n_support: usize,
    neighbors: Vec<u32>,
    weights: Vec<f64>,
    update_order: Vec<u32>,
    shifts: Vec<Vec<u32>>, // per measured displacement
}

impl Phi4Lattice {
    fn build(coupling: &Coupling, geom: &TorusGeometry, displacements: &[Vec<i32>]) -> Self {
        let volume = geom.volume();
        let support = coupling.support();
        let n_support = support.len();
        let mut neighbors = vec![0u32; volume * n_support];
        for s in 0..volume {
            for (k, (v, _)) in support.iter().enumerate() {
                neighbors[s * n_support + k] = geom.shift(s, v) as u32;
            }
        }
        let weights: Vec<f64> = support.iter().map(|&(_, j)| j).collect();
        let mut update_order: Vec<u32> = (0..volume as u32).collect();
        update_order.sort_by_key(|&s| {
            let parity: i32 = geom.coords_of(s as usize).iter().sum::<i32>() & 1;
            (parity, s)
        });
        let shifts = displacements
            .iter()
            .map(|x| (0..volume).map(|s| geom.shift(s, x) as u32).collect())
            .collect();
        Phi4Lattice {
            volume,
            n_support,
            neighbors,
            weights,
            update_order,
            shifts,
        }
    }

    fn local_field(&self, phi: &[f64], s: usize) -> f64 {
        let base = s * self.n_support;
        let mut h = 0.0;
        for k in 0..self.n_support {
            h += self.weights[k] * phi[self.neighbors[base + k] as usize];
        }
        h
    }

    fn sweep(
        &self,
        phi: &mut [f64],
        mu: f64,
        lambda: f64,
        width: f64,
        rng: &mut ChaCha12Rng,
    ) -> usize {
        let mut accepted = 0;
        for &su in &self.update_order {
            let s = su as usize;
            let old = phi[s];
            let step: f64 = rng.sample(StandardNormal);
            let new = old + width * step;
            let h = self.local_field(phi, s);
            let de = -(new - old) * h
                + 0.5 * mu * (new * new - old * old)
                + lambda / 24.0 * (new.powi(4) - old.powi(4));
            if de <= 0.0 || rng.random::<f64>() < (-de).exp() {
                phi[s] = new;
                accepted += 1;
            }
        }
        accepted
    }
}

/// Run one Metropolis chain and return blocked estimates plus the raw
/// series (for residuals and jackknife combinations downstream).
pub fn run_chain(
    coupling: &Coupling,
    lambda: f64,
    mu: f64,
    geom: &TorusGeometry,
    schedule: Schedule,
    seed: u64,
    stream: u64,
    displacements: &[Vec<i32>],
) -> Result<ChainRun, McError> {
    if lambda < 0.0 {
        return Err(McError::NegativeLambda(lambda));
    }
    if geom.side() < 4 {
        return Err(McError::SideTooSmall(geom.side()));
    }
    let lattice = Phi4Lattice::build(coupling, geom, displacements);
    let volume = lattice.volume;
    let vf = volume as f64;

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut phi = vec![0.0f64; volume];
    let mut width = 1.0 / (1.0 + mu.abs()).sqrt();

    // burn-in with width tuning toward 40–60% acceptance
    let tune_window = 100usize.min(schedule.burn_in.max(1));
    let mut window_accepted = 0usize;
    let mut window_sweeps = 0usize;
    for _ in 0..schedule.burn_in {
        window_accepted += lattice.sweep(&mut phi, mu, lambda, width, &mut rng);
        window_sweeps += 1;
        if window_sweeps == tune_window {
            let rate = window_accepted as f64 / (window_sweeps * volume) as f64;
            if rate < 0.4 {
                width *= 0.8;
            } else if rate > 0.6 {
                width *= 1.25;
            }
            window_accepted = 0;
            window_sweeps = 0;
        }
    }

    let n_meas = schedule.measurements();
    let nd = displacements.len();
    let mut series = SeriesSet {
        displacements: displacements.to_vec(),
        chi: Vec::with_capacity(n_meas),
        phi2: Vec::with_capacity(n_meas),
        phi4: Vec::with_capacity(n_meas),
        two_point: vec![Vec::with_capacity(n_meas); nd],
        three_one: vec![Vec::with_capacity(n_meas); nd],
        coupling_corr: vec![Vec::with_capacity(n_meas); nd],
    };
    let mut field_buf = vec![0.0f64; volume];
    let mut accepted = 0usize;
    for sweep_idx in 0..schedule.sweeps {
        accepted += lattice.sweep(&mut phi, mu, lambda, width, &mut rng);
        if (sweep_idx + 1) % schedule.thin != 0 {
            continue;
        }
        let mut sum = 0.0;
        let mut sum2 = 0.0;
        let mut sum4 = 0.0;
        for &v in &phi {
            sum += v;
            let v2 = v * v;
            sum2 += v2;
            sum4 += v2 * v2;
        }
        series.chi.push(sum * sum / vf);
        series.phi2.push(sum2 / vf);
        series.phi4.push(sum4 / vf);
        if nd > 0 {
            for (s, slot) in field_buf.iter_mut().enumerate() {
                *slot = lattice.local_field(&phi, s);
            }
            for (k, shifts) in lattice.shifts.iter().enumerate() {
                let mut t2 = 0.0;
                let mut t31 = 0.0;
                let mut jc = 0.0;
                for (s, &target) in shifts.iter().enumerate() {
                    let pt = phi[target as usize];
                    let ps = phi[s];
                    t2 += ps * pt;
                    t31 += ps * ps * ps * pt;
                    jc += field_buf[s] * pt;
                }
                series.two_point[k].push(t2 / vf);
                series.three_one[k].push(t31 / vf);
                series.coupling_corr[k].push(jc / vf);
            }
        }
    }
    let acceptance = accepted as f64 / (schedule.sweeps * volume) as f64;

    // equilibration capacity: the susceptibility is the slowest mode
    let tau = integrated_autocorr_time(&series.chi);
    let blocks = series.chi.len() / blocking_length(tau);
    if blocks < 8 {
        return Err(McError::NotEquilibrated { tau, blocks });
    }

    let est = |s: &[f64]| estimate_series(s, schedule.burn_in, seed);
    let observables = ObservableSet {
        two_point: displacements
            .iter()
            .zip(&series.two_point)
            .map(|(x, s)| (x.clone(), est(s)))
            .collect(),
        three_one: displacements
            .iter()
            .zip(&series.three_one)
            .map(|(x, s)| (x.clone(), est(s)))
            .collect(),
        phi2: est(&series.phi2),
        phi4: est(&series.phi4),
        susceptibility: est(&series.chi),
    };

    Ok(ChainRun {
        observables,
        series,
        schedule,
        seed,
        stream,
        acceptance,
        proposal_width: width,
        lambda,
        mu,
    })
}

/// Run `n_chains` independent chains (streams 0..n of the same seed) in
/// parallel and return them in stream order.
#[allow(clippy::too_many_arguments)]
pub fn run_chains(
    coupling: &Coupling,
    lambda: f64,
    mu: f64,
    geom: &TorusGeometry,
    schedule: Schedule,
    seed: u64,
    n_chains: usize,
    displacements: &[Vec<i32>],
) -> Result<Vec<ChainRun>, McError> {
    let mut slots: Vec<Option<Result<ChainRun, McError>>> = (0..n_chains).map(|_| None).collect();
    std::thread::scope(|scope| {
        for (stream, slot) in slots.iter_mut().enumerate() {
            scope.spawn(move || {
                *slot = Some(run_chain(
                    coupling,
                    lambda,
                    mu,
                    geom,
                    schedule,
                    seed,
                    stream as u64,
                    displacements,
                ));
            });
        }
    });
    slots.into_iter().map(|s| s.unwrap()).collect()
}

/// Merge per-chain estimates of the same observable set (inverse-variance
/// weights, chains in stream order).
pub fn merge_observables(runs: &[ChainRun]) -> ObservableSet {
    let merge_at = |pick: &dyn Fn(&ChainRun) -> &Estimate| {
        let parts: Vec<Estimate> = runs.iter().map(|r| pick(r).clone()).collect();
        Estimate::merge(&parts)
    };
    let nd = runs[0].observables.two_point.len();
    let two_point = (0..nd)
        .map(|k| {
            let x = runs[0].observables.two_point[k].0.clone();
            let parts: Vec<Estimate> = runs
                .iter()
                .map(|r| r.observables.two_point[k].1.clone())
                .collect();
            (x, Estimate::merge(&parts))
        })
        .collect();
    let three_one = (0..nd)
        .map(|k| {
            let x = runs[0].observables.three_one[k].0.clone();
            let parts: Vec<Estimate> = runs
                .iter()
                .map(|r| r.observables.three_one[k].1.clone())
                .collect();
            (x, Estimate::merge(&parts))
        })
        .collect();
    ObservableSet {
        two_point,
        three_one,
        phi2: merge_at(&|r| &r.observables.phi2),
        phi4: merge_at(&|r| &r.observables.phi4),
        susceptibility: merge_at(&|r| &r.observables.susceptibility),
    }
}

/// Schwinger-Dyson residual per measured displacement:
/// −Σ_v 𝒥_{o,v}⟨φ_vφ_x⟩ + μ⟨φ_oφ_x⟩ + (λ/6)⟨φ_o³φ_x⟩ − δ_{o,x}.
/// The combination is linear in the measured series, so blocking gives the
/// error directly with all cross-correlations included.
pub fn sd_residual(run: &ChainRun) -> Vec<(Vec<i32>, Estimate)> {
    let lambda = run.lambda;
    let mu = run.mu;
    run.series
        .displacements
        .iter()
        .enumerate()
        .map(|(k, x)| {
            let delta = if x.iter().all(|&c| c == 0) { 1.0 } else { 0.0 };
            let series: Vec<f64> = (0..run.series.chi.len())
                .map(|t| {
                    -run.series.coupling_corr[k][t]
                        + mu * run.series.two_point[k][t]
                        + lambda / 6.0 * run.series.three_one[k][t]
                        - delta
                })
                .collect();
            (
                x.clone(),
                estimate_series(&series, run.schedule.burn_in, run.seed),
            )
        })
        .collect()
}

/// The same residual evaluated on exact Gaussian torus covariance tables;
/// zero to machine precision for every x when λ = 0.
pub fn sd_residual_exact_gaussian(
    coupling: &Coupling,
    mu: f64,
    geom: &TorusGeometry,
) -> Result<Vec<f64>, McError> {
    let cov = gaussian_torus_covariance(coupling, mu, geom)?;
    let mut out = vec![0.0; geom.volume()];
    for (x, slot) in out.iter_mut().enumerate() {
        let mut conv = 0.0;
        for (v, j) in coupling.support() {
            conv += j * cov[geom.shift(x, &v.iter().map(|c| -c).collect::<Vec<_>>())];
        }
        *slot = -conv + mu * cov[x] - if x == 0 { 1.0 } else { 0.0 };
    }
    Ok(out)
}

/// u₄ = ⟨φ⁴⟩ − 3⟨φ²⟩² with jackknife error (Lebowitz: u₄ <= 0 for λ > 0).
pub fn binder_u4(run: &ChainRun) -> (f64, f64) {
    let tau = integrated_autocorr_time(&run.series.phi4);
    let bl = blocking_length(tau);
    jackknife(&[&run.series.phi4, &run.series.phi2], bl, |m| {
        m[0] - 3.0 * m[1] * m[1]
    })
}

/// Zero-mode-subtracted two-point estimates: ⟨φ_oφ_x⟩ − χ̂/V, the
/// correlator with the k = 0 contribution removed.
pub fn subtracted_two_point(run: &ChainRun, geom: &TorusGeometry) -> Vec<(Vec<i32>, Estimate)> {
    let vf = geom.volume() as f64;
    run.series
        .displacements
        .iter()
        .enumerate()
        .map(|(k, x)| {
            let tau = integrated_autocorr_time(&run.series.two_point[k]);
            let bl = blocking_length(tau);
            let (val, err) = jackknife(
                &[&run.series.two_point[k], &run.series.chi],
                bl,
                |m| m[0] - m[1] / vf,
            );
            (
                x.clone(),
                Estimate {
                    mean: val,
                    stderr: err,
                    tau_int: tau,
                    samples: run.series.two_point[k].len(),
                    burn_in: run.schedule.burn_in,
                    seed: run.seed,
                },
            )
        })
        .collect()
}

// ---------------------------------------------------------------------------
// critical-point scan
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct ScanPoint {
    pub mu: f64,
    pub side: usize,
    pub susceptibility: Estimate,
    pub chi_inv: Estimate,
    pub phi2: Estimate,
}

#[derive(Debug, Clone, Serialize)]
pub struct MuCFit {
    pub side: usize,
    pub mu_c: f64,
    pub mu_c_err: f64,
    pub fit: LinFit,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub lambda: f64,
    pub points: Vec<ScanPoint>,
    pub mu_c_by_side: Vec<MuCFit>,
    /// μ_c from the largest torus
    pub mu_c: f64,
    pub mu_c_err: f64,
    /// spread of μ_c across torus sizes
    pub finite_size_drift: f64,
    /// ⟨φ²⟩ at the smallest simulable μ on the largest torus
    pub phi2_near_mu_c: Estimate,
    /// Δ(λ) = μ_c − (𝒥̂ − (λ/2)⟨φ²⟩)
    pub delta: f64,
    pub delta_err: f64,
    /// χ decreasing in μ within 3 combined errors across the grid
    pub griffiths_monotone: bool,
}

/// Scan μ above the critical point on one or more torus sizes, extrapolate
/// χ^{-1} linearly (mean-field exponent) from the three largest μ, and
/// assemble the critical-point expansion diagnostics.
#[allow(clippy::too_many_arguments)]
pub fn critical_scan(
    coupling: &Coupling,
    lambda: f64,
    mu_grid: &[f64],
    sides: &[usize],
    schedule: Schedule,
    seed: u64,
    n_chains: usize,
) -> Result<ScanReport, McError> {
    if mu_grid.len() < 3 {
        return Err(McError::GridTooSmall(mu_grid.len()));
    }
    let mut mus = mu_grid.to_vec();
    mus.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let d = coupling.dimension();

    let mut points = Vec::new();
    let mut mu_c_by_side = Vec::new();
    for &side in sides {
        let geom = TorusGeometry::new(d, side)?;
        let mut side_points = Vec::new();
        for &mu in &mus {
            let runs = run_chains(coupling, lambda, mu, &geom, schedule, seed, n_chains, &[])?;
            // susceptibility and phi2 merged across chains; chi^{-1} by
            // jackknife per chain, then inverse-variance merged
            let merged_chi = Estimate::merge(
                &runs
                    .iter()
                    .map(|r| r.observables.susceptibility.clone())
                    .collect::<Vec<_>>(),
            );
            let merged_phi2 = Estimate::merge(
                &runs
                    .iter()
                    .map(|r| r.observables.phi2.clone())
                    .collect::<Vec<_>>(),
            );
            let inv_parts: Vec<Estimate> = runs
                .iter()
                .map(|r| {
                    let tau = integrated_autocorr_time(&r.series.chi);
                    let bl = blocking_length(tau);
                    let (v, e) = jackknife(&[&r.series.chi], bl, |m| 1.0 / m[0]);
                    Estimate {
                        mean: v,
                        stderr: e,
                        tau_int: tau,
                        samples: r.series.chi.len(),
                        burn_in: r.schedule.burn_in,
                        seed: r.seed,
                    }
                })
                .collect();
            let chi_inv = Estimate::merge(&inv_parts);
            side_points.push(ScanPoint {
                mu,
                side,
                susceptibility: merged_chi,
                chi_inv,
                phi2: merged_phi2,
            });
        }

        // linear χ^{-1} extrapolation from the three largest-μ points
        let top = &side_points[side_points.len() - 3..];
        let xs: Vec<f64> = top.iter().map(|p| p.mu).collect();
        let ys: Vec<f64> = top.iter().map(|p| p.chi_inv.mean).collect();
        let ss: Vec<f64> = top.iter().map(|p| p.chi_inv.stderr).collect();
        let fit = weighted_linear_fit(&xs, &ys, &ss);
        if fit.dof > 0 && fit.chi2 / fit.dof as f64 > 25.0 {
            return Err(McError::ExtrapolationUnstable(fit.chi2 / fit.dof as f64));
        }
        let (a, b) = (fit.intercept, fit.slope);
        let mu_c = -a / b;
        let var = fit.intercept_err.powi(2) / (b * b)
            + (a * a / b.powi(4)) * fit.slope_err.powi(2)
            - 2.0 * (a / b.powi(3)) * fit.cov_slope_intercept;
        mu_c_by_side.push(MuCFit {
            side,
            mu_c,
            mu_c_err: var.max(0.0).sqrt(),
            fit,
        });
        points.extend(side_points);
    }

    let best = mu_c_by_side.last().unwrap().clone();
    let drift = mu_c_by_side
        .iter()
        .map(|f| (f.mu_c - best.mu_c).abs())
        .fold(0.0, f64::max);

    let largest = *sides.last().unwrap();
    let phi2_near = points
        .iter()
        .find(|p| p.side == largest && p.mu == mus[0])
        .unwrap()
        .phi2
        .clone();
    let delta = best.mu_c - (coupling.jhat() - lambda / 2.0 * phi2_near.mean);
    let delta_err =
        (best.mu_c_err.powi(2) + (lambda / 2.0 * phi2_near.stderr).powi(2)).sqrt();

    // second Griffiths: χ must not increase with μ beyond noise
    let mut monotone = true;
    for side in sides {
        let ps: Vec<&ScanPoint> = points.iter().filter(|p| p.side == *side).collect();
        for w in ps.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let tol = 3.0 * (lo.susceptibility.stderr.powi(2) + hi.susceptibility.stderr.powi(2))
                .sqrt();
            if hi.susceptibility.mean > lo.susceptibility.mean + tol {
                monotone = false;
            }
        }
    }

    Ok(ScanReport {
        lambda,
        points,
        mu_c_by_side,
        mu_c: best.mu_c,
        mu_c_err: best.mu_c_err,
        finite_size_drift: drift,
        phi2_near_mu_c: phi2_near,
        delta,
        delta_err,
        griffiths_monotone: monotone,
    })
}

/// Log-log fit of |Δ(λ)| against λ across scan reports.
pub fn delta_power_fit(reports: &[ScanReport]) -> LinFit {
    let xs: Vec<f64> = reports.iter().map(|r| r.lambda).collect();
    let ys: Vec<f64> = reports.iter().map(|r| r.delta.abs()).collect();
    stats::fit_loglog(&xs, &ys)
}

// ---------------------------------------------------------------------------
// single-site stationarity check
// ---------------------------------------------------------------------------

/// Sample the single-site density ∝ exp(−μφ²/2 − λφ⁴/24) with the same
/// Metropolis rule and compare the histogram against quadrature bin masses
/// (chi-square goodness of fit). Returns (statistic, dof, p-value).
pub fn single_site_stationarity_test(
    lambda: f64,
    mu: f64,
    n_samples: usize,
    thin: usize,
    n_bins: usize,
    seed: u64,
) -> (f64, usize, f64) {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut phi = 0.0f64;
    let width = 1.0;
    let step = |phi: &mut f64, rng: &mut ChaCha12Rng| {
        let prop = *phi + width * rng.sample::<f64, _>(StandardNormal);
        let de = 0.5 * mu * (prop * prop - *phi * *phi)
            + lambda / 24.0 * (prop.powi(4) - phi.powi(4));
        if de <= 0.0 || rng.random::<f64>() < (-de).exp() {
            *phi = prop;
        }
    };
    for _ in 0..2000 {
        step(&mut phi, &mut rng);
    }
    let edge = 4.0 / (mu.max(0.25)).sqrt();
    let mut counts = vec![0usize; n_bins];
    let mut kept = 0usize;
    for _ in 0..n_samples {
        for _ in 0..thin {
            step(&mut phi, &mut rng);
        }
        if phi.abs() < edge {
            let bin = ((phi + edge) / (2.0 * edge) * n_bins as f64) as usize;
            counts[bin.min(n_bins - 1)] += 1;
            kept += 1;
        }
    }
    // quadrature bin masses conditioned on |φ| < edge
    let weight = |x: f64| (-mu * x * x / 2.0 - lambda * x.powi(4) / 24.0).exp();
    let bin_mass: Vec<f64> = (0..n_bins)
        .map(|b| {
            let lo = -edge + 2.0 * edge * b as f64 / n_bins as f64;
            let hi = -edge + 2.0 * edge * (b + 1) as f64 / n_bins as f64;
            let n = 64;
            let h = (hi - lo) / n as f64;
            let mut acc = weight(lo) + weight(hi);
            for i in 1..n {
                acc += if i % 2 == 1 { 4.0 } else { 2.0 } * weight(lo + i as f64 * h);
            }
            acc * h / 3.0
        })
        .collect();
    let total_mass: f64 = bin_mass.iter().sum();
    let mut stat = 0.0;
    for (c, m) in counts.iter().zip(&bin_mass) {
        let expected = kept as f64 * m / total_mass;
        stat += (*c as f64 - expected).powi(2) / expected;
    }
    let dof = n_bins - 1;
    (stat, dof, stats::chi_square_p_value(stat, dof))
}
