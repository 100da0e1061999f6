//! The Griffiths-Simon construction: approximating a φ⁴ spin by ε_N times a
//! block of N Ising spins.
//!
//! The block of N spins at each site is coupled internally with strength
//! I = 1/N − μ·ε_N², while spins in different blocks inherit the spatial
//! coupling scaled by ε_N², with ε_N = (λN³/2)^{−1/4}. The ferromagnetic
//! condition I ≥ 0 pins N ≥ 2μ²/λ. Single-site moments of the block spin
//! converge to the φ⁴ single-site measure as N grows; this module computes
//! both sides exactly so the convergence can be watched.

use crate::lattice::{Coupling, StepDistribution};
use serde::Serialize;
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GsError {
    #[error("lambda must be positive, got {0}")]
    NonpositiveLambda(f64),
    #[error("ferromagnetic condition violated: N = {n} < 2mu^2/lambda = {required}")]
    FerromagneticViolation { n: u64, required: f64 },
    #[error("N = {0} exceeds the exact single-site summation cap")]
    BlockTooLarge(u64),
    #[error("replica values differ beyond tolerance: spread {0:e} (upstream bug)")]
    BlockAsymmetry(f64),
    #[error("vertex matrix has wrong shape")]
    BadMatrixShape,
}

/// Parameter bundle of the construction.
#[derive(Debug, Clone)]
pub struct GsParams {
    lambda: f64,
    mu: f64,
    n: u64,
    coupling: Coupling,
    epsilon: f64,
}

impl GsParams {
    pub fn new(lambda: f64, mu: f64, coupling: Coupling, n: u64) -> Result<Self, GsError> {
        if lambda <= 0.0 {
            return Err(GsError::NonpositiveLambda(lambda));
        }
        let required = 2.0 * mu * mu / lambda;
        if (n as f64) < required || n < 2 {
            return Err(GsError::FerromagneticViolation { n, required });
        }
        Ok(Self::new_unchecked(lambda, mu, coupling, n))
    }

    /// Skip the ferromagnetic validation; for arithmetic checks only.
    pub fn new_unchecked(lambda: f64, mu: f64, coupling: Coupling, n: u64) -> Self {
        let nf = n as f64;
        let epsilon = (lambda * nf * nf * nf / 2.0).powf(-0.25);
        GsParams {
            lambda,
            mu,
            n,
            coupling,
            epsilon,
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn block_size(&self) -> u64 {
        self.n
    }

    pub fn coupling(&self) -> &Coupling {
        &self.coupling
    }

    /// ε_N = (λN³/2)^{−1/4}.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn epsilon2(&self) -> f64 {
        self.epsilon * self.epsilon
    }

    /// Intra-block coupling I = 1/N − μ·ε_N².
    pub fn intra_coupling(&self) -> f64 {
        1.0 / self.n as f64 - self.mu * self.epsilon2()
    }

    /// Inter-site bond value J_{x,y} = 𝒥(y−x)·ε_N² for a displacement v.
    pub fn bond_value(&self, v: &[i32]) -> f64 {
        self.coupling.value(v) * self.epsilon2()
    }

    /// λ̃ = 1/(μ ε_N² N²) = (1/μ)·sqrt(λ/2N).
    pub fn tlambda(&self) -> f64 {
        1.0 / (self.mu * self.epsilon2() * (self.n * self.n) as f64)
    }

    /// Σ_v tanh(J_{o,v}) over the spatial support.
    pub fn tanh_bond_sum(&self) -> f64 {
        self.coupling
            .support()
            .iter()
            .map(|(_, j)| (j * self.epsilon2()).tanh())
            .sum()
    }

    /// The comparison-walk fugacity p = N·Σ_v tanh J_{o,v} / (1 − (N−1)tanh I).
    pub fn fugacity(&self) -> f64 {
        let nf = self.n as f64;
        nf * self.tanh_bond_sum() / (1.0 - (nf - 1.0) * self.intra_coupling().tanh())
    }

    /// The comparison-walk step distribution D(v) = tanh J_{o,v}/Σ tanh J.
    pub fn step_distribution(&self) -> Result<StepDistribution, crate::lattice::LatticeError> {
        StepDistribution::from_coupling(&self.coupling, self.epsilon2())
    }

    /// (N−1)·tanh I / (1 − (N−1)·tanh I), the intra-block weight that
    /// multiplies (Π/N − δ) in the deconvolution algebra.
    pub fn intra_weight(&self) -> f64 {
        let nf = self.n as f64;
        let t = (nf - 1.0) * self.intra_coupling().tanh();
        t / (1.0 - t)
    }
}

/// Exact single-site measure of the block spin: weights
/// w_k ∝ C(N,k)·2^{−N}·exp(I σ̃²/2) over σ̃ = N − 2k, k = 0..N.
#[derive(Debug, Clone)]
pub struct SingleSiteMeasure {
    n: u64,
    intra: f64,
}

const MAX_EXACT_N: u64 = 1_000_000;

impl SingleSiteMeasure {
    pub fn new(params: &GsParams) -> Result<Self, GsError> {
        if params.block_size() > MAX_EXACT_N {
            return Err(GsError::BlockTooLarge(params.block_size()));
        }
        Ok(SingleSiteMeasure {
            n: params.block_size(),
            intra: params.intra_coupling(),
        })
    }

    /// Raw moments ⟨σ̃^m⟩ for the requested orders, computed with
    /// log-domain weights so large N cannot overflow. The weights are
    /// symmetric under k ↔ N−k, so k is paired with N−k and odd moments
    /// vanish exactly.
    pub fn block_moments(&self, orders: &[u32]) -> Vec<f64> {
        let n = self.n;
        let nf = n as f64;
        let ln_binom_max = ln_gamma(nf + 1.0) - 2.0 * ln_gamma(nf / 2.0 + 1.0);
        // log weights on the half range, shifted before exponentiation
        let mut shift = f64::MIN;
        let mut logs = Vec::with_capacity(n as usize / 2 + 1);
        for k in 0..=n / 2 {
            let kf = k as f64;
            let sigma = nf - 2.0 * kf;
            let ln_binom = ln_gamma(nf + 1.0) - ln_gamma(kf + 1.0) - ln_gamma(nf - kf + 1.0);
            let lw = ln_binom - ln_binom_max + self.intra * sigma * sigma / 2.0;
            shift = shift.max(lw);
            logs.push((k, sigma, lw));
        }
        let mut norm = 0.0;
        let mut sums = vec![0.0; orders.len()];
        for (k, sigma, lw) in logs {
            let w = (lw - shift).exp();
            let paired = 2 * k != n; // N−k is a distinct partner
            norm += if paired { 2.0 * w } else { w };
            for (slot, &m) in sums.iter_mut().zip(orders) {
                let pow = sigma.powi(m as i32);
                *slot += if paired {
                    w * (pow + (-sigma).powi(m as i32))
                } else {
                    w * pow
                };
            }
        }
        sums.iter().map(|s| s / norm).collect()
    }

    /// Plain-summation moments, usable for small N to cross-check the
    /// log-domain path.
    pub fn block_moments_direct(&self, orders: &[u32]) -> Vec<f64> {
        let n = self.n;
        let nf = n as f64;
        let mut norm = 0.0;
        let mut sums = vec![0.0; orders.len()];
        for k in 0..=n {
            let mut binom = 1.0f64;
            for i in 0..k {
                binom *= (nf - i as f64) / (i as f64 + 1.0);
            }
            let sigma = nf - 2.0 * k as f64;
            let w = binom * 0.5f64.powi(n as i32) * (self.intra * sigma * sigma / 2.0).exp();
            norm += w;
            for (slot, &m) in sums.iter_mut().zip(orders) {
                *slot += w * sigma.powi(m as i32);
            }
        }
        sums.iter().map(|s| s / norm).collect()
    }
}

/// Moments of the φ⁴ single-site density ∝ exp(−μφ²/2 − λφ⁴/24), by
/// composite Simpson on |φ| <= 12 with step 1e−3.
pub fn phi4_site_moments(lambda: f64, mu: f64, orders: &[u32]) -> Vec<f64> {
    let (lo, hi, step) = (-12.0f64, 12.0f64, 1e-3f64);
    let n = ((hi - lo) / step).round() as usize; // even by construction
    let weight = |phi: f64| (-mu * phi * phi / 2.0 - lambda * phi.powi(4) / 24.0).exp();
    let mut norm = 0.0;
    let mut sums = vec![0.0; orders.len()];
    for i in 0..=n {
        let phi = lo + i as f64 * step;
        let w = simpson_w(i, n) * weight(phi);
        norm += w;
        for (slot, &m) in sums.iter_mut().zip(orders) {
            *slot += w * phi.powi(m as i32);
        }
    }
    sums.iter().map(|s| s / norm).collect()
}

fn simpson_w(i: usize, n: usize) -> f64 {
    if i == 0 || i == n {
        1.0
    } else if i % 2 == 1 {
        4.0
    } else {
        2.0
    }
}

/// One row of the single-site convergence diagnostic.
#[derive(Debug, Clone, Serialize)]
pub struct MomentComparison {
    pub n: u64,
    pub order: u32,
    pub finite_n: f64,
    pub target: f64,
    pub difference: f64,
}

/// Scaled block-spin moments ⟨(ε_N σ̃)^m⟩ against the φ⁴ quadrature
/// moments, for m in `orders`.
pub fn single_site_moments(
    params: &GsParams,
    orders: &[u32],
) -> Result<Vec<MomentComparison>, GsError> {
    let measure = SingleSiteMeasure::new(params)?;
    let raw = measure.block_moments(orders);
    let targets = phi4_site_moments(params.lambda(), params.mu(), orders);
    Ok(orders
        .iter()
        .zip(raw.iter().zip(&targets))
        .map(|(&m, (&r, &t))| {
            let finite_n = params.epsilon().powi(m as i32) * r;
            MomentComparison {
                n: params.block_size(),
                order: m,
                finite_n,
                target: t,
                difference: (finite_n - t).abs(),
            }
        })
        .collect())
}

/// Block-spin two-point data distilled from a per-replica matrix.
#[derive(Debug, Clone, Serialize)]
pub struct BlockTwoPoint {
    /// ⟨σ̃_s σ̃_t⟩ for each site pair (s, t)
    pub block_matrix: Vec<Vec<f64>>,
    /// G(s,t) = (1 − (N−1)tanh I)/N · ⟨σ̃_s σ̃_t⟩
    pub g_matrix: Vec<Vec<f64>>,
    /// worst deviation in the block-symmetry identity ⟨σ̃σ̃⟩ = N⟨σ_õ σ̃⟩
    pub block_symmetry_residual: f64,
    /// slack of ⟨σ_õσ_x̃⟩ <= δ + 4G(x)/(μ ε² N²) at every off-block pair
    pub pair_bound_slacks: Vec<f64>,
}

/// Fold a per-replica two-point matrix into block-spin observables.
///
/// `site_of[v]` names the spatial site of vertex v; the matrix is the
/// full vertex-pair table from the exact engine (or an Ising sampler).
/// Exchangeability across replicas is exact, so any spread beyond `tol`
/// signals an upstream bug.
pub fn block_two_point(
    matrix: &[f64],
    site_of: &[usize],
    params: &GsParams,
    tol: f64,
) -> Result<BlockTwoPoint, GsError> {
    let nv = site_of.len();
    if matrix.len() != nv * nv {
        return Err(GsError::BadMatrixShape);
    }
    let n_sites = site_of.iter().copied().max().map_or(0, |m| m + 1);
    let nf = params.block_size() as f64;

    // exchangeability: off-diagonal entries within a site class must agree
    let mut spread = 0.0f64;
    for s in 0..n_sites {
        for t in 0..n_sites {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for a in 0..nv {
                for b in 0..nv {
                    if a != b && site_of[a] == s && site_of[b] == t {
                        lo = lo.min(matrix[a * nv + b]);
                        hi = hi.max(matrix[a * nv + b]);
                    }
                }
            }
            if lo.is_finite() {
                spread = spread.max(hi - lo);
            }
        }
    }
    if spread > tol {
        return Err(GsError::BlockAsymmetry(spread));
    }

    let mut block = vec![vec![0.0; n_sites]; n_sites];
    for a in 0..nv {
        for b in 0..nv {
            block[site_of[a]][site_of[b]] += matrix[a * nv + b];
        }
    }

    // ⟨σ̃_s σ̃_t⟩ = N ⟨σ_(s,1) σ̃_t⟩ by exchangeability
    let mut sym_residual = 0.0f64;
    for s in 0..n_sites {
        let rep = (0..nv).find(|&a| site_of[a] == s).unwrap();
        for t in 0..n_sites {
            let single_row: f64 = (0..nv)
                .filter(|&b| site_of[b] == t)
                .map(|b| matrix[rep * nv + b])
                .sum();
            sym_residual = sym_residual.max((block[s][t] - nf * single_row).abs());
        }
    }

    let prefactor = (1.0 - (nf - 1.0) * params.intra_coupling().tanh()) / nf;
    let g_matrix: Vec<Vec<f64>> = block
        .iter()
        .map(|row| row.iter().map(|v| prefactor * v).collect())
        .collect();

    // pair bound at distinct vertices: ⟨σ_õσ_x̃⟩ <= δ_{õ,x̃} + 4G/(μ ε² N²)
    let bound_scale = 4.0 * params.tlambda();
    let mut slacks = Vec::new();
    for a in 0..nv {
        for b in 0..nv {
            if a == b {
                continue;
            }
            let bound = bound_scale * g_matrix[site_of[a]][site_of[b]];
            slacks.push(bound - matrix[a * nv + b]);
        }
    }

    Ok(BlockTwoPoint {
        block_matrix: block,
        g_matrix,
        block_symmetry_residual: sym_residual,
        pair_bound_slacks: slacks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Coupling;

    fn nn5() -> Coupling {
        Coupling::nearest_neighbor(5, 0.1).unwrap()
    }

    #[test]
    fn epsilon_arithmetic() {
        // (λ N³/2)^{-1/4} = 1 at λ=2, N=1 (validation bypassed)
        let p = GsParams::new_unchecked(2.0, 1.0, nn5(), 1);
        assert!((p.epsilon() - 1.0).abs() < 1e-15);

        let p = GsParams::new(0.5, 1.0, nn5(), 16).unwrap();
        assert!((p.epsilon2() - 1.0 / 32.0).abs() < 1e-15);
        assert!((p.intra_coupling() - 0.03125).abs() < 1e-15);
    }

    #[test]
    fn ferromagnetic_condition() {
        // 2μ²/λ = 4 > 3
        assert!(matches!(
            GsParams::new(0.5, 1.0, nn5(), 3),
            Err(GsError::FerromagneticViolation { .. })
        ));
        assert!(GsParams::new(0.5, 1.0, nn5(), 4).is_ok());
        assert!(matches!(
            GsParams::new(0.0, 1.0, nn5(), 4),
            Err(GsError::NonpositiveLambda(_))
        ));
    }

    #[test]
    fn tlambda_identity() {
        for n in [8u64, 16, 64, 256] {
            let p = GsParams::new(0.5, 1.3, nn5(), n).unwrap();
            let direct = 1.0 / (1.3 * p.epsilon2() * (n * n) as f64);
            let closed = (1.0 / 1.3) * (0.5 / (2.0 * n as f64)).sqrt();
            assert!((p.tlambda() - direct).abs() < 1e-15 * direct);
            assert!((p.tlambda() - closed).abs() < 1e-13 * closed);
            // definition closure: ε^4·(λ/2)N³ = 1
            let closure = p.epsilon().powi(4) * (0.5 / 2.0) * (n as f64).powi(3);
            assert!((closure - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn scaling_limits_monotone() {
        // I·N -> 1 and ε²N -> 0 monotonically as N doubles
        let mut prev_in = 0.0;
        let mut prev_e2n = f64::INFINITY;
        for n in [8u64, 16, 32, 64, 128, 256] {
            let p = GsParams::new(1.0, 1.0, nn5(), n).unwrap();
            let i_n = p.intra_coupling() * n as f64;
            let e2n = p.epsilon2() * n as f64;
            assert!(i_n > prev_in && i_n < 1.0);
            assert!(e2n < prev_e2n);
            prev_in = i_n;
            prev_e2n = e2n;
        }
    }

    #[test]
    fn single_site_n1_reduces_to_pm1() {
        // I forced to 0, N=1: block spin is ±1 uniformly, ⟨(εσ̃)²⟩ = ε²
        let p = GsParams::new_unchecked(2.0, 0.0, nn5(), 1);
        assert_eq!(p.intra_coupling(), 1.0 - 0.0); // I = 1/N - 0 = 1 here
        let m = SingleSiteMeasure {
            n: 1,
            intra: 0.0,
        };
        let moments = m.block_moments(&[2]);
        assert!((moments[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn odd_moments_vanish() {
        let p = GsParams::new(1.0, 0.0, nn5(), 64).unwrap();
        let m = SingleSiteMeasure::new(&p).unwrap();
        let odd = m.block_moments(&[1, 3]);
        assert!(odd[0].abs() < 1e-13 && odd[1].abs() < 1e-13);
    }

    #[test]
    fn log_domain_matches_direct_small_n() {
        let p = GsParams::new(1.0, 1.0, nn5(), 24).unwrap();
        let m = SingleSiteMeasure::new(&p).unwrap();
        let a = m.block_moments(&[2, 4]);
        let b = m.block_moments_direct(&[2, 4]);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12 * y.abs());
        }
    }

    #[test]
    fn moments_converge_to_quadrature() {
        let orders = [2u32, 4];
        let mut prev = [f64::INFINITY; 2];
        for n in [16u64, 64, 256] {
            let p = GsParams::new(1.0, 1.0, nn5(), n).unwrap();
            let rows = single_site_moments(&p, &orders).unwrap();
            for (i, row) in rows.iter().enumerate() {
                assert!(
                    row.difference < prev[i] + 1e-12,
                    "order {} not decreasing at N={n}: {} vs {}",
                    row.order,
                    row.difference,
                    prev[i]
                );
                prev[i] = row.difference;
            }
        }
    }

    #[test]
    fn single_block_n2_exact_formula() {
        // one site, N = 2, I > 0: ⟨σ̃²⟩ = 2(1 + tanh I) over the four spin
        // configurations, so G(o) = (1 − tanh I)/2 · ⟨σ̃²⟩ = 1 − tanh²I
        let coupling = Coupling::nearest_neighbor(1, 0.0).unwrap();
        let params = GsParams::new(2.0, 1.0, coupling, 2).unwrap();
        let i_val = params.intra_coupling();
        assert!(i_val > 0.0);
        let graph = crate::exact::SpinGraph::gs_block_single(&params);
        let matrix = crate::exact::spin_two_point(&graph).unwrap();
        let site_of = vec![0usize, 0];
        let out = block_two_point(&matrix, &site_of, &params, 1e-12).unwrap();
        let block2 = out.block_matrix[0][0];
        assert!((block2 - 2.0 * (1.0 + i_val.tanh())).abs() < 1e-13, "{block2}");
        assert!((out.g_matrix[0][0] - (1.0 - i_val.tanh().powi(2))).abs() < 1e-13);
    }

    #[test]
    fn pair_bound_holds_on_two_site_system() {
        // off-origin bound with nonnegative slack on the exact 2-site block
        let coupling = Coupling::nearest_neighbor(1, 0.3).unwrap();
        let params = GsParams::new(2.0, 1.0, coupling, 2).unwrap();
        let graph = crate::exact::SpinGraph::gs_block_pair(&params, 0.3);
        let matrix = crate::exact::spin_two_point(&graph).unwrap();
        let out = block_two_point(&matrix, &graph.site_ids(), &params, 1e-12).unwrap();
        assert!(out.block_symmetry_residual < 1e-12);
        for slack in &out.pair_bound_slacks {
            assert!(*slack >= -1e-12, "pair bound violated: slack {slack}");
        }
    }

    #[test]
    fn block_asymmetry_detected() {
        // replicas are exactly exchangeable; a perturbed matrix is an error
        let coupling = Coupling::nearest_neighbor(1, 0.3).unwrap();
        let params = GsParams::new(2.0, 1.0, coupling, 2).unwrap();
        let graph = crate::exact::SpinGraph::gs_block_pair(&params, 0.3);
        let mut matrix = crate::exact::spin_two_point(&graph).unwrap();
        // vertices 0 and 2 sit at different sites; their class has four
        // exchangeable entries, so a lone perturbation is a visible spread
        matrix[2] += 1e-6;
        matrix[8] += 1e-6;
        assert!(matches!(
            block_two_point(&matrix, &graph.site_ids(), &params, 1e-12),
            Err(GsError::BlockAsymmetry(_))
        ));
    }

    #[test]
    fn block_size_cap() {
        let p = GsParams::new(1.0, 1.0, nn5(), 2_000_000).unwrap();
        assert!(matches!(
            SingleSiteMeasure::new(&p),
            Err(GsError::BlockTooLarge(_))
        ));
    }

    #[test]
    fn block_two_point_decoupled_sites() {
        // J ≡ 0, I = 0: independent ±1 spins, G(s,t) = δ_{s,t}
        let n: usize = 2; // replicas
        let site_of = vec![0usize, 0, 1, 1];
        let nv = 4;
        let mut matrix = vec![0.0; nv * nv];
        for a in 0..nv {
            matrix[a * nv + a] = 1.0;
        }
        // lambda, mu chosen so that I = 0: mu ε² = 1/N  =>  mu = 1/(N ε²)
        let coupling = Coupling::nearest_neighbor(1, 0.0).unwrap();
        let lambda = 2.0;
        let eps2 = (lambda * (n as f64).powi(3) / 2.0_f64).powf(-0.5);
        let mu = 1.0 / (n as f64 * eps2);
        let params = GsParams::new_unchecked(lambda, mu, coupling, n as u64);
        assert!(params.intra_coupling().abs() < 1e-15);
        let out = block_two_point(&matrix, &site_of, &params, 1e-12).unwrap();
        assert!((out.g_matrix[0][0] - 1.0).abs() < 1e-14);
        assert!(out.g_matrix[0][1].abs() < 1e-14);
        assert!(out.block_symmetry_residual < 1e-14);
    }
}
