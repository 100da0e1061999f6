//! The deconvolution algebra connecting the lace coefficient Π to the
//! effective random walk.
//!
//! From a coefficient table Π/N on a torus: the kernel
//! F = (Π/N)∗(pD) + β(Π/N − δ) with β the intra-block weight, the
//! susceptibility identity Ĝ(0) = (Π̂(0)/N)/(1 − F̂(0)), the moment-matched
//! pair (q, r) making the error kernel E = (δ − qD) − r(δ − F) vanish at
//! zeroth and second order in k, the decay check on E∗S_q, and the
//! effective linear Schwinger-Dyson walk with its amplitude
//! A = Σ_y |y|²(𝒥(y) − (λ/2)Φ(y)).

use crate::fft;
use crate::green::{self, GreenError, ZeroModePolicy};
use crate::gs::GsParams;
use crate::lattice::{Coupling, TorusGeometry};
use crate::stats::{fit_loglog, LinFit};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DeconvError {
    #[error("F̂(0) = {0} >= 1: block susceptibility undefined")]
    SupercriticalF(f64),
    #[error("step distribution has zero second moment")]
    DegenerateCurvature,
    #[error("decay fit needs >= 4 distinct radii in the window, got {0}")]
    FitWindowTooSmall(usize),
    #[error("amplitude A = {0} <= 0")]
    NonpositiveA(f64),
    #[error("table length {0} does not match torus volume {1}")]
    ShapeMismatch(usize, usize),
    #[error(transparent)]
    Green(#[from] GreenError),
}

/// How a Π/N table was produced.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum PiMode {
    /// Π/N = (1 − Ō)·δ
    Delta { obar: f64 },
    /// Π/N = (1 − Ō)·δ + c_tail·⟨x⟩^{−3(d−2)} off the origin
    SyntheticTail { obar: f64, c_tail: f64 },
    /// inverted from an exact block two-point table
    ExactInversion,
    /// externally supplied table
    Table,
}

/// A lace-coefficient source: the table Π(x)/N on a torus plus metadata.
#[derive(Debug, Clone)]
pub struct PiSource {
    geom: TorusGeometry,
    table: Vec<f64>,
    mode: PiMode,
}

impl PiSource {
    pub fn delta(geom: &TorusGeometry, obar: f64) -> Self {
        let mut table = vec![0.0; geom.volume()];
        table[0] = 1.0 - obar;
        PiSource {
            geom: geom.clone(),
            table,
            mode: PiMode::Delta { obar },
        }
    }

    /// Synthetic profile saturating the envelope |Π/N − (1−Ō)δ| <=
    /// c_tail·⟨x⟩^{−3(d−2)} pointwise (minimal-image norm).
    pub fn synthetic_tail(geom: &TorusGeometry, obar: f64, c_tail: f64) -> Self {
        let exponent = -3.0 * (geom.dimension() as f64 - 2.0) / 2.0; // applied to |x|²
        let table = (0..geom.volume())
            .map(|i| {
                if i == 0 {
                    1.0 - obar
                } else {
                    c_tail * geom.min_image_norm2(i).max(1.0).powf(exponent)
                }
            })
            .collect();
        PiSource {
            geom: geom.clone(),
            table,
            mode: PiMode::SyntheticTail { obar, c_tail },
        }
    }

    /// Recover Π/N from an exact block two-point table G by inverting the
    /// block-spin lace identity G = Π/N + F∗G per Fourier mode:
    /// Π̂/N = Ĝ(1+β) / (1 + p·D̂·Ĝ + β·Ĝ).
    pub fn from_exact_block_g(
        g_table: &[f64],
        d_table: &[f64],
        geom: &TorusGeometry,
        p: f64,
        beta: f64,
    ) -> Result<Self, DeconvError> {
        if g_table.len() != geom.volume() || d_table.len() != geom.volume() {
            return Err(DeconvError::ShapeMismatch(g_table.len(), geom.volume()));
        }
        let dims = geom.dims();
        let g_hat = fft::forward_real(g_table, &dims);
        let d_hat = fft::forward_real(d_table, &dims);
        let pi_hat: Vec<Complex64> = g_hat
            .iter()
            .zip(&d_hat)
            .map(|(g, dk)| {
                let g = g.re;
                let denom = 1.0 + p * dk.re * g + beta * g;
                Complex64::new(g * (1.0 + beta) / denom, 0.0)
            })
            .collect();
        let (table, _) = fft::inverse_to_real(pi_hat, &dims);
        Ok(PiSource {
            geom: geom.clone(),
            table,
            mode: PiMode::ExactInversion,
        })
    }

    pub fn from_table(geom: &TorusGeometry, table: Vec<f64>, mode: PiMode) -> Result<Self, DeconvError> {
        if table.len() != geom.volume() {
            return Err(DeconvError::ShapeMismatch(table.len(), geom.volume()));
        }
        Ok(PiSource {
            geom: geom.clone(),
            table,
            mode,
        })
    }

    pub fn geometry(&self) -> &TorusGeometry {
        &self.geom
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn mode(&self) -> &PiMode {
        &self.mode
    }

    /// Π̂(0)/N.
    pub fn sum(&self) -> f64 {
        self.table.iter().sum()
    }

    /// Φ_N = −ε_N²N²·(Π_N/N − δ), the linearizing kernel of the
    /// Schwinger-Dyson rewrite.
    pub fn phi_table(&self, params: &GsParams) -> Vec<f64> {
        let scale = params.epsilon2() * (params.block_size() * params.block_size()) as f64;
        self.table
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let delta = if i == 0 { 1.0 } else { 0.0 };
                -scale * (v - delta)
            })
            .collect()
    }
}

/// F = (Π/N)∗(pD) + β(Π/N − δ). Fails if F̂(0) >= 1, which would make the
/// block susceptibility undefined.
pub fn f_from_pi(
    pi: &PiSource,
    d_table: &[f64],
    p: f64,
    beta: f64,
) -> Result<Vec<f64>, DeconvError> {
    let geom = pi.geometry();
    if d_table.len() != geom.volume() {
        return Err(DeconvError::ShapeMismatch(d_table.len(), geom.volume()));
    }
    let dims = geom.dims();
    let scaled_d: Vec<f64> = d_table.iter().map(|&v| p * v).collect();
    let mut f = fft::cyclic_convolve(pi.table(), &scaled_d, &dims);
    for (i, slot) in f.iter_mut().enumerate() {
        let delta = if i == 0 { 1.0 } else { 0.0 };
        *slot += beta * (pi.table()[i] - delta);
    }
    let f0: f64 = f.iter().sum();
    if f0 >= 1.0 {
        return Err(DeconvError::SupercriticalF(f0));
    }
    Ok(f)
}

/// Block susceptibility Ĝ(0) = (Π̂(0)/N)/(1 − F̂(0)).
pub fn chi_from_f(pi_sum: f64, f_table: &[f64]) -> Result<f64, DeconvError> {
    let f0: f64 = f_table.iter().sum();
    if f0 >= 1.0 {
        return Err(DeconvError::SupercriticalF(f0));
    }
    Ok(pi_sum / (1.0 - f0))
}

/// Rebuild the block two-point table from Π and F: Ĝ = (Π̂/N)/(1 − F̂).
pub fn green_from_pi(pi: &PiSource, f_table: &[f64]) -> Result<Vec<f64>, DeconvError> {
    let geom = pi.geometry();
    let dims = geom.dims();
    let pi_hat = fft::forward_real(pi.table(), &dims);
    let f_hat = fft::forward_real(f_table, &dims);
    let g_hat: Vec<Complex64> = pi_hat
        .iter()
        .zip(&f_hat)
        .map(|(pk, fk)| Complex64::new(pk.re / (1.0 - fk.re), 0.0))
        .collect();
    Ok(fft::inverse_to_real(g_hat, &dims).0)
}

/// The moment-matched deconvolution pair and its error kernel.
#[derive(Debug, Clone, Serialize)]
pub struct QrSolution {
    pub q: f64,
    pub r: f64,
    pub f_hat0: f64,
    /// ∇̄²F̂(0) = Σ|x|²F / Σ|x|²D (minimal-image norms)
    pub nabla2_f0: f64,
    /// E = (δ − qD) − r(δ − F), assembled in real space
    pub e_table: Vec<f64>,
    /// Ê(0) recomputed from the assembled table
    pub e_sum: f64,
    /// ∇̄²Ê(0) recomputed from the assembled table
    pub e_curvature: f64,
}

/// Choose q = r·∇̄²F̂(0) and r = 1/(1 − F̂(0) + ∇̄²F̂(0)), so that the
/// error kernel E has vanishing zeroth and second Fourier derivatives at
/// k = 0. The curvature ratio uses exact second moments on the torus, not
/// small-k limits.
pub fn qr_solve(
    f_table: &[f64],
    d_table: &[f64],
    geom: &TorusGeometry,
) -> Result<QrSolution, DeconvError> {
    if f_table.len() != geom.volume() || d_table.len() != geom.volume() {
        return Err(DeconvError::ShapeMismatch(f_table.len(), geom.volume()));
    }
    let norm2 = geom.norm2_table();
    let m2_d: f64 = d_table.iter().zip(&norm2).map(|(v, n)| v * n).sum();
    if m2_d == 0.0 {
        return Err(DeconvError::DegenerateCurvature);
    }
    let m2_f: f64 = f_table.iter().zip(&norm2).map(|(v, n)| v * n).sum();
    let f_hat0: f64 = f_table.iter().sum();
    let nabla2_f0 = m2_f / m2_d;
    let r = 1.0 / (1.0 - f_hat0 + nabla2_f0);
    let q = r * nabla2_f0;

    let e_table: Vec<f64> = (0..geom.volume())
        .map(|i| {
            let delta = if i == 0 { 1.0 } else { 0.0 };
            (delta - q * d_table[i]) - r * (delta - f_table[i])
        })
        .collect();
    let e_sum: f64 = e_table.iter().sum();
    let e_m2: f64 = e_table.iter().zip(&norm2).map(|(v, n)| v * n).sum();
    Ok(QrSolution {
        q,
        r,
        f_hat0,
        nabla2_f0,
        e_table,
        e_sum,
        e_curvature: e_m2 / m2_d,
    })
}

/// Outcome of the E∗S_q decay fit.
#[derive(Debug, Clone, Serialize)]
pub struct DecayReport {
    /// true when E∗S_q is zero to rounding and the fit is vacuous
    pub trivial: bool,
    /// fitted decay exponent (positive; |conv| ~ |x|^{−exponent})
    pub exponent: f64,
    pub fit: Option<LinFit>,
    pub sup_in_window: f64,
    pub points: usize,
    /// exponent >= d, i.e. strictly faster than Green-function decay
    pub pass: bool,
}

/// Convolve the error kernel with S_q and fit the decay exponent of the
/// absolute value over minimal-image radii in [window.0, window.1].
pub fn e_decay_check(
    e_table: &[f64],
    q: f64,
    d_table: &[f64],
    geom: &TorusGeometry,
    window: (f64, f64),
) -> Result<DecayReport, DeconvError> {
    let policy = if q == 1.0 {
        ZeroModePolicy::Subtract
    } else {
        ZeroModePolicy::Reject
    };
    let s_q = green::green_torus(d_table, geom, q, policy)?;
    let conv = fft::cyclic_convolve(e_table, s_q.values(), &geom.dims());

    // a kernel that is zero to rounding makes the fit vacuous; the natural
    // scale of E's ingredients (delta, qD, rF) is order one
    let e_sup = e_table.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let s_sup = s_q.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = 1e-12 * s_sup.max(1.0);
    if e_sup <= 1e-12 {
        return Ok(DecayReport {
            trivial: true,
            exponent: f64::INFINITY,
            fit: None,
            sup_in_window: 0.0,
            points: 0,
            pass: true,
        });
    }

    let mut by_radius: std::collections::BTreeMap<u64, (f64, usize)> = Default::default();
    let mut sup = 0.0f64;
    for (i, &v) in conv.iter().enumerate() {
        let r2 = geom.min_image_norm2(i);
        let r = r2.sqrt();
        if r < window.0 || r > window.1 {
            continue;
        }
        sup = sup.max(v.abs());
        let entry = by_radius.entry(r2 as u64).or_insert((0.0, 0));
        entry.0 += v.abs();
        entry.1 += 1;
    }
    if sup <= floor {
        return Ok(DecayReport {
            trivial: true,
            exponent: f64::INFINITY,
            fit: None,
            sup_in_window: sup,
            points: 0,
            pass: true,
        });
    }
    // shell-averaged magnitudes, dropping shells at rounding level
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (r2, (total, count)) in &by_radius {
        let mean = total / *count as f64;
        if mean > floor {
            xs.push((*r2 as f64).sqrt());
            ys.push(mean);
        }
    }
    if xs.len() < 4 {
        return Err(DeconvError::FitWindowTooSmall(xs.len()));
    }
    let fit = fit_loglog(&xs, &ys);
    let exponent = -fit.slope;
    let d = geom.dimension() as f64;
    Ok(DecayReport {
        trivial: false,
        exponent,
        fit: Some(fit.clone()),
        sup_in_window: sup,
        points: xs.len(),
        pass: exponent >= d,
    })
}

/// The effective linear Schwinger-Dyson walk for a linearizing kernel Φ_μ.
#[derive(Debug, Clone, Serialize)]
pub struct EffectiveWalk {
    /// 𝒟_μ(x) = (𝒥(x) − (λ/2)Φ(x)) / (𝒥̂ − (λ/2)ΣΦ); signed, sums to 1
    pub step_table: Vec<f64>,
    /// χ^{-1} = μ − 𝒥̂ + (λ/2)ΣΦ
    pub chi_inv: f64,
    /// killing rate χ^{-1}/μ
    pub killing: f64,
    /// A = Σ_{y≠o} |y|²(𝒥(y) − (λ/2)Φ(y)) = 𝒥̂V + O(λ) tail corrections
    pub amplitude: f64,
    /// μ⟨φ_oφ_x⟩ solved from the convolution equation on the torus
    pub green: Vec<f64>,
    /// denominator 𝒥̂ − (λ/2)ΣΦ
    pub denominator: f64,
}

impl EffectiveWalk {
    /// 𝒢(x)·|x|^{d−2}·A/(c_d·denominator) per shell; → 1 in the scaling
    /// window when the decay follows the predicted amplitude.
    pub fn decay_ratios(&self, geom: &TorusGeometry, window: (f64, f64)) -> Vec<(f64, f64)> {
        let d = geom.dimension() as f64;
        let c_d = green::asymptotic_amplitude(geom.dimension(), 1.0).unwrap();
        let mut out = Vec::new();
        for (i, &g) in self.green.iter().enumerate() {
            let r = geom.min_image_norm2(i).sqrt();
            if r < window.0 || r > window.1 {
                continue;
            }
            let reference = c_d * self.denominator / self.amplitude * r.powf(2.0 - d);
            out.push((r, g / reference));
        }
        out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        out
    }
}

/// Assemble the effective walk from a Φ table.
pub fn effective_linear_sd(
    phi_table: &[f64],
    coupling: &Coupling,
    lambda: f64,
    mu: f64,
    geom: &TorusGeometry,
) -> Result<EffectiveWalk, DeconvError> {
    if phi_table.len() != geom.volume() {
        return Err(DeconvError::ShapeMismatch(phi_table.len(), geom.volume()));
    }
    let j_table = coupling.torus_table(geom);
    let jhat = coupling.jhat();
    let phi_sum: f64 = phi_table.iter().sum();
    let denominator = jhat - lambda / 2.0 * phi_sum;
    let chi_inv = mu - jhat + lambda / 2.0 * phi_sum;
    let step_table: Vec<f64> = j_table
        .iter()
        .zip(phi_table)
        .map(|(j, f)| (j - lambda / 2.0 * f) / denominator)
        .collect();

    let norm2 = geom.norm2_table();
    let amplitude: f64 = j_table
        .iter()
        .zip(phi_table)
        .zip(&norm2)
        .map(|((j, f), n)| n * (j - lambda / 2.0 * f))
        .sum();
    if amplitude <= 0.0 {
        return Err(DeconvError::NonpositiveA(amplitude));
    }

    let killing = chi_inv / mu;
    let p_eff = 1.0 - killing;
    let policy = if p_eff == 1.0 {
        ZeroModePolicy::Subtract
    } else {
        ZeroModePolicy::Reject
    };
    let green = green::green_torus(&step_table, geom, p_eff, policy)?;

    Ok(EffectiveWalk {
        step_table,
        chi_inv,
        killing,
        amplitude,
        green: green.values().to_vec(),
        denominator,
    })
}
