//! Random-walk Green functions S_p and n-step convolution diagnostics.
//!
//! The torus backend solves the convolution equation
//! S_p = δ + p·D∗S_p in Fourier space, Ŝ(k) = 1/(1 − p·D̂(k)). The
//! free-space nearest-neighbor backend lives in [`crate::bessel`]. The
//! convolution checks estimate the constants in the n-step decay bounds
//! ⟨x⟩^{d+2} D^{*n}(x)/n and the symmetrized second difference, and fit the
//! exponent of power-law convolution sums against its predicted value.

use crate::fft;
use crate::lattice::{Coupling, StepDistribution, TorusGeometry};
use crate::stats::{fit_loglog, LinFit};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GreenError {
    #[error("fugacity must lie in [0,1], got {0}")]
    FugacityOutOfRange(f64),
    #[error("p = 1 on a torus needs a zero-mode policy")]
    SingularMode,
    #[error("inverse transform not real: imaginary residue {0:e}")]
    ImaginaryResidue(f64),
    #[error("massless asymptotics require d > 2, got {0}")]
    DimensionTooLow(usize),
    #[error("jhat·V product must be positive, got {0}")]
    NonpositiveScale(f64),
    #[error("need at least 4 radii in the fit window, got {0}")]
    RangeTooSmall(usize),
    #[error("mass gap closed: mu <= max_k Jhat(k) ({0} <= {1})")]
    MassGapClosed(f64, f64),
}

/// Treatment of the k = 0 mode for the massless (p = 1) torus Green
/// function, which is otherwise singular.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroModePolicy {
    /// Refuse to build the table at p = 1.
    Reject,
    /// Set the zero mode to zero: the table is the massless Green function
    /// modulo constants, so only differences and decay are meaningful.
    Subtract,
}

/// Tabulated Green function S_p on a torus.
#[derive(Debug, Clone)]
pub struct GreenTable {
    geom: TorusGeometry,
    p: f64,
    values: Vec<f64>,
    zero_mode_subtracted: bool,
}

impl GreenTable {
    pub fn geometry(&self) -> &TorusGeometry {
        &self.geom
    }

    pub fn fugacity(&self) -> f64 {
        self.p
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, x: &[i32]) -> f64 {
        self.values[self.geom.index_of(x)]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn zero_mode_subtracted(&self) -> bool {
        self.zero_mode_subtracted
    }
}

/// Solve S_p = δ + p·D∗S_p on the torus for a per-site step table.
pub fn green_torus(
    step_table: &[f64],
    geom: &TorusGeometry,
    p: f64,
    policy: ZeroModePolicy,
) -> Result<GreenTable, GreenError> {
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(GreenError::FugacityOutOfRange(p));
    }
    let dims = geom.dims();
    let d_hat = fft::forward_real(step_table, &dims);
    let mut s_hat = vec![Complex64::new(0.0, 0.0); geom.volume()];
    let mut subtracted = false;
    for (idx, (out, dk)) in s_hat.iter_mut().zip(&d_hat).enumerate() {
        // D is symmetric, so D̂ is real up to rounding
        let denom = 1.0 - p * dk.re;
        if denom.abs() < 1e-14 {
            if idx == 0 && p == 1.0 {
                match policy {
                    ZeroModePolicy::Reject => return Err(GreenError::SingularMode),
                    ZeroModePolicy::Subtract => {
                        *out = Complex64::new(0.0, 0.0);
                        subtracted = true;
                        continue;
                    }
                }
            }
            return Err(GreenError::SingularMode);
        }
        *out = Complex64::new(1.0 / denom, 0.0);
    }
    let (values, max_im) = fft::inverse_to_real(s_hat, &dims);
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    if max_im > 1e-12 * scale {
        return Err(GreenError::ImaginaryResidue(max_im));
    }
    Ok(GreenTable {
        geom: geom.clone(),
        p,
        values,
        zero_mode_subtracted: subtracted,
    })
}

/// Convenience wrapper taking a step distribution.
pub fn green_torus_from_step(
    step: &StepDistribution,
    geom: &TorusGeometry,
    p: f64,
    policy: ZeroModePolicy,
) -> Result<GreenTable, GreenError> {
    green_torus(&step.torus_table(geom), geom, p, policy)
}

/// Exact Gaussian covariance (μ·δ − 𝒥)^{-1} on the torus, per site.
pub fn gaussian_torus_covariance(
    coupling: &Coupling,
    mu: f64,
    geom: &TorusGeometry,
) -> Result<Vec<f64>, GreenError> {
    let dims = geom.dims();
    let j_hat = fft::forward_real(&coupling.torus_table(geom), &dims);
    let max_j = j_hat.iter().fold(f64::MIN, |m, z| m.max(z.re));
    if mu <= max_j {
        return Err(GreenError::MassGapClosed(mu, max_j));
    }
    let spec: Vec<Complex64> = j_hat
        .iter()
        .map(|z| Complex64::new(1.0 / (mu - z.re), 0.0))
        .collect();
    let (values, max_im) = fft::inverse_to_real(spec, &dims);
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    if max_im > 1e-12 * scale {
        return Err(GreenError::ImaginaryResidue(max_im));
    }
    Ok(values)
}

/// The constant in the massless asymptotics
/// S ~ (d/2)·Γ((d−2)/2)·π^{−d/2} / (𝒥̂V·|x|^{d−2}).
pub fn asymptotic_amplitude(d: usize, jhat_v_product: f64) -> Result<f64, GreenError> {
    if d <= 2 {
        return Err(GreenError::DimensionTooLow(d));
    }
    if jhat_v_product <= 0.0 {
        return Err(GreenError::NonpositiveScale(jhat_v_product));
    }
    let df = d as f64;
    let gamma = statrs::function::gamma::gamma((df - 2.0) / 2.0);
    Ok(df / 2.0 * gamma * std::f64::consts::PI.powf(-df / 2.0) / jhat_v_product)
}

// ---------------------------------------------------------------------------
// symmetric tables on Z^d and exact n-step convolutions
// ---------------------------------------------------------------------------

/// A Z^d-symmetric function of bounded support, stored on the canonical
/// domain 0 <= x_1 <= ... <= x_d (sorted absolute coordinates).
#[derive(Debug, Clone)]
pub struct SymmetricTable {
    d: usize,
    values: HashMap<u64, f64>,
    radius: i32,
}

fn canonical_key(v: &[i32]) -> u64 {
    debug_assert!(v.len() <= 8);
    let mut mags: [u8; 8] = [0; 8];
    for (slot, &c) in mags.iter_mut().zip(v) {
        let a = c.unsigned_abs();
        debug_assert!(a < 256);
        *slot = a as u8;
    }
    mags[..v.len()].sort_unstable();
    u64::from_le_bytes(mags)
}

impl SymmetricTable {
    pub fn delta(d: usize) -> Self {
        let mut values = HashMap::new();
        values.insert(canonical_key(&vec![0; d]), 1.0);
        SymmetricTable {
            d,
            values,
            radius: 0,
        }
    }

    pub fn get(&self, v: &[i32]) -> f64 {
        self.values.get(&canonical_key(v)).copied().unwrap_or(0.0)
    }

    pub fn radius(&self) -> i32 {
        self.radius
    }

    /// One convolution step with a step distribution (symmetry is preserved).
    pub fn convolve_step(&self, step: &StepDistribution) -> Self {
        let step_range = step
            .support()
            .iter()
            .map(|(v, _)| v.iter().map(|c| c.abs()).max().unwrap_or(0))
            .max()
            .unwrap_or(0);
        let new_radius = self.radius + step_range;
        let mut values = HashMap::new();
        let mut x = vec![0i32; self.d];
        let mut shifted = vec![0i32; self.d];
        let d = self.d;
        enumerate_canonical(d, new_radius, 0, &mut x, &mut |coords| {
            let mut acc = 0.0;
            for (v, w) in step.support() {
                for i in 0..d {
                    shifted[i] = coords[i] - v[i];
                }
                acc += w * self.get(&shifted);
            }
            if acc != 0.0 {
                values.insert(canonical_key(coords), acc);
            }
        });
        SymmetricTable {
            d,
            values,
            radius: new_radius,
        }
    }

    /// Visit every canonical point of the bounding domain that has a value.
    pub fn for_each(&self, mut f: impl FnMut(&[i32], f64)) {
        let mut x = vec![0i32; self.d];
        enumerate_canonical(self.d, self.radius, 0, &mut x, &mut |coords| {
            if let Some(&v) = self.values.get(&canonical_key(coords)) {
                f(coords, v);
            }
        });
    }
}

fn enumerate_canonical(
    d: usize,
    radius: i32,
    axis: usize,
    x: &mut Vec<i32>,
    f: &mut impl FnMut(&[i32]),
) {
    if axis == d {
        f(x);
        return;
    }
    let lo = if axis == 0 { 0 } else { x[axis - 1] };
    for c in lo..=radius {
        x[axis] = c;
        enumerate_canonical(d, radius, axis + 1, x, f);
    }
}

fn bracket_norm2(v: &[i32]) -> f64 {
    let n2: f64 = v.iter().map(|&c| (c as f64) * (c as f64)).sum();
    n2.max(1.0)
}

/// Outcome of the n-step convolution diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct ConvolutionReport {
    /// (n, sup_x ⟨x⟩^{d+2} D^{*n}(x)/n)
    pub sup_weighted: Vec<(usize, f64)>,
    /// (n, sup over x and 0 < |y| <= |x|/3 of ⟨x⟩^{d+4}|y|^{-2}|Δ²D^{*n}|/n)
    pub sup_second_diff: Vec<(usize, f64)>,
    /// max/min of the sup constants across the n range
    pub growth_ratio: f64,
    /// fitted exponent of the power-law convolution sum, when requested
    pub power_fit: Option<PowerConvFit>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PowerConvFit {
    pub a: f64,
    pub b: f64,
    pub expected_exponent: f64,
    pub fit: LinFit,
    pub points: Vec<(f64, f64)>,
}

/// Estimate the constants of the n-step convolution bounds for `step`,
/// scanning displacements out to the table support, and optionally fit the
/// exponent of Σ_y ⟨x−y⟩^{−a}⟨y⟩^{−b} over axis radii 3..=radius.
pub fn convolution_bounds_check(
    step: &StepDistribution,
    n_list: &[usize],
    radius: i32,
    power_check: Option<(f64, f64)>,
) -> Result<ConvolutionReport, GreenError> {
    let d = step.dimension();
    let df = d as f64;
    let n_max = n_list.iter().copied().max().unwrap_or(0);
    let mut tables: HashMap<usize, SymmetricTable> = HashMap::new();
    let mut current = SymmetricTable::delta(d);
    for n in 1..=n_max {
        current = current.convolve_step(step);
        if n_list.contains(&n) {
            tables.insert(n, current.clone());
        }
    }

    let mut sup_weighted = Vec::new();
    let mut sup_second_diff = Vec::new();
    for &n in n_list {
        let table = &tables[&n];
        let nf = n as f64;
        let mut sup = 0.0f64;
        table.for_each(|x, v| {
            let w = bracket_norm2(x).powf((df + 2.0) / 2.0);
            sup = sup.max(w * v / nf);
        });
        sup_weighted.push((n, sup));

        // second differences: y over the full box |y|_inf <= 2 with |y| <= |x|/3
        let mut sup2 = 0.0f64;
        let ys = second_diff_offsets(d);
        let mut plus = vec![0i32; d];
        let mut minus = vec![0i32; d];
        table.for_each(|x, v| {
            let x2 = bracket_norm2(x);
            if x2 < 9.0 {
                return;
            }
            let w = x2.powf((df + 4.0) / 2.0);
            for y in &ys {
                let y2: f64 = y.iter().map(|&c| (c * c) as f64).sum();
                if y2 * 9.0 > x2 {
                    continue;
                }
                for i in 0..d {
                    plus[i] = x[i] + y[i];
                    minus[i] = x[i] - y[i];
                }
                let diff = (v - 0.5 * (table.get(&plus) + table.get(&minus))).abs();
                sup2 = sup2.max(w / y2 * diff / nf);
            }
        });
        sup_second_diff.push((n, sup2));
    }

    // growth relative to the smallest order: the bound constants must not
    // blow up along the n range (decrease is fine)
    let first = sup_weighted.first().map_or(0.0, |&(_, c)| c);
    let growth_ratio = if first > 0.0 {
        sup_weighted
            .iter()
            .map(|&(_, c)| c / first)
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };

    let power_fit = match power_check {
        None => None,
        Some((a, b)) => {
            let radii: Vec<i32> = (3..=radius).filter(|r| r % 2 == 1 || r % 4 == 0).collect();
            if radii.len() < 4 {
                return Err(GreenError::RangeTooSmall(radii.len()));
            }
            let r_direct = 4 * radius + 24;
            let mut points = Vec::new();
            for &r in &radii {
                let s = power_conv_sum(a, b, d, r, r_direct);
                points.push((r as f64, s));
            }
            let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
            let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
            let fit = fit_loglog(&xs, &ys);
            let expected = a.max(df) - a - b;
            Some(PowerConvFit {
                a,
                b,
                expected_exponent: expected,
                fit,
                points,
            })
        }
    };

    Ok(ConvolutionReport {
        sup_weighted,
        sup_second_diff,
        growth_ratio,
        power_fit,
    })
}

fn second_diff_offsets(d: usize) -> Vec<Vec<i32>> {
    let mut out = Vec::new();
    let mut v = vec![-2i32; d];
    loop {
        if v.iter().any(|&c| c != 0) {
            out.push(v.clone());
        }
        let mut axis = 0;
        loop {
            if axis == d {
                return out;
            }
            v[axis] += 1;
            if v[axis] <= 2 {
                break;
            }
            v[axis] = -2;
            axis += 1;
        }
    }
}

/// Σ_{y ∈ Z^d} ⟨x−y⟩^{−a}⟨y⟩^{−b} for x = (x_axis, 0, …, 0):
/// exact lattice sum over the Euclidean ball |y| <= r_direct (using a
/// squared-norm histogram over the last d−1 coordinates), plus the
/// continuum tail integral over |y| > r_direct.
pub fn power_conv_sum(a: f64, b: f64, d: usize, x_axis: i32, r_direct: i32) -> f64 {
    let r = r_direct;
    let r2 = (r as f64) * (r as f64);
    // histogram of the squared norm over Z^{d-1} restricted to the box
    let max_s2 = ((d - 1) as i64 * (r as i64) * (r as i64)) as usize;
    let mut hist = vec![0.0f64; max_s2 + 1];
    hist[0] = 1.0;
    for _ in 0..d - 1 {
        let mut next = vec![0.0f64; max_s2 + 1];
        for (s2, &count) in hist.iter().enumerate() {
            if count == 0.0 {
                continue;
            }
            for c in -r..=r {
                let t = s2 + (c * c) as usize;
                if t <= max_s2 {
                    next[t] += count;
                }
            }
        }
        hist = next;
    }

    let xf = x_axis as f64;
    let mut direct = 0.0f64;
    for y1 in -r..=r {
        let y1f = y1 as f64;
        let cap = r2 - y1f * y1f;
        if cap < 0.0 {
            continue;
        }
        let s2_cap = (cap.floor() as usize).min(max_s2);
        for (s2, &count) in hist[..=s2_cap].iter().enumerate() {
            if count == 0.0 {
                continue;
            }
            let ny = (y1f * y1f + s2 as f64).max(1.0);
            let nxy = ((xf - y1f) * (xf - y1f) + s2 as f64).max(1.0);
            direct += count * nxy.powf(-a / 2.0) * ny.powf(-b / 2.0);
        }
    }

    direct + power_tail_integral(a, b, d, xf, r as f64)
}

/// Continuum tail ∫_{|y|>R} |y|^{−b} |x−y|^{−a} d^dy in spherical
/// coordinates, the radial part mapped to [0,1] by r = R/u.
pub fn power_tail_integral(a: f64, b: f64, d: usize, x: f64, r0: f64) -> f64 {
    let df = d as f64;
    // surface area of the unit sphere in R^{d-1}
    let s_dm2 = 2.0 * std::f64::consts::PI.powf((df - 1.0) / 2.0)
        / statrs::function::gamma::gamma((df - 1.0) / 2.0);

    let n_theta = 256;
    let n_u = 512;
    let h_theta = std::f64::consts::PI / n_theta as f64;
    let h_u = 1.0 / n_u as f64;

    let mut total = 0.0;
    for iu in 0..=n_u {
        let u = iu as f64 * h_u;
        if u == 0.0 {
            continue; // integrand vanishes at r = infinity for a+b > d
        }
        let wu = simpson_weight(iu, n_u);
        let r = r0 / u;
        let drdu = r0 / (u * u);
        let mut angular = 0.0;
        for it in 0..=n_theta {
            let theta = it as f64 * h_theta;
            let wt = simpson_weight(it, n_theta);
            let dist2 = (r * r + x * x - 2.0 * r * x * theta.cos()).max(1.0);
            angular += wt * theta.sin().powf(df - 2.0) * dist2.powf(-a / 2.0);
        }
        angular *= h_theta / 3.0;
        total += wu * r.powf(df - 1.0 - b) * angular * drdu;
    }
    total * h_u / 3.0 * s_dm2
}

fn simpson_weight(i: usize, n: usize) -> f64 {
    if i == 0 || i == n {
        1.0
    } else if i % 2 == 1 {
        4.0
    } else {
        2.0
    }
}
