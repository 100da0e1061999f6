//! Scaled modified Bessel functions and the free-space nearest-neighbor
//! Green function.
//!
//! The walk identity S_p(x) = ∫₀^∞ e^{−t} Π_i I_{x_i}(p t/d) dt turns the
//! lattice Green function into a one-dimensional integral. Everything here
//! works with the scaled function Ĩ_ν(z) = e^{−z} I_ν(z), so the integrand
//! Π_i Ĩ_{x_i}(p t/d) · e^{−(1−p)t} never overflows.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BesselError {
    #[error("fugacity must lie in [0,1], got {0}")]
    FugacityOutOfRange(f64),
    #[error("massless walk requires d > 2, got d = {0}")]
    DimensionTooLow(usize),
    #[error("quadrature did not converge ({0} refinement levels)")]
    QuadratureNotConverged(usize),
}

/// Ĩ_ν(z) = e^{−z} I_ν(z) for a single order.
pub fn scaled_bessel_i(order: u32, z: f64) -> f64 {
    scaled_bessel_i_multi(&[order], z)[0]
}

/// Ĩ_ν(z) for several orders at once (one backward recurrence for all).
pub fn scaled_bessel_i_multi(orders: &[u32], z: f64) -> Vec<f64> {
    assert!(z >= 0.0, "argument must be nonnegative");
    if z == 0.0 {
        return orders.iter().map(|&n| if n == 0 { 1.0 } else { 0.0 }).collect();
    }
    let n_max = orders.iter().copied().max().unwrap_or(0);
    if z >= asymptotic_threshold(n_max) {
        orders.iter().map(|&n| scaled_asymptotic(n, z)).collect()
    } else {
        miller_backward(orders, z, n_max)
    }
}

fn asymptotic_threshold(n: u32) -> f64 {
    let n2 = (n as f64) * (n as f64);
    (3.0 * n2 + 40.0).max(40.0)
}

/// Large-z expansion I_ν(z) ~ e^z (2πz)^{−1/2} Σ_k (−)^k a_k(ν)/z^k.
/// Used only where the series converges to machine precision (z ≳ 3ν²).
fn scaled_asymptotic(order: u32, z: f64) -> f64 {
    let mu = 4.0 * (order as f64) * (order as f64);
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut prev = f64::INFINITY;
    for k in 1..=40u32 {
        let kf = k as f64;
        let factor = -(mu - (2.0 * kf - 1.0).powi(2)) / (kf * 8.0 * z);
        term *= factor;
        if term.abs() > prev {
            break; // asymptotic series started diverging
        }
        sum += term;
        prev = term.abs();
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum / (2.0 * std::f64::consts::PI * z).sqrt()
}

/// Miller's backward recurrence, normalized by e^z = I_0 + 2 Σ_{m≥1} I_m,
/// which yields the scaled values directly.
fn miller_backward(orders: &[u32], z: f64, n_max: u32) -> Vec<f64> {
    let w = z.max(n_max as f64).max(1.0);
    let start = (w + 2.0 * (40.0 * w).sqrt()) as u32 + n_max + 30;
    let mut out = vec![0.0f64; orders.len()];
    let mut high = 0.0f64; // I_{m+1} trial
    let mut mid = 1e-260f64; // I_m trial
    let mut norm = 0.0f64;
    const RESCALE: f64 = 1e260;
    for m in (0..=start).rev() {
        // record trial value for any requested order m
        for (slot, &n) in out.iter_mut().zip(orders) {
            if n == m {
                *slot = mid;
            }
        }
        norm += if m == 0 { mid } else { 2.0 * mid };
        if m > 0 {
            let low = high + (2.0 * m as f64 / z) * mid;
            high = mid;
            mid = low;
            if mid.abs() > RESCALE {
                mid /= RESCALE;
                high /= RESCALE;
                norm /= RESCALE;
                for slot in out.iter_mut() {
                    *slot /= RESCALE;
                }
            }
        }
    }
    for slot in out.iter_mut() {
        *slot /= norm;
    }
    out
}

/// Free-space Green function S_p(x) of the nearest-neighbor walk on Z^d,
/// via the Bessel-product integral. For p = 1 the walk must be transient
/// (d > 2); the integral is split into a trapezoid head and an analytic
/// tail evaluated in the asymptotic regime of every Bessel factor.
pub fn green_bessel_nn(x: &[i32], p: f64, max_levels: usize) -> Result<f64, BesselError> {
    let d = x.len();
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(BesselError::FugacityOutOfRange(p));
    }
    if p == 1.0 && d <= 2 {
        return Err(BesselError::DimensionTooLow(d));
    }
    if p == 0.0 {
        return Ok(if x.iter().all(|&c| c == 0) { 1.0 } else { 0.0 });
    }

    // group repeated |x_i| so each distinct order is evaluated once per node
    let mut orders: Vec<u32> = x.iter().map(|&c| c.unsigned_abs()).collect();
    orders.sort_unstable();
    let mut distinct: Vec<(u32, i32)> = Vec::new();
    for n in orders {
        match distinct.last_mut() {
            Some((m, mult)) if *m == n => *mult += 1,
            _ => distinct.push((n, 1)),
        }
    }
    let order_list: Vec<u32> = distinct.iter().map(|&(n, _)| n).collect();
    let n_max = *order_list.last().unwrap();

    let df = d as f64;
    let integrand = |t: f64| -> f64 {
        if t == 0.0 {
            return if n_max == 0 { 1.0 } else { 0.0 };
        }
        let z = p * t / df;
        let factors = scaled_bessel_i_multi(&order_list, z);
        let mut prod = (-(1.0 - p) * t).exp();
        for (f, &(_, mult)) in factors.iter().zip(&distinct) {
            prod *= f.powi(mult);
        }
        prod
    };

    let head_end = if p == 1.0 {
        df * asymptotic_threshold(n_max).max(80.0)
    } else {
        // exponential killing truncates the integral on its own
        (42.0 / (1.0 - p)).max(df * 40.0)
    };

    let head = trapezoid_refine(&integrand, 0.0, head_end, 1e-10, max_levels)?;
    let tail = if p == 1.0 {
        tail_integral(&order_list, &distinct, head_end, df)
    } else {
        0.0
    };
    Ok(head + tail)
}

/// Composite trapezoid with step halving until the relative change drops
/// below `tol`.
fn trapezoid_refine(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    max_levels: usize,
) -> Result<f64, BesselError> {
    let mut n = 256usize;
    let h0 = (b - a) / n as f64;
    let mut sum = 0.5 * (f(a) + f(b));
    for i in 1..n {
        sum += f(a + i as f64 * h0);
    }
    let mut estimate = sum * h0;
    for level in 0..max_levels {
        let h = (b - a) / n as f64;
        let mut mid_sum = 0.0;
        for i in 0..n {
            mid_sum += f(a + (i as f64 + 0.5) * h);
        }
        let refined = 0.5 * estimate + 0.5 * h * mid_sum;
        let change = (refined - estimate).abs();
        estimate = refined;
        n *= 2;
        if level >= 2 && change <= tol * estimate.abs().max(1e-300) {
            return Ok(estimate);
        }
    }
    Err(BesselError::QuadratureNotConverged(max_levels))
}

/// ∫_T^∞ Π_i Ĩ_{x_i}(t/d) dt for the massless walk, with t = T/s² mapping
/// the tail onto [0,1] where the integrand is smooth.
fn tail_integral(order_list: &[u32], distinct: &[(u32, i32)], t0: f64, df: f64) -> f64 {
    let g = |s: f64| -> f64 {
        if s == 0.0 {
            return 0.0; // integrand vanishes like s^{d-3} for d > 2
        }
        let u = s * s;
        let t = t0 / u;
        let factors = scaled_bessel_i_multi(order_list, t / df);
        let mut prod = t0 / (u * u) * 2.0 * s;
        for (f, &(_, mult)) in factors.iter().zip(distinct) {
            prod *= f.powi(mult);
        }
        prod
    };
    simpson(&g, 0.0, 1.0, 4096)
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    debug_assert!(n % 2 == 0);
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    // series definition, independent of the recurrence/asymptotic paths
    fn series_scaled(order: u32, z: f64) -> f64 {
        let mut term = 1.0f64;
        for k in 1..=order {
            term *= z / 2.0 / k as f64;
        }
        let mut sum = 0.0;
        let mut m = 0u32;
        loop {
            sum += term;
            m += 1;
            let next = term * (z * z / 4.0) / (m as f64 * (m as f64 + order as f64));
            if next < 1e-18 * sum || m > 500 {
                break;
            }
            term = next;
        }
        sum * (-z).exp()
    }

    #[test]
    fn matches_series_small_z() {
        for &z in &[0.1, 1.0, 4.0, 10.0, 25.0] {
            for n in 0..8u32 {
                let a = scaled_bessel_i(n, z);
                let b = series_scaled(n, z);
                assert!(
                    (a - b).abs() <= 1e-13 * b.abs().max(1e-300),
                    "n={n} z={z}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn branches_agree_at_threshold() {
        // force both paths around the switchover and compare
        for n in [0u32, 1, 3, 6] {
            let z = asymptotic_threshold(n) + 1.0;
            let asym = scaled_asymptotic(n, z);
            let miller = miller_backward(&[n], z, n)[0];
            assert!(
                (asym - miller).abs() <= 1e-12 * asym.abs(),
                "n={n} z={z}: {asym} vs {miller}"
            );
        }
    }

    #[test]
    fn known_values() {
        // I_0(1) = 1.2660658777520084, I_1(1) = 0.5651591039924851
        let e = 1f64.exp();
        assert!((scaled_bessel_i(0, 1.0) - 1.2660658777520084 / e).abs() < 1e-14);
        assert!((scaled_bessel_i(1, 1.0) - 0.5651591039924851 / e).abs() < 1e-14);
    }

    #[test]
    fn green_at_p_zero() {
        assert_eq!(green_bessel_nn(&[0, 0, 0, 0, 0], 0.0, 20).unwrap(), 1.0);
        assert_eq!(green_bessel_nn(&[1, 0, 0, 0, 0], 0.0, 20).unwrap(), 0.0);
    }

    #[test]
    fn green_origin_neumann_series() {
        // S_p(o) = sum_n p^n P_n(o); compare against exact step counting in d=1... d=3
        // via the convolution identity S_p(o) for small p: 1 + p^2/(2d) + O(p^4)
        let p = 0.1;
        let d = 3;
        let val = green_bessel_nn(&[0, 0, 0], p, 22).unwrap();
        // first terms: P_0=1, P_2(o)=1/(2d), P_4(o)= (by direct count) in d=3: 15/216... use
        // numerically safe bound: |val - (1 + p^2/6)| < 3e-4
        assert!((val - (1.0 + p * p / (2.0 * d as f64))).abs() < 3e-4, "{val}");
    }

    #[test]
    fn green_d5_massless_return() {
        // the d=5 massless walk's expected visits to the origin
        let val = green_bessel_nn(&[0, 0, 0, 0, 0], 1.0, 24).unwrap();
        assert!((val - 1.1563).abs() < 5e-4, "S_1(o) = {val}");
        // neighbor value pinned by S_1(o) = 1 + S_1(e1) at p=1
        let e1 = green_bessel_nn(&[1, 0, 0, 0, 0], 1.0, 24).unwrap();
        assert!((val - 1.0 - e1).abs() < 1e-8, "sum rule: {val} vs 1 + {e1}");
    }
}
