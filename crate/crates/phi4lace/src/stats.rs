//! Statistical error analysis for Markov-chain estimates and small fitting
//! helpers shared by the decay checks.
//!
//! Errors follow the blocking convention: the integrated autocorrelation
//! time is measured with a self-consistent window, the series is cut into
//! blocks of at least six autocorrelation times, and standard errors come
//! from the scatter of block means. Nonlinear functions of several
//! observables are handled by leave-one-block-out jackknife.

use serde::Serialize;

/// A value with statistical error and provenance metadata.
#[derive(Debug, Clone, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub tau_int: f64,
    pub samples: usize,
    pub burn_in: usize,
    pub seed: u64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate {
            mean: value,
            stderr: 0.0,
            tau_int: 0.0,
            samples: 0,
            burn_in: 0,
            seed: 0,
        }
    }

    /// Inverse-variance weighted merge of independent estimates.
    pub fn merge(parts: &[Estimate]) -> Estimate {
        assert!(!parts.is_empty());
        let mut wsum = 0.0;
        let mut vsum = 0.0;
        for e in parts {
            let w = 1.0 / (e.stderr * e.stderr);
            wsum += w;
            vsum += w * e.mean;
        }
        Estimate {
            mean: vsum / wsum,
            stderr: (1.0 / wsum).sqrt(),
            tau_int: parts.iter().map(|e| e.tau_int).fold(0.0, f64::max),
            samples: parts.iter().map(|e| e.samples).sum(),
            burn_in: parts[0].burn_in,
            seed: parts[0].seed,
        }
    }
}

pub fn mean(series: &[f64]) -> f64 {
    series.iter().sum::<f64>() / series.len() as f64
}

/// Integrated autocorrelation time with a Madras-Sokal style
/// self-consistent window: stop at the smallest W with W >= c·tau(W).
pub fn integrated_autocorr_time(series: &[f64]) -> f64 {
    let n = series.len();
    if n < 8 {
        return 0.5;
    }
    let m = mean(series);
    let var: f64 = series.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / n as f64;
    if var <= 0.0 {
        return 0.5;
    }
    const C: f64 = 6.0;
    let mut tau = 0.5;
    let w_max = n / 4;
    for t in 1..=w_max {
        let mut acc = 0.0;
        for i in 0..n - t {
            acc += (series[i] - m) * (series[i + t] - m);
        }
        let rho = acc / ((n - t) as f64 * var);
        tau += rho;
        if (t as f64) >= C * tau {
            break;
        }
    }
    tau.max(0.5)
}

/// Means of consecutive blocks of length `block_len` (tail remainder dropped).
pub fn block_means(series: &[f64], block_len: usize) -> Vec<f64> {
    let n_blocks = series.len() / block_len;
    (0..n_blocks)
        .map(|b| mean(&series[b * block_len..(b + 1) * block_len]))
        .collect()
}

/// Block length implied by the blocking rule: at least 6 autocorrelation
/// times per block.
pub fn blocking_length(tau_int: f64) -> usize {
    (6.0 * tau_int).ceil().max(1.0) as usize
}

/// Blocked estimate of a scalar series.
pub fn estimate_series(series: &[f64], burn_in: usize, seed: u64) -> Estimate {
    let tau = integrated_autocorr_time(series);
    let block_len = blocking_length(tau);
    let blocks = block_means(series, block_len);
    let m = mean(series);
    let stderr = if blocks.len() >= 2 {
        let bm = mean(&blocks);
        let var: f64 =
            blocks.iter().map(|x| (x - bm) * (x - bm)).sum::<f64>() / (blocks.len() - 1) as f64;
        (var / blocks.len() as f64).sqrt()
    } else {
        f64::NAN
    };
    Estimate {
        mean: m,
        stderr,
        tau_int: tau,
        samples: series.len(),
        burn_in,
        seed,
    }
}

/// Leave-one-block-out jackknife of `f` over several synchronous series.
/// All series must have equal length; the same block decomposition is used
/// for each so cross-correlations propagate into the error.
pub fn jackknife<F>(series_list: &[&[f64]], block_len: usize, f: F) -> (f64, f64)
where
    F: Fn(&[f64]) -> f64,
{
    let n = series_list[0].len();
    assert!(series_list.iter().all(|s| s.len() == n));
    let n_blocks = n / block_len;
    assert!(n_blocks >= 2, "need at least two blocks for jackknife");
    let used = n_blocks * block_len;

    let totals: Vec<f64> = series_list
        .iter()
        .map(|s| s[..used].iter().sum::<f64>())
        .collect();
    let full: Vec<f64> = totals.iter().map(|t| t / used as f64).collect();
    let f_full = f(&full);

    let mut replicas = Vec::with_capacity(n_blocks);
    for b in 0..n_blocks {
        let args: Vec<f64> = series_list
            .iter()
            .zip(&totals)
            .map(|(s, &tot)| {
                let block_sum: f64 = s[b * block_len..(b + 1) * block_len].iter().sum();
                (tot - block_sum) / (used - block_len) as f64
            })
            .collect();
        replicas.push(f(&args));
    }
    let rm = mean(&replicas);
    let var: f64 = replicas.iter().map(|x| (x - rm) * (x - rm)).sum::<f64>();
    let err = ((n_blocks - 1) as f64 / n_blocks as f64 * var).sqrt();
    (f_full, err)
}

/// Result of a straight-line fit y = intercept + slope·x.
#[derive(Debug, Clone, Serialize)]
pub struct LinFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_err: f64,
    pub intercept_err: f64,
    pub cov_slope_intercept: f64,
    pub chi2: f64,
    pub dof: usize,
    /// rms of residuals, the figure of merit for unweighted fits
    pub residual_rms: f64,
}

/// Weighted least squares with per-point standard deviations.
pub fn weighted_linear_fit(x: &[f64], y: &[f64], sigma: &[f64]) -> LinFit {
    assert!(x.len() == y.len() && y.len() == sigma.len() && x.len() >= 2);
    let (mut s, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..x.len() {
        let w = 1.0 / (sigma[i] * sigma[i]);
        s += w;
        sx += w * x[i];
        sy += w * y[i];
        sxx += w * x[i] * x[i];
        sxy += w * x[i] * y[i];
    }
    let det = s * sxx - sx * sx;
    let intercept = (sxx * sy - sx * sxy) / det;
    let slope = (s * sxy - sx * sy) / det;
    let mut chi2 = 0.0;
    let mut res2 = 0.0;
    for i in 0..x.len() {
        let r = y[i] - intercept - slope * x[i];
        chi2 += (r / sigma[i]) * (r / sigma[i]);
        res2 += r * r;
    }
    LinFit {
        slope,
        intercept,
        slope_err: (s / det).sqrt(),
        intercept_err: (sxx / det).sqrt(),
        cov_slope_intercept: -sx / det,
        chi2,
        dof: x.len().saturating_sub(2),
        residual_rms: (res2 / x.len() as f64).sqrt(),
    }
}

/// Unweighted least squares on (log x, log y); use for decay-exponent fits
/// over a declared window.
pub fn fit_loglog(x: &[f64], y: &[f64]) -> LinFit {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let sigma = vec![1.0; x.len()];
    weighted_linear_fit(&lx, &ly, &sigma)
}

/// Upper-tail p-value of a chi-square statistic.
pub fn chi_square_p_value(stat: f64, dof: usize) -> f64 {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    let dist = ChiSquared::new(dof as f64).expect("positive dof");
    1.0 - dist.cdf(stat)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iid_series_tau_near_half() {
        // deterministic low-discrepancy stand-in for white noise
        let series: Vec<f64> = (0..4096)
            .map(|i| ((i as f64 * 0.7548776662466927) % 1.0) - 0.5)
            .collect();
        let tau = integrated_autocorr_time(&series);
        assert!(tau < 1.0, "tau = {tau}");
    }

    #[test]
    fn blocked_error_scales() {
        let series: Vec<f64> = (0..10000)
            .map(|i| (i as f64 * 0.618033988749895) % 1.0)
            .collect();
        let e = estimate_series(&series, 0, 7);
        assert!((e.mean - 0.5).abs() < 0.01);
        assert!(e.stderr > 0.0 && e.stderr < 0.02);
    }

    #[test]
    fn jackknife_linear_matches_blocking() {
        let series: Vec<f64> = (0..8192)
            .map(|i| (i as f64 * 0.37).sin() + 0.25 * (i as f64 * 0.011).cos())
            .collect();
        let tau = integrated_autocorr_time(&series);
        let bl = blocking_length(tau);
        let direct = estimate_series(&series, 0, 1);
        let (jk_mean, jk_err) = jackknife(&[&series], bl, |m| m[0]);
        // the jackknife drops the tail remainder past the last full block
        let used = series.len() / bl * bl;
        assert!((jk_mean - mean(&series[..used])).abs() < 1e-12);
        // identity function: jackknife error equals blocked stderr up to
        // the dropped tail remainder
        assert!((jk_err - direct.stderr).abs() < 0.35 * direct.stderr.max(jk_err));
    }

    #[test]
    fn linfit_recovers_line() {
        let x: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 - 2.0 * v).collect();
        let sigma = vec![0.1; 20];
        let fit = weighted_linear_fit(&x, &y, &sigma);
        assert!((fit.slope + 2.0).abs() < 1e-12);
        assert!((fit.intercept - 3.0).abs() < 1e-12);
        assert!(fit.chi2 < 1e-20);
    }

    #[test]
    fn loglog_exponent() {
        let x = [2.0, 4.0, 8.0, 16.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 5.0 * v.powf(-3.0)).collect();
        let fit = fit_loglog(&x, &y);
        assert!((fit.slope + 3.0).abs() < 1e-12);
    }

    #[test]
    fn chi_square_tail() {
        // median of chi^2_1 is ~0.455
        let p = chi_square_p_value(0.455, 1);
        assert!((p - 0.5).abs() < 0.01);
    }
}
