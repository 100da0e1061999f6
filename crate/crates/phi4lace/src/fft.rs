//! Minimal n-dimensional FFT on flat row-major buffers, built on rustfft.
//!
//! All torus pipelines in this crate funnel through [`fft_nd`]; keeping a
//! single code path makes reductions deterministic run to run.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// In-place n-dimensional DFT of `data` with shape `dims` (row-major).
/// The inverse transform includes the 1/N normalization.
pub fn fft_nd(data: &mut [Complex64], dims: &[usize], inverse: bool) {
    let n_total: usize = dims.iter().product();
    assert_eq!(data.len(), n_total, "buffer length must match dims");
    let mut planner = FftPlanner::new();
    for (axis, &len) in dims.iter().enumerate() {
        let fft = if inverse {
            planner.plan_fft_inverse(len)
        } else {
            planner.plan_fft_forward(len)
        };
        let post: usize = dims[axis + 1..].iter().product();
        let pre: usize = n_total / (len * post);
        let mut lane = vec![Complex64::new(0.0, 0.0); len];
        for a in 0..pre {
            for b in 0..post {
                let base = a * len * post + b;
                for (i, slot) in lane.iter_mut().enumerate() {
                    *slot = data[base + i * post];
                }
                fft.process(&mut lane);
                for (i, slot) in lane.iter().enumerate() {
                    data[base + i * post] = *slot;
                }
            }
        }
    }
    if inverse {
        let norm = 1.0 / n_total as f64;
        for v in data.iter_mut() {
            *v *= norm;
        }
    }
}

/// Forward transform of a real table.
pub fn forward_real(table: &[f64], dims: &[usize]) -> Vec<Complex64> {
    let mut data: Vec<Complex64> = table.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fft_nd(&mut data, dims, false);
    data
}

/// Inverse transform expected to land on a real table; returns the values
/// and the largest imaginary residue seen.
pub fn inverse_to_real(mut spectrum: Vec<Complex64>, dims: &[usize]) -> (Vec<f64>, f64) {
    fft_nd(&mut spectrum, dims, true);
    let mut max_im = 0.0f64;
    let values = spectrum
        .iter()
        .map(|z| {
            max_im = max_im.max(z.im.abs());
            z.re
        })
        .collect();
    (values, max_im)
}

/// Cyclic convolution of two real tables on the torus.
pub fn cyclic_convolve(a: &[f64], b: &[f64], dims: &[usize]) -> Vec<f64> {
    let fa = forward_real(a, dims);
    let fb = forward_real(b, dims);
    let prod: Vec<Complex64> = fa.iter().zip(&fb).map(|(x, y)| x * y).collect();
    inverse_to_real(prod, dims).0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft_2d(table: &[f64], n: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for k0 in 0..n {
            for k1 in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for x0 in 0..n {
                    for x1 in 0..n {
                        let phase = -2.0 * std::f64::consts::PI
                            * ((k0 * x0 + k1 * x1) as f64)
                            / n as f64;
                        acc += table[x0 * n + x1] * Complex64::new(phase.cos(), phase.sin());
                    }
                }
                out[k0 * n + k1] = acc;
            }
        }
        out
    }

    #[test]
    fn matches_naive_dft() {
        let n = 6;
        let table: Vec<f64> = (0..n * n).map(|i| ((i * 37 + 11) % 17) as f64 * 0.3).collect();
        let fast = forward_real(&table, &[n, n]);
        let slow = naive_dft_2d(&table, n);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).norm() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn roundtrip() {
        let dims = [4usize, 6, 8];
        let n: usize = dims.iter().product();
        let table: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).sin()).collect();
        let spec = forward_real(&table, &dims);
        let (back, max_im) = inverse_to_real(spec, &dims);
        assert!(max_im < 1e-12);
        for (a, b) in back.iter().zip(&table) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn convolution_with_delta() {
        let dims = [4usize, 4];
        let n = 16;
        let mut delta = vec![0.0; n];
        delta[0] = 1.0;
        let table: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let conv = cyclic_convolve(&delta, &table, &dims);
        for (a, b) in conv.iter().zip(&table) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
