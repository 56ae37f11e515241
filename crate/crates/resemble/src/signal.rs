//! FFT-based signal utilities: analytic-signal conversion and zero-phase
//! frequency-domain band weighting.
//!
//! All filtering runs on a zero-padded transform (next power of two at least
//! twice the signal length) so the acausal pre-ringing of the zero-phase
//! kernels falls into the padding instead of wrapping onto the signal tail.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Smallest power of two that is at least `2 * len`.
pub fn padded_len(len: usize) -> usize {
    (2 * len.max(1)).next_power_of_two()
}

/// One-sided-spectrum multiplier for an FFT of length `n`.
fn analytic_multiplier(n: usize) -> Vec<f64> {
    let mut h = vec![0.0; n];
    h[0] = 1.0;
    if n % 2 == 0 {
        h[n / 2] = 1.0;
        for v in h.iter_mut().take(n / 2).skip(1) {
            *v = 2.0;
        }
    } else {
        for v in h.iter_mut().take(n / 2 + 1).skip(1) {
            *v = 2.0;
        }
    }
    h
}

/// Raised-cosine low-side crossover weight at frequency `f` (Hz, non-negative):
/// 1 below the transition band around `f0`, 0 above, half-cosine within.
pub fn raised_cosine_low(f: f64, f0: f64, width: f64) -> f64 {
    if width <= 0.0 {
        return if f <= f0 { 1.0 } else { 0.0 };
    }
    let lo = f0 - width / 2.0;
    let hi = f0 + width / 2.0;
    if f <= lo {
        1.0
    } else if f >= hi {
        0.0
    } else {
        0.5 * (1.0 + (std::f64::consts::PI * (f - lo) / width).cos())
    }
}

/// Absolute frequency in Hz of FFT bin `k` for length `n` at rate `fs`.
fn bin_freq_abs(k: usize, n: usize, fs: f64) -> f64 {
    let k = k as f64;
    let n = n as f64;
    let f = if k <= n / 2.0 { k } else { k - n };
    (f * fs / n).abs()
}

/// Apply a frequency-domain weight (a function of |f| in Hz) to each column,
/// returning real output columns of the original length.
pub fn apply_band_weight<F: Fn(f64) -> f64>(
    columns: &[Vec<f64>],
    fs: f64,
    weight: F,
) -> Vec<Vec<f64>> {
    transform_columns(columns, fs, &weight, false)
        .into_iter()
        .map(|col| col.into_iter().map(|z| z.re).collect())
        .collect()
}

/// Apply a frequency-domain weight and the one-sided (analytic) multiplier to
/// each column, returning complex columns of the original length.
pub fn apply_band_weight_analytic<F: Fn(f64) -> f64>(
    columns: &[Vec<f64>],
    fs: f64,
    weight: F,
) -> Vec<Vec<Complex64>> {
    transform_columns(columns, fs, &weight, true)
}

/// Analytic signal of each real column (no band weighting).
pub fn analytic_block(columns: &[Vec<f64>], fs: f64) -> Vec<Vec<Complex64>> {
    apply_band_weight_analytic(columns, fs, |_| 1.0)
}

fn transform_columns<F: Fn(f64) -> f64>(
    columns: &[Vec<f64>],
    fs: f64,
    weight: &F,
    analytic: bool,
) -> Vec<Vec<Complex64>> {
    let t_len = columns.first().map(|c| c.len()).unwrap_or(0);
    if t_len == 0 {
        return columns.iter().map(|_| Vec::new()).collect();
    }
    let n = padded_len(t_len);
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let ifft = planner.plan_fft_inverse(n);
    let h = if analytic { Some(analytic_multiplier(n)) } else { None };
    let scale = 1.0 / n as f64;

    columns
        .iter()
        .map(|col| {
            let mut buf: Vec<Complex64> = col.iter().map(|&x| Complex64::new(x, 0.0)).collect();
            buf.resize(n, Complex64::new(0.0, 0.0));
            fft.process(&mut buf);
            for (k, z) in buf.iter_mut().enumerate() {
                let mut w = weight(bin_freq_abs(k, n, fs));
                if let Some(h) = &h {
                    w *= h[k];
                }
                *z *= w * scale;
            }
            ifft.process(&mut buf);
            buf.truncate(t_len);
            buf
        })
        .collect()
}

/// Squared Frobenius norm of a complex block.
pub fn block_energy(block: &[Vec<Complex64>]) -> f64 {
    block.iter().flatten().map(|z| z.norm_sqr()).sum()
}

/// Frobenius norm of a complex block.
pub fn block_norm(block: &[Vec<Complex64>]) -> f64 {
    block_energy(block).sqrt()
}
