//! Numerical building blocks shared by the Catch22 features.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
#[allow(unused_imports)]
use num_traits::Float;

pub(crate) fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Sample standard deviation (divisor `n - 1`).
pub(crate) fn stddev(x: &[f64]) -> f64 {
    let m = mean(x);
    (x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (x.len() as f64 - 1.0)).sqrt()
}

pub(crate) fn min(x: &[f64]) -> f64 {
    x.iter().copied().fold(f64::INFINITY, f64::min)
}

pub(crate) fn max(x: &[f64]) -> f64 {
    x.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

pub(crate) fn median(x: &[f64]) -> f64 {
    let mut s = x.to_vec();
    s.sort_by(f64::total_cmp);
    median_sorted(&s)
}

pub(crate) fn median_sorted(s: &[f64]) -> f64 {
    let n = s.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        s[n / 2]
    } else {
        (s[n / 2] + s[n / 2 - 1]) / 2.0
    }
}

/// Biased autocorrelation for every lag `0..n`, normalised by lag 0.
pub(crate) fn autocorrelations(y: &[f64]) -> Vec<f64> {
    let n = y.len();
    let m = mean(y);
    let c: Vec<f64> = y.iter().map(|v| v - m).collect();
    let c0: f64 = c.iter().map(|v| v * v).sum();
    (0..n)
        .map(|lag| c[..n - lag].iter().zip(&c[lag..]).map(|(a, b)| a * b).sum::<f64>() / c0)
        .collect()
}

/// First lag whose autocorrelation is `<= 0`, capped at `acf.len()`.
pub(crate) fn first_zero(acf: &[f64]) -> usize {
    acf.iter().position(|r| *r <= 0.0).unwrap_or(acf.len())
}

/// Pearson correlation of `y[..n-lag]` with `y[lag..]`.
pub(crate) fn autocorr_lag(y: &[f64], lag: usize) -> f64 {
    let a = &y[..y.len() - lag];
    let b = &y[lag..];
    let (ma, mb) = (mean(a), mean(b));
    let (mut nom, mut da, mut db) = (0.0, 0.0, 0.0);
    for (x, z) in a.iter().zip(b) {
        nom += (x - ma) * (z - mb);
        da += (x - ma) * (x - ma);
        db += (z - mb) * (z - mb);
    }
    nom / (da * db).sqrt()
}

/// Equal-width histogram over `[min, max]`; returns counts and `bins + 1` edges.
pub(crate) fn histcounts(y: &[f64], bins: usize) -> (Vec<usize>, Vec<f64>) {
    let lo = min(y);
    let hi = max(y);
    let step = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for v in y {
        let raw = (v - lo) / step;
        // truncation toward zero, clamped into range
        let idx = if raw.is_nan() || raw < 0.0 { 0 } else { (raw as usize).min(bins - 1) };
        counts[idx] += 1;
    }
    let edges = (0..=bins).map(|i| i as f64 * step + lo).collect();
    (counts, edges)
}

/// Ordinary least-squares line `y = m x + b`; a degenerate design gives (0, 0).
pub(crate) fn linreg(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let (mut sx, mut sx2, mut sxy, mut sy) = (0.0, 0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sx += a;
        sx2 += a * a;
        sxy += a * b;
        sy += b;
    }
    let denom = n * sx2 - sx * sx;
    if denom == 0.0 {
        return (0.0, 0.0);
    }
    ((n * sxy - sx * sy) / denom, (sy * sx2 - sx * sxy) / denom)
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Quantile with linear interpolation between order statistics placed at
/// `(i + 0.5) / n`, clamped to the extremes outside that range.
pub(crate) fn quantile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    let half = 0.5 / n as f64;
    if q < half {
        return sorted[0];
    }
    if q > 1.0 - half {
        return sorted[n - 1];
    }
    let pos = n as f64 * q - 0.5;
    let left = pos.floor() as usize;
    let right = pos.ceil() as usize;
    if left == right {
        return sorted[left];
    }
    sorted[left] + (pos - left as f64) * (sorted[right] - sorted[left]) / (right - left) as f64
}

/// Symbolises `y` into labels `1..=groups` by equiprobable quantile bins.
pub(crate) fn coarse_grain_quantile(y: &[f64], groups: usize) -> Vec<usize> {
    let mut sorted = y.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut th: Vec<f64> = (0..=groups).map(|i| quantile(&sorted, i as f64 / groups as f64)).collect();
    th[0] -= 1.0;
    let mut labels = vec![0usize; y.len()];
    for g in 0..groups {
        for (label, v) in labels.iter_mut().zip(y) {
            if *v > th[g] && *v <= th[g + 1] {
                *label = g + 1;
            }
        }
    }
    labels
}

/// Least-squares cubic spline with breaks at `0`, `floor(n/2) - 1` and
/// `n - 1` (sample index as abscissa) and C2 continuity at the interior
/// break, evaluated at every sample.
pub(crate) fn spline_fit(y: &[f64]) -> Vec<f64> {
    let n = y.len();
    let span = (n - 1) as f64;
    let knot = ((n / 2) as f64 - 1.0) / span;
    let basis = |i: usize| {
        let t = i as f64 / span;
        let tail = (t - knot).max(0.0);
        [1.0, t, t * t, t * t * t, tail * tail * tail]
    };
    let a = DMatrix::from_fn(n, 5, |i, j| basis(i)[j]);
    let b = DVector::from_column_slice(y);
    let qr = a.clone().qr();
    let rhs = qr.q().transpose() * &b;
    let coef = qr
        .r()
        .solve_upper_triangular(&rhs)
        .unwrap_or_else(|| DVector::zeros(5));
    (a * coef).iter().copied().collect()
}

/// One-sided periodogram of the demeaned series zero-padded to the next
/// power of two, rectangular window, unit sampling rate. Returns
/// `(power, frequency)` for the `N/2 + 1` non-negative frequencies.
pub(crate) fn periodogram(y: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = y.len();
    let nfft = n.next_power_of_two();
    let m = mean(y);
    let two_pi = 2.0 * core::f64::consts::PI;
    let cos: Vec<f64> = (0..nfft).map(|j| (two_pi * j as f64 / nfft as f64).cos()).collect();
    let sin: Vec<f64> = (0..nfft).map(|j| (two_pi * j as f64 / nfft as f64).sin()).collect();
    let nout = nfft / 2 + 1;
    let mut power = Vec::with_capacity(nout);
    for k in 0..nout {
        let (mut re, mut im) = (0.0, 0.0);
        for (t, v) in y.iter().enumerate() {
            let j = (k * t) % nfft;
            re += (v - m) * cos[j];
            im -= (v - m) * sin[j];
        }
        let mut p = (re * re + im * im) / n as f64;
        if k > 0 && k < nout - 1 {
            p *= 2.0;
        }
        power.push(p);
    }
    let freq = (0..nout).map(|k| k as f64 / nfft as f64).collect();
    (power, freq)
}
