//! The 22 individual features. Every function expects a z-scored series of
//! length >= 3 with non-zero variance.

use alloc::vec;
use alloc::vec::Vec;


use super::primitives::*;
#[allow(unused_imports)]
use num_traits::Float;

pub(crate) fn histogram_mode(y: &[f64], bins: usize) -> f64 {
    let (counts, edges) = histcounts(y, bins);
    let mut best = 0usize;
    let mut ties = 1usize;
    let mut out = 0.0;
    for i in 0..bins {
        let centre = (edges[i] + edges[i + 1]) * 0.5;
        if counts[i] > best {
            best = counts[i];
            ties = 1;
            out = centre;
        } else if counts[i] == best {
            ties += 1;
            out += centre;
        }
    }
    out / ties as f64
}

/// Interpolated lag at which the autocorrelation first drops below 1/e.
pub(crate) fn acf_timescale(acf: &[f64]) -> f64 {
    let n = acf.len();
    let thresh = 1.0 / 1.0f64.exp();
    for i in 0..n.saturating_sub(2) {
        if acf[i + 1] < thresh {
            let slope = acf[i + 1] - acf[i];
            return i as f64 + (thresh - acf[i]) / slope;
        }
    }
    n as f64
}

pub(crate) fn acf_first_min(acf: &[f64]) -> f64 {
    let n = acf.len();
    (1..n.saturating_sub(1))
        .find(|&i| acf[i] < acf[i - 1] && acf[i] < acf[i + 1])
        .unwrap_or(n) as f64
}

/// Automutual information at lag 2 from a 5x5 equal-width joint histogram.
pub(crate) fn histogram_ami_lag2(y: &[f64]) -> f64 {
    const TAU: usize = 2;
    const BINS: usize = 5;
    let lo = min(y);
    let hi = max(y);
    let step = (hi - lo + 0.2) / BINS as f64;
    let edges: Vec<f64> = (0..=BINS).map(|i| lo + step * i as f64 - 0.1).collect();
    let bin_of = |v: f64| edges.iter().position(|e| v < *e).unwrap_or(0);
    let mut joint = [[0usize; BINS]; BINS];
    let mut total = 0usize;
    for t in 0..y.len() - TAU {
        let (a, b) = (bin_of(y[t]), bin_of(y[t + TAU]));
        if (1..=BINS).contains(&a) && (1..=BINS).contains(&b) {
            joint[a - 1][b - 1] += 1;
            total += 1;
        }
    }
    let mut pi = [0.0; BINS];
    let mut pj = [0.0; BINS];
    let mut p = [[0.0; BINS]; BINS];
    for i in 0..BINS {
        for j in 0..BINS {
            p[i][j] = joint[i][j] as f64 / total as f64;
            pi[i] += p[i][j];
            pj[j] += p[i][j];
        }
    }
    let mut ami = 0.0;
    for i in 0..BINS {
        for j in 0..BINS {
            if p[i][j] > 0.0 {
                ami += p[i][j] * (p[i][j] / (pi[i] * pj[j])).ln();
            }
        }
    }
    ami
}

/// Mean cubed first difference.
pub(crate) fn time_reversal_asymmetry(y: &[f64]) -> f64 {
    let cubes: Vec<f64> = y.windows(2).map(|w| (w[1] - w[0]).powi(3)).collect();
    mean(&cubes)
}

/// Fraction of successive differences larger than 0.04 in magnitude.
pub(crate) fn pnn40(y: &[f64]) -> f64 {
    let hits = y.windows(2).filter(|w| (w[1] - w[0]).abs() * 1000.0 > 40.0).count();
    hits as f64 / (y.len() - 1) as f64
}

/// Longest stretch between "breaks" in a binary sequence of length `n - 1`,
/// where the final position always counts as a break.
fn longest_stretch(bits: &[bool], is_break: bool) -> f64 {
    let last = bits.len() - 1;
    let mut longest = 0usize;
    let mut prev = 0usize;
    for (i, b) in bits.iter().enumerate() {
        if *b == is_break || i == last {
            longest = longest.max(i - prev);
            prev = i;
        }
    }
    longest as f64
}

pub(crate) fn stretch_high(y: &[f64]) -> f64 {
    let m = mean(y);
    let bits: Vec<bool> = y[..y.len() - 1].iter().map(|v| v - m > 0.0).collect();
    longest_stretch(&bits, false)
}

pub(crate) fn stretch_decreasing(y: &[f64]) -> f64 {
    let bits: Vec<bool> = y.windows(2).map(|w| w[1] - w[0] >= 0.0).collect();
    longest_stretch(&bits, true)
}

/// Sum of the column variances of the 3-state transition matrix of the
/// series downsampled at the first zero crossing of its autocorrelation.
pub(crate) fn transition_matrix(y: &[f64], acf: &[f64]) -> f64 {
    const GROUPS: usize = 3;
    let tau = first_zero(acf).max(1);
    let n_down = (y.len() - 1) / tau + 1;
    let down: Vec<f64> = (0..n_down).map(|i| y[i * tau]).collect();
    let labels = coarse_grain_quantile(&down, GROUPS);
    let mut t = [[0.0; GROUPS]; GROUPS];
    for w in labels.windows(2) {
        t[w[0] - 1][w[1] - 1] += 1.0;
    }
    let denom = (n_down - 1) as f64;
    for row in t.iter_mut() {
        for v in row.iter_mut() {
            *v /= denom;
        }
    }
    (0..GROUPS)
        .map(|c| {
            let col = [t[0][c], t[1][c], t[2][c]];
            let m = mean(&col);
            col.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (GROUPS as f64 - 1.0)
        })
        .sum()
}

/// Wang's periodicity: first autocovariance peak of the spline-detrended
/// series that follows a trough, exceeds it by 0.01 and is non-negative.
pub(crate) fn periodicity_wang(y: &[f64]) -> f64 {
    const TH: f64 = 0.01;
    let n = y.len();
    let trend = spline_fit(y);
    let detrended: Vec<f64> = y.iter().zip(&trend).map(|(a, b)| a - b).collect();
    let ac_max = n.div_ceil(3);
    let acf: Vec<f64> = (1..=ac_max)
        .map(|lag| {
            detrended[..n - lag].iter().zip(&detrended[lag..]).map(|(a, b)| a * b).sum::<f64>()
                / (n - lag) as f64
        })
        .collect();
    let mut troughs = Vec::new();
    let mut peaks = Vec::new();
    for i in 1..ac_max.saturating_sub(1) {
        let slope_in = acf[i] - acf[i - 1];
        let slope_out = acf[i + 1] - acf[i];
        if slope_in < 0.0 && slope_out > 0.0 {
            troughs.push(i);
        } else if slope_in > 0.0 && slope_out < 0.0 {
            peaks.push(i);
        }
    }
    for &peak in &peaks {
        let Some(&trough) = troughs.iter().take_while(|t| **t < peak).last() else {
            continue;
        };
        if acf[peak] - acf[trough] < TH || acf[peak] < 0.0 {
            continue;
        }
        return peak as f64;
    }
    0.0
}

/// Mean absolute deviation between the histogram of 2-d embedding step
/// distances and an exponential fit with the same mean.
pub(crate) fn embedding_distance(y: &[f64], acf: &[f64]) -> f64 {
    let n = y.len();
    let mut tau = first_zero(acf);
    if tau as f64 > n as f64 / 10.0 {
        tau = n / 10;
    }
    let d: Vec<f64> = (0..n - tau - 1)
        .map(|i| {
            let a = y[i + 1] - y[i];
            let b = y[i + tau] - y[i + tau + 1];
            (a * a + b * b).sqrt()
        })
        .collect();
    let scale = mean(&d);
    let sd = stddev(&d);
    if sd < 0.001 {
        return 0.0;
    }
    let bins = ((max(&d) - min(&d)) / (3.5 * sd / (d.len() as f64).powf(1.0 / 3.0))).ceil() as usize;
    if bins == 0 {
        return 0.0;
    }
    let (counts, edges) = histcounts(&d, bins);
    let diffs: Vec<f64> = (0..bins)
        .map(|i| {
            let p = counts[i] as f64 / d.len() as f64;
            let fit = (-(edges[i] + edges[i + 1]) * 0.5 / scale).exp() / scale;
            (p - fit.max(0.0)).abs()
        })
        .collect();
    mean(&diffs)
}

/// First minimum of the Gaussian automutual information over lags up to 40.
pub(crate) fn ami_timescale(y: &[f64]) -> f64 {
    let n = y.len();
    let tau = 40.min(n.div_ceil(2));
    let ami: Vec<f64> = (0..tau)
        .map(|i| {
            let ac = autocorr_lag(y, i + 1);
            -0.5 * (1.0 - ac * ac).ln()
        })
        .collect();
    (1..tau.saturating_sub(1))
        .find(|&i| ami[i] < ami[i - 1] && ami[i] < ami[i + 1])
        .unwrap_or(tau) as f64
}

fn local_mean_residuals(y: &[f64], train: usize) -> Vec<f64> {
    (0..y.len() - train)
        .map(|i| y[i + train] - y[i..i + train].iter().sum::<f64>() / train as f64)
        .collect()
}

/// Ratio of autocorrelation zero-crossings of one-step mean-forecast
/// residuals and of the series itself.
pub(crate) fn whiten_timescale(y: &[f64], acf: &[f64]) -> f64 {
    let res = local_mean_residuals(y, 1);
    first_zero(&autocorrelations(&res)) as f64 / first_zero(acf) as f64
}

/// Sample std of residuals of a three-sample local mean forecast.
pub(crate) fn forecast_error(y: &[f64]) -> f64 {
    stddev(&local_mean_residuals(y, 3))
}

/// Median timing of threshold exceedances as the threshold sweeps upward
/// in steps of 0.01 (`sign` selects positive or negative deviations).
pub(crate) fn outlier_timing(y: &[f64], sign: f64) -> f64 {
    const INC: f64 = 0.01;
    let n = y.len();
    let work: Vec<f64> = y.iter().map(|v| sign * v).collect();
    let total = work.iter().filter(|v| **v >= 0.0).count();
    let top = max(&work);
    if top < INC {
        return 0.0;
    }
    let n_thresh = (top / INC) as usize + 1;
    let mut gaps_mean = vec![0.0; n_thresh];
    let mut pct_kept = vec![0.0; n_thresh];
    let mut timing = vec![0.0; n_thresh];
    let mut hits: Vec<f64> = Vec::with_capacity(n);
    for i in 0..n_thresh {
        let thr = i as f64 * INC;
        hits.clear();
        hits.extend((0..n).filter(|&j| work[j] >= thr).map(|j| (j + 1) as f64));
        let k = hits.len();
        gaps_mean[i] = if k > 1 {
            hits.windows(2).map(|w| w[1] - w[0]).sum::<f64>() / (k - 1) as f64
        } else {
            f64::NAN
        };
        pct_kept[i] = (k as f64 - 1.0) * 100.0 / total as f64;
        timing[i] = median_sorted(&hits) / (n as f64 / 2.0) - 1.0;
    }
    let mut last_kept = 0usize;
    let mut first_nan = n_thresh - 1;
    for i in 0..n_thresh {
        if pct_kept[i] > 2.0 {
            last_kept = i;
        }
    }
    if let Some(i) = gaps_mean.iter().position(|g| g.is_nan()) {
        first_nan = i;
    }
    median(&timing[..=last_kept.min(first_nan)])
}

/// Shannon entropy of successive symbol pairs over a 3-letter quantile
/// alphabet.
pub(crate) fn entropy_pairs(y: &[f64]) -> f64 {
    let labels = coarse_grain_quantile(y, 3);
    let mut counts = [[0usize; 3]; 3];
    for w in labels.windows(2) {
        counts[w[0] - 1][w[1] - 1] += 1;
    }
    let denom = (y.len() - 1) as f64;
    -counts
        .iter()
        .flatten()
        .filter(|c| **c > 0)
        .map(|c| {
            let p = *c as f64 / denom;
            p * p.ln()
        })
        .sum::<f64>()
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Fluctuation {
    RescaledRange,
    Dfa,
}

/// Proportion of log-spaced scales before the best two-line break in the
/// fluctuation function of the cumulative sum.
pub(crate) fn fluctuation_scaling(y: &[f64], lag: usize, how: Fluctuation) -> f64 {
    const STEPS: usize = 50;
    const MIN_POINTS: usize = 6;
    let n = y.len();
    let lo = 5.0f64.ln();
    let hi = ((n / 2) as f64).ln();
    let step = (hi - lo) / (STEPS - 1) as f64;
    let mut taus: Vec<usize> = (0..STEPS).map(|i| (lo + i as f64 * step).exp().round() as usize).collect();
    taus.dedup();
    let ntau = taus.len();
    if ntau < 12 {
        return 0.0;
    }
    let size_cs = n / lag;
    let mut cs = vec![0.0; size_cs];
    cs[0] = y[0];
    for i in 0..size_cs - 1 {
        cs[i + 1] = cs[i] + y[(i + 1) * lag];
    }
    let x_reg: Vec<f64> = (1..=taus[ntau - 1]).map(|v| v as f64).collect();
    let mut fluct = vec![0.0; ntau];
    let mut buffer = vec![0.0; taus[ntau - 1]];
    for (i, &tau) in taus.iter().enumerate() {
        let segments = size_cs / tau;
        let mut acc = 0.0;
        for j in 0..segments {
            let seg = &cs[j * tau..(j + 1) * tau];
            let (m, b) = linreg(&x_reg[..tau], seg);
            for k in 0..tau {
                buffer[k] = seg[k] - (m * (k + 1) as f64 + b);
            }
            let buf = &buffer[..tau];
            acc += match how {
                Fluctuation::RescaledRange => (max(buf) - min(buf)).powi(2),
                Fluctuation::Dfa => buf.iter().map(|v| v * v).sum(),
            };
        }
        fluct[i] = match how {
            Fluctuation::RescaledRange => (acc / segments as f64).sqrt(),
            Fluctuation::Dfa => (acc / (segments * tau) as f64).sqrt(),
        };
    }
    let log_t: Vec<f64> = taus.iter().map(|t| (*t as f64).ln()).collect();
    let log_f: Vec<f64> = fluct.iter().map(|f| f.ln()).collect();
    let mut errors = Vec::with_capacity(ntau - 2 * MIN_POINTS + 1);
    for i in MIN_POINTS..=ntau - MIN_POINTS {
        let (m1, b1) = linreg(&log_t[..i], &log_f[..i]);
        let (m2, b2) = linreg(&log_t[i - 1..], &log_f[i - 1..]);
        let r1: Vec<f64> = (0..i).map(|j| log_t[j] * m1 + b1 - log_f[j]).collect();
        let r2: Vec<f64> = (i - 1..ntau).map(|j| log_t[j] * m2 + b2 - log_f[j]).collect();
        errors.push(norm(&r1) + norm(&r2));
    }
    let best = min(&errors);
    let first = errors.iter().position(|e| *e == best).map_or(0.0, |i| (i + MIN_POINTS - 1) as f64);
    (first + 1.0) / ntau as f64
}

/// Spectral summaries from the rectangular-window periodogram:
/// `(area of the lowest fifth of frequencies, centroid frequency)`.
pub(crate) fn welch_summaries(y: &[f64]) -> (f64, f64) {
    let two_pi = 2.0 * core::f64::consts::PI;
    let (power, freq) = periodogram(y);
    let w: Vec<f64> = freq.iter().map(|f| two_pi * f).collect();
    let sw: Vec<f64> = power.iter().map(|p| p / two_pi).collect();
    if sw.iter().any(|v| v.is_infinite()) {
        return (0.0, 0.0);
    }
    let dw = w[1] - w[0];
    let area = sw[..sw.len() / 5].iter().sum::<f64>() * dw;
    let total: f64 = sw.iter().sum();
    let mut cum = 0.0;
    let mut centroid = 0.0;
    for (wi, s) in w.iter().zip(&sw) {
        cum += s;
        if cum > total * 0.5 {
            centroid = *wi;
            break;
        }
    }
    (area, centroid)
}
