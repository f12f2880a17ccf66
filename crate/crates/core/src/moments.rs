//! First four statistical moments of log returns over look-back windows.

use alloc::vec::Vec;


use crate::features::{column_name, Family, FeatureRow};
use crate::series::{log_return_series, shifted_mean, LookbackWindow};
use alloc::string::String;
#[allow(unused_imports)]
use num_traits::Float;

/// Population moments of one window. Kurtosis is excess (Fisher).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentFeatures {
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub kurtosis: f64,
}

impl MomentFeatures {
    pub const NAMES: [&'static str; 4] = ["mean", "variance", "skewness", "kurtosis"];

    pub fn as_array(&self) -> [f64; 4] {
        [self.mean, self.variance, self.skewness, self.kurtosis]
    }
}

/// Moments of the trailing `window` values of `x`; `None` when fewer than
/// `window.size()` values are available.
///
/// Two-pass: the mean first, then centred power sums with divisor `k`.
/// Zero variance gives skewness = kurtosis = 0.
pub fn moments(x: &[f64], window: LookbackWindow) -> Option<MomentFeatures> {
    let k = window.size();
    if x.len() < k {
        return None;
    }
    let w = &x[x.len() - k..];
    let n = k as f64;
    let mean = shifted_mean(w);
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for v in w {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if m2 == 0.0 {
        return Some(MomentFeatures { mean, variance: 0.0, skewness: 0.0, kurtosis: 0.0 });
    }
    Some(MomentFeatures {
        mean,
        variance: m2,
        skewness: m3 / m2.powf(1.5),
        kurtosis: m4 / (m2 * m2) - 3.0,
    })
}

pub fn moment_feature_names(windows: &[usize]) -> Vec<String> {
    windows
        .iter()
        .flat_map(|w| MomentFeatures::NAMES.iter().map(move |n| column_name(Family::Stats, n, *w)))
        .collect()
}

/// Moments of log returns for each window, window-major. `prices` is the
/// trailing average-price history ending at the as-of date; at least
/// `max(windows) + 1` prices are required.
pub fn moment_feature_row(prices: &[f64], windows: &[usize]) -> Option<FeatureRow> {
    let longest = *windows.iter().max()?;
    if prices.len() < longest + 1 {
        return None;
    }
    let returns = log_return_series(&prices[prices.len() - longest - 1..]).ok()?;
    let mut values = Vec::with_capacity(windows.len() * 4);
    for w in windows {
        let m = moments(&returns, LookbackWindow::new(*w).ok()?)?;
        values.extend(m.as_array());
    }
    Some(FeatureRow::from_values(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn win(k: usize) -> LookbackWindow {
        LookbackWindow::new(k).unwrap()
    }

    #[test]
    fn constant_window_is_degenerate() {
        let m = moments(&[3.25; 10], win(10)).unwrap();
        assert_eq!(m.as_array(), [3.25, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn two_point_window() {
        let m = moments(&[-1.0, 1.0], win(2)).unwrap();
        assert_eq!(m.as_array(), [0.0, 1.0, 0.0, -2.0]);
    }

    #[test]
    fn symmetric_window_has_zero_skew() {
        let m = moments(&[1.0, 2.0, 4.0, 6.0, 7.0], win(5)).unwrap();
        assert!(m.skewness.abs() < 1e-15);
    }

    #[test]
    fn uses_trailing_window_only() {
        let m = moments(&[100.0, -1.0, 1.0], win(2)).unwrap();
        assert_eq!(m.mean, 0.0);
        assert!(moments(&[1.0], win(2)).is_none());
    }

    #[test]
    fn row_width_and_constant_prices() {
        let prices = vec![42.0; 253];
        let row = moment_feature_row(&prices, &[21, 63, 252]).unwrap();
        assert_eq!(row.len(), 12);
        assert!(row.values.iter().all(|v| *v == Some(0.0)));
        assert!(moment_feature_row(&prices[..252], &[21, 63, 252]).is_none());
        assert_eq!(moment_feature_names(&[21, 63, 252])[5], "stats.variance.w63");
    }
}
