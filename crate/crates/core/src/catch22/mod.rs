//! The canonical 22-feature time-series summary (Catch22).
//!
//! Input windows are z-scored before any feature is computed, which makes
//! every feature invariant to location and positive scale. Zero-variance
//! windows short-circuit to [`DEGENERATE_VALUE`] for all 22 entries, and any
//! individual feature that evaluates to a non-finite number is replaced by
//! the same value with its bit set in [`Catch22Vector::degenerate`].

mod features;
mod primitives;

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::features::{column_name, Family, FeatureRow};
use features::Fluctuation;
use primitives::{autocorrelations, mean, stddev};

/// Shortest series accepted by [`catch22`].
pub const MIN_LENGTH: usize = 22;

/// Fallback used for every feature of a constant series and for any single
/// feature that is not finite.
pub const DEGENERATE_VALUE: f64 = 0.0;

/// Canonical feature names, in output order.
pub const FEATURE_NAMES: [&str; 22] = [
    "DN_HistogramMode_5",
    "DN_HistogramMode_10",
    "CO_f1ecac",
    "CO_FirstMin_ac",
    "CO_HistogramAMI_even_2_5",
    "CO_trev_1_num",
    "MD_hrv_classic_pnn40",
    "SB_BinaryStats_mean_longstretch1",
    "SB_TransitionMatrix_3ac_sumdiagcov",
    "PD_PeriodicityWang_th0_01",
    "CO_Embed2_Dist_tau_d_expfit_meandiff",
    "IN_AutoMutualInfoStats_40_gaussian_fmmi",
    "FC_LocalSimple_mean1_tauresrat",
    "DN_OutlierInclude_p_001_mdrmd",
    "DN_OutlierInclude_n_001_mdrmd",
    "SP_Summaries_welch_rect_area_5_1",
    "SB_BinaryStats_diff_longstretch0",
    "SB_MotifThree_quantile_hh",
    "SC_FluctAnal_2_rsrangefit_50_1_logi_prop_r1",
    "SC_FluctAnal_2_dfa_50_1_2_logi_prop_r1",
    "SP_Summaries_welch_rect_centroid",
    "FC_LocalSimple_mean3_stderr",
];

/// Features whose value is always an integer (lags, stretch lengths).
pub const INTEGER_FEATURES: [usize; 5] = [3, 7, 9, 11, 16];

/// The 22 features of one series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Catch22Vector {
    pub values: [f64; 22],
    /// Bit `i` set when feature `i` took its fallback value.
    pub degenerate: u32,
}

impl Catch22Vector {
    pub const fn degenerate() -> Self {
        Self { values: [DEGENERATE_VALUE; 22], degenerate: (1 << 22) - 1 }
    }

    pub fn is_degenerate(&self, feature: usize) -> bool {
        self.degenerate & (1 << feature) != 0
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        FEATURE_NAMES.iter().position(|n| *n == name).map(|i| self.values[i])
    }
}

/// z-score with the sample standard deviation; `None` for zero variance.
pub fn zscore(x: &[f64]) -> Option<Vec<f64>> {
    if x.iter().all(|v| *v == x[0]) {
        return None;
    }
    let m = mean(x);
    let sd = stddev(x);
    if sd == 0.0 || !sd.is_finite() {
        return None;
    }
    Some(x.iter().map(|v| (v - m) / sd).collect())
}

/// All 22 features of `x`.
///
/// Fails with [`Error::InsufficientData`] below [`MIN_LENGTH`] points and
/// with [`Error::InvalidInput`] on non-finite input.
pub fn catch22(x: &[f64]) -> Result<Catch22Vector> {
    if x.len() < MIN_LENGTH {
        return Err(Error::InsufficientData { needed: MIN_LENGTH, got: x.len() });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(invalid("catch22 input must be finite"));
    }
    let Some(y) = zscore(x) else {
        return Ok(Catch22Vector::degenerate());
    };
    let acf = autocorrelations(&y);
    let (low_freq_area, centroid) = features::welch_summaries(&y);
    let raw = [
        features::histogram_mode(&y, 5),
        features::histogram_mode(&y, 10),
        features::acf_timescale(&acf),
        features::acf_first_min(&acf),
        features::histogram_ami_lag2(&y),
        features::time_reversal_asymmetry(&y),
        features::pnn40(&y),
        features::stretch_high(&y),
        features::transition_matrix(&y, &acf),
        features::periodicity_wang(&y),
        features::embedding_distance(&y, &acf),
        features::ami_timescale(&y),
        features::whiten_timescale(&y, &acf),
        features::outlier_timing(&y, 1.0),
        features::outlier_timing(&y, -1.0),
        low_freq_area,
        features::stretch_decreasing(&y),
        features::entropy_pairs(&y),
        features::fluctuation_scaling(&y, 1, Fluctuation::RescaledRange),
        features::fluctuation_scaling(&y, 2, Fluctuation::Dfa),
        centroid,
        features::forecast_error(&y),
    ];
    let mut out = Catch22Vector { values: raw, degenerate: 0 };
    for (i, v) in out.values.iter_mut().enumerate() {
        if !v.is_finite() {
            *v = DEGENERATE_VALUE;
            out.degenerate |= 1 << i;
        }
    }
    Ok(out)
}

pub fn catch22_feature_names(windows: &[usize]) -> Vec<String> {
    windows
        .iter()
        .flat_map(|w| FEATURE_NAMES.iter().map(move |n| column_name(Family::Catch22, n, *w)))
        .collect()
}

/// Catch22 of the log average price for each look-back window.
///
/// A window of `k` days spans the `k + 1` most recent log prices, the same
/// price span that `k` log returns cover. `log_prices` must hold at least
/// `max(windows) + 1` values ending at the as-of date.
pub fn catch22_feature_row(log_prices: &[f64], windows: &[usize]) -> Option<FeatureRow> {
    let longest = *windows.iter().max()?;
    if log_prices.len() < longest + 1 {
        return None;
    }
    let mut values = Vec::with_capacity(22 * windows.len());
    for w in windows {
        let span = &log_prices[log_prices.len() - w - 1..];
        let v = match catch22(span) {
            Ok(v) => v,
            Err(Error::InsufficientData { .. }) => Catch22Vector::degenerate(),
            Err(_) => return None,
        };
        values.extend(v.values);
    }
    Some(FeatureRow::from_values(values))
}
