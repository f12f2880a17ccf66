//! Time-series containers, calendar alignment and the price preprocessing
//! chain: average price, log price, log returns and moving averages.

use alloc::string::String;
use alloc::vec::Vec;

use chrono::{Datelike, NaiveDate};
use num_traits::Float;

use crate::error::{invalid, Error, Result};

/// Daily trading dates plus one weekly anchor per calendar week.
///
/// The anchor of an ISO week is its last trading day (Friday, or the
/// preceding trading day when Friday is a holiday).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TradingCalendar {
    days: Vec<NaiveDate>,
    anchors: Vec<usize>,
}

impl TradingCalendar {
    pub fn new(days: Vec<NaiveDate>) -> Result<Self> {
        if let Some(w) = days.windows(2).find(|w| w[0] >= w[1]) {
            return Err(invalid(alloc::format!(
                "calendar dates must be strictly increasing ({} then {})",
                w[0],
                w[1]
            )));
        }
        let mut anchors = Vec::new();
        for (i, day) in days.iter().enumerate() {
            let last_of_week = match days.get(i + 1) {
                Some(next) => next.iso_week() != day.iso_week(),
                None => true,
            };
            if last_of_week {
                anchors.push(i);
            }
        }
        Ok(Self { days, anchors })
    }

    /// Builds a calendar from unsorted dates that may contain duplicates.
    pub fn from_unsorted(mut days: Vec<NaiveDate>) -> Self {
        days.sort_unstable();
        days.dedup();
        Self::new(days).expect("sorted, deduplicated dates")
    }

    pub fn days(&self) -> &[NaiveDate] {
        &self.days
    }

    pub fn len(&self) -> usize {
        self.days.len()
    }

    pub fn is_empty(&self) -> bool {
        self.days.is_empty()
    }

    /// Indices (into [`days`](Self::days)) of the weekly anchors.
    pub fn anchor_indices(&self) -> &[usize] {
        &self.anchors
    }

    pub fn anchors(&self) -> impl Iterator<Item = NaiveDate> + '_ {
        self.anchors.iter().map(move |&i| self.days[i])
    }

    pub fn index_of(&self, date: NaiveDate) -> Option<usize> {
        self.days.binary_search(&date).ok()
    }

    pub fn is_anchor(&self, date: NaiveDate) -> bool {
        self.index_of(date)
            .is_some_and(|i| self.anchors.binary_search(&i).is_ok())
    }
}

/// Trailing look-back window of `k` observations, `k >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LookbackWindow(usize);

impl LookbackWindow {
    pub fn new(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(invalid(alloc::format!("look-back window must be >= 2, got {k}")));
        }
        Ok(Self(k))
    }

    pub const fn size(self) -> usize {
        self.0
    }
}

/// The look-back windows used throughout: 21, 63 and 252 trading days.
pub const DEFAULT_WINDOWS: [usize; 3] = [21, 63, 252];

/// One day of dividend- and split-adjusted prices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OhlcBar {
    pub date: NaiveDate,
    pub open: f64,
    pub high: f64,
    pub low: f64,
    pub close: f64,
}

impl OhlcBar {
    pub fn validate(&self) -> Result<()> {
        let prices = [self.open, self.high, self.low, self.close];
        if prices.iter().any(|p| !p.is_finite() || *p <= 0.0) {
            return Err(invalid(alloc::format!("{}: prices must be finite and positive", self.date)));
        }
        if self.low > self.open.min(self.close) || self.high < self.open.max(self.close) {
            return Err(invalid(alloc::format!("{}: low/high do not bracket open/close", self.date)));
        }
        Ok(())
    }
}

/// Simple average of open, high, low and close.
pub fn average_price(bar: &OhlcBar) -> Result<f64> {
    bar.validate()?;
    Ok((bar.open + bar.high + bar.low + bar.close) / 4.0)
}

/// Log returns `ln(p_t / p_{t-1})`; output has one element fewer than input.
pub fn log_return_series(prices: &[f64]) -> Result<Vec<f64>> {
    if prices.len() < 2 {
        return Err(Error::InsufficientData { needed: 2, got: prices.len() });
    }
    if let Some(p) = prices.iter().find(|p| !p.is_finite() || **p <= 0.0) {
        return Err(invalid(alloc::format!("log returns need positive prices, got {p}")));
    }
    Ok(prices.windows(2).map(|w| (w[1] / w[0]).ln()).collect())
}

/// Mean of a slice computed as an offset from its first element, which is
/// exact for constant input.
pub(crate) fn shifted_mean(x: &[f64]) -> f64 {
    let base = x[0];
    base + x.iter().map(|v| v - base).sum::<f64>() / x.len() as f64
}

/// Result of a trailing moving average.
#[derive(Debug, Clone, PartialEq)]
pub struct MovingAverage {
    /// One entry per input element; `None` before the first full window.
    pub values: Vec<Option<f64>>,
    /// Set when the window is longer than the series (and `values` is empty).
    pub window_exceeds_series: bool,
}

/// Trailing simple moving average. Each window is summed independently so
/// the value at `i` depends only on `x[i-k+1..=i]`.
pub fn moving_average(x: &[f64], window: LookbackWindow) -> MovingAverage {
    let k = window.size();
    if k > x.len() {
        return MovingAverage { values: Vec::new(), window_exceeds_series: true };
    }
    let mut values = Vec::with_capacity(x.len());
    values.extend(core::iter::repeat_n(None, k - 1));
    values.extend(x.windows(k).map(|w| Some(shifted_mean(w))));
    MovingAverage { values, window_exceeds_series: false }
}

/// Regularly sampled `T x N` series for one asset with a per-cell mask.
#[derive(Debug, Clone, PartialEq)]
pub struct MultivariateSeries {
    asset: String,
    channels: Vec<String>,
    dates: Vec<NaiveDate>,
    values: Vec<f64>,
    present: Vec<bool>,
}

impl MultivariateSeries {
    /// `rows[t][c]` is `None` for a missing cell.
    pub fn new(
        asset: impl Into<String>,
        channels: Vec<String>,
        dates: Vec<NaiveDate>,
        rows: Vec<Vec<Option<f64>>>,
    ) -> Result<Self> {
        let n = channels.len();
        if n == 0 {
            return Err(invalid("series needs at least one channel"));
        }
        if dates.len() != rows.len() {
            return Err(Error::ShapeMismatch {
                expected: alloc::format!("{} rows", dates.len()),
                got: alloc::format!("{} rows", rows.len()),
            });
        }
        if dates.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("series dates must be strictly increasing"));
        }
        let mut values = Vec::with_capacity(rows.len() * n);
        let mut present = Vec::with_capacity(rows.len() * n);
        for (t, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::ShapeMismatch {
                    expected: alloc::format!("{n} channels"),
                    got: alloc::format!("{} channels at row {t}", row.len()),
                });
            }
            for cell in row {
                match cell {
                    Some(v) if v.is_finite() => {
                        values.push(*v);
                        present.push(true);
                    }
                    Some(v) => return Err(invalid(alloc::format!("non-finite value {v} at row {t}"))),
                    None => {
                        values.push(f64::NAN);
                        present.push(false);
                    }
                }
            }
        }
        Ok(Self { asset: asset.into(), channels, dates, values, present })
    }

    pub fn asset(&self) -> &str {
        &self.asset
    }

    pub fn channels(&self) -> &[String] {
        &self.channels
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    pub fn n_channels(&self) -> usize {
        self.channels.len()
    }

    pub fn get(&self, t: usize, c: usize) -> Option<f64> {
        let i = t * self.channels.len() + c;
        self.present[i].then(|| self.values[i])
    }

    /// Full row when every channel is present.
    pub fn row(&self, t: usize) -> Option<&[f64]> {
        let n = self.channels.len();
        let cells = t * n..(t + 1) * n;
        self.present[cells.clone()].iter().all(|p| *p).then(|| &self.values[cells])
    }

    pub fn is_row_complete(&self, t: usize) -> bool {
        self.row(t).is_some()
    }
}

/// Names of the channels produced by [`build_price_path`].
pub fn price_path_channels(ma_lags: [usize; 2]) -> Vec<String> {
    alloc::vec![
        String::from("log_price"),
        alloc::format!("log_price_ma{}", ma_lags[0]),
        alloc::format!("log_price_ma{}", ma_lags[1]),
    ]
}

/// Three-channel lagged price path: log average price and its moving
/// averages at the two `ma_lags`.
pub fn build_price_path(
    asset: impl Into<String>,
    bars: &[OhlcBar],
    ma_lags: [usize; 2],
) -> Result<MultivariateSeries> {
    let longest = ma_lags[0].max(ma_lags[1]);
    if bars.len() < longest {
        return Err(Error::InsufficientData { needed: longest, got: bars.len() });
    }
    if bars.windows(2).any(|w| w[0].date >= w[1].date) {
        return Err(invalid("bars must be sorted by date without duplicates"));
    }
    let log_prices = bars
        .iter()
        .map(|b| average_price(b).map(Float::ln))
        .collect::<Result<Vec<_>>>()?;
    let short = moving_average(&log_prices, LookbackWindow::new(ma_lags[0])?);
    let long = moving_average(&log_prices, LookbackWindow::new(ma_lags[1])?);
    let rows = log_prices
        .iter()
        .zip(short.values)
        .zip(long.values)
        .map(|((lp, s), l)| alloc::vec![Some(*lp), s, l])
        .collect();
    MultivariateSeries::new(
        asset,
        price_path_channels(ma_lags),
        bars.iter().map(|b| b.date).collect(),
        rows,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn bar(date: NaiveDate, o: f64, h: f64, l: f64, c: f64) -> OhlcBar {
        OhlcBar { date, open: o, high: h, low: l, close: c }
    }

    fn day(n: i64) -> NaiveDate {
        NaiveDate::from_ymd_opt(2010, 1, 4).unwrap() + chrono::Duration::days(n)
    }

    #[test]
    fn average_price_examples() {
        let d = day(0);
        assert_eq!(average_price(&bar(d, 10.0, 10.0, 10.0, 10.0)).unwrap(), 10.0);
        assert_eq!(average_price(&bar(d, 8.0, 12.0, 6.0, 10.0)).unwrap(), 9.0);
        assert_eq!(average_price(&bar(d, 100.0, 101.0, 99.0, 100.0)).unwrap(), 100.0);
        assert!(average_price(&bar(d, 0.0, 1.0, 0.0, 1.0)).is_err());
        assert!(average_price(&bar(d, 10.0, 9.0, 8.0, 10.0)).is_err());
    }

    #[test]
    fn log_return_examples() {
        let e = core::f64::consts::E;
        let r = log_return_series(&[1.0, e, e * e]).unwrap();
        assert!((r[0] - 1.0).abs() < 1e-15 && (r[1] - 1.0).abs() < 1e-15);
        assert_eq!(log_return_series(&[5.0, 5.0, 5.0]).unwrap(), vec![0.0, 0.0]);
        let r = log_return_series(&[100.0, 110.0]).unwrap();
        assert!((r[0] - 0.09531017980432493).abs() < 1e-15);
        assert!(log_return_series(&[1.0, 0.0]).is_err());
        assert!(log_return_series(&[1.0]).is_err());
    }

    #[test]
    fn moving_average_examples() {
        let ma = moving_average(&[1.0, 2.0, 3.0, 4.0], LookbackWindow::new(2).unwrap());
        assert_eq!(ma.values, vec![None, Some(1.5), Some(2.5), Some(3.5)]);
        let ma = moving_average(&[1.0, 1.0, 4.0], LookbackWindow::new(3).unwrap());
        assert_eq!(ma.values, vec![None, None, Some(2.0)]);
        let c = 0.1f64.ln();
        let ma = moving_average(&[c; 30], LookbackWindow::new(21).unwrap());
        assert!(ma.values[20..].iter().all(|v| *v == Some(c)));
        let ma = moving_average(&[1.0, 2.0], LookbackWindow::new(3).unwrap());
        assert!(ma.values.is_empty() && ma.window_exceeds_series);
    }

    #[test]
    fn lookback_window_minimum() {
        assert!(LookbackWindow::new(1).is_err());
        assert_eq!(LookbackWindow::new(2).unwrap().size(), 2);
    }

    #[test]
    fn calendar_anchors_are_last_trading_day_of_week() {
        // 2015-12-21 (Mon) .. 2015-12-31 (Thu), Christmas Friday missing.
        let days: Vec<_> = [21, 22, 23, 24, 28, 29, 30, 31]
            .iter()
            .map(|d| NaiveDate::from_ymd_opt(2015, 12, *d).unwrap())
            .collect();
        let cal = TradingCalendar::new(days).unwrap();
        let anchors: Vec<_> = cal.anchors().collect();
        assert_eq!(
            anchors,
            vec![
                NaiveDate::from_ymd_opt(2015, 12, 24).unwrap(),
                NaiveDate::from_ymd_opt(2015, 12, 31).unwrap()
            ]
        );
        assert!(cal.is_anchor(NaiveDate::from_ymd_opt(2015, 12, 24).unwrap()));
        assert!(!cal.is_anchor(NaiveDate::from_ymd_opt(2015, 12, 23).unwrap()));
        assert!(TradingCalendar::new(vec![day(1), day(1)]).is_err());
        assert!(TradingCalendar::new(vec![day(2), day(1)]).is_err());
    }

    #[test]
    fn price_path_constant_and_warmup() {
        let bars: Vec<_> = (0..21).map(|i| bar(day(i), 7.0, 7.0, 7.0, 7.0)).collect();
        let path = build_price_path("A", &bars, [5, 21]).unwrap();
        assert_eq!(path.n_channels(), 3);
        let complete: Vec<_> = (0..path.len()).filter(|t| path.is_row_complete(*t)).collect();
        assert_eq!(complete, vec![20]);
        let c = 7.0f64.ln();
        assert_eq!(path.row(20).unwrap(), &[c, c, c]);
        assert_eq!(path.get(10, 1), Some(c));
        assert_eq!(path.get(10, 2), None);
    }

    #[test]
    fn price_path_geometric_ramp_lags() {
        // p_t = exp(0.01 t): log price is linear, MA(k) lags by (k-1)/2 steps.
        let bars: Vec<_> = (0..40)
            .map(|i| {
                let p = (0.01 * i as f64).exp();
                bar(day(i), p, p, p, p)
            })
            .collect();
        let path = build_price_path("A", &bars, [5, 21]).unwrap();
        for t in 20..40 {
            let row = path.row(t).unwrap();
            assert!((row[0] - 0.01 * t as f64).abs() < 1e-12);
            assert!((row[1] - 0.01 * (t as f64 - 2.0)).abs() < 1e-12);
            assert!((row[2] - 0.01 * (t as f64 - 10.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn price_path_rejects_unsorted() {
        let mut bars: Vec<_> = (0..25).map(|i| bar(day(i), 7.0, 7.0, 7.0, 7.0)).collect();
        bars.swap(3, 4);
        assert!(build_price_path("A", &bars, [5, 21]).is_err());
        bars.swap(3, 4);
        bars[4].date = bars[3].date;
        assert!(build_price_path("A", &bars, [5, 21]).is_err());
    }
}
