//! Rank correlation and summary statistics of weekly correlation series.

use alloc::vec::Vec;

use chrono::NaiveDate;

use crate::error::{invalid, Error, Result};
use crate::ranks::average_ranks;
use crate::series::shifted_mean;
#[allow(unused_imports)]
use num_traits::Float;

/// Spearman correlation with a flag for constant inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spearman {
    pub corr: f64,
    /// One side was constant; `corr` is then 0.
    pub degenerate: bool,
}

/// Pearson correlation of the average ranks of `a` and `b`.
pub fn spearman_corr(a: &[f64], b: &[f64]) -> Result<Spearman> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch {
            expected: alloc::format!("{} values", a.len()),
            got: alloc::format!("{}", b.len()),
        });
    }
    if a.len() < 2 {
        return Err(Error::InsufficientData { needed: 2, got: a.len() });
    }
    if a.iter().chain(b).any(|v| v.is_nan()) {
        return Err(invalid("spearman input contains NaN"));
    }
    let (ra, rb) = (average_ranks(a), average_ranks(b));
    // Both rank vectors have mean (n + 1) / 2.
    let centre = (a.len() as f64 + 1.0) / 2.0;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in ra.iter().zip(&rb) {
        let (dx, dy) = (x - centre, y - centre);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        return Ok(Spearman { corr: 0.0, degenerate: true });
    }
    let corr = (sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0);
    Ok(Spearman { corr, degenerate: false })
}

/// Largest fall of the cumulative sum from its running peak, where the
/// peak starts at 0 before the first element.
pub fn max_drawdown(c: &[f64]) -> f64 {
    let (mut sum, mut peak, mut mdd) = (0.0, 0.0, 0.0);
    for v in c {
        sum += v;
        if sum > peak {
            peak = sum;
        }
        if peak - sum > mdd {
            mdd = peak - sum;
        }
    }
    mdd
}

/// Weekly correlations in date order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CorrSeries {
    weeks: Vec<NaiveDate>,
    corrs: Vec<f64>,
}

impl CorrSeries {
    pub fn new(weeks: Vec<NaiveDate>, corrs: Vec<f64>) -> Result<Self> {
        if weeks.len() != corrs.len() {
            return Err(Error::ShapeMismatch {
                expected: alloc::format!("{} values", weeks.len()),
                got: alloc::format!("{}", corrs.len()),
            });
        }
        if weeks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("correlation weeks must be strictly increasing"));
        }
        if corrs.iter().any(|c| !(-1.0..=1.0).contains(c)) {
            return Err(invalid("correlations must lie in [-1, 1]"));
        }
        Ok(Self { weeks, corrs })
    }

    pub fn weeks(&self) -> &[NaiveDate] {
        &self.weeks
    }

    pub fn corrs(&self) -> &[f64] {
        &self.corrs
    }

    pub fn len(&self) -> usize {
        self.corrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.corrs.is_empty()
    }
}

/// Summary of a correlation series. Ratios are `None` when their
/// denominator is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategyReport {
    pub weeks: usize,
    pub mean: f64,
    /// Sample standard deviation (divisor `n - 1`).
    pub volatility: f64,
    pub sharpe: Option<f64>,
    pub max_drawdown: f64,
    pub calmar: Option<f64>,
}

pub fn strategy_report(c: &[f64]) -> Result<StrategyReport> {
    if c.len() < 2 {
        return Err(Error::InsufficientData { needed: 2, got: c.len() });
    }
    let n = c.len() as f64;
    let mean = shifted_mean(c);
    let volatility = (c.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt();
    let max_drawdown = max_drawdown(c);
    Ok(StrategyReport {
        weeks: c.len(),
        mean,
        volatility,
        sharpe: (volatility > 0.0).then(|| mean / volatility),
        max_drawdown,
        calmar: (max_drawdown > 0.0).then(|| mean / max_drawdown),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spearman_examples() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(spearman_corr(&x, &x).unwrap().corr, 1.0);
        assert_eq!(spearman_corr(&x, &[4.0, 3.0, 2.0, 1.0]).unwrap().corr, -1.0);
        assert!((spearman_corr(&x, &[2.0, 1.0, 4.0, 3.0]).unwrap().corr - 0.6).abs() < 1e-15);
        let flat = spearman_corr(&x, &[1.0; 4]).unwrap();
        assert_eq!(flat, Spearman { corr: 0.0, degenerate: true });
        assert!(spearman_corr(&x[..1], &x[..1]).is_err());
        assert!(spearman_corr(&x, &x[..3]).is_err());
    }

    #[test]
    fn drawdown_examples() {
        assert_eq!(max_drawdown(&[0.1, 0.2, 0.05]), 0.0);
        assert!((max_drawdown(&[0.1, -0.05, -0.05, 0.2]) - 0.1).abs() < 1e-15);
        assert_eq!(max_drawdown(&[-0.3]), 0.3);
    }

    #[test]
    fn report_examples() {
        let r = strategy_report(&[0.01, 0.02, 0.03]).unwrap();
        assert!((r.mean - 0.02).abs() < 1e-15);
        assert!((r.volatility - 0.01).abs() < 1e-15);
        assert!((r.sharpe.unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(r.max_drawdown, 0.0);
        assert_eq!(r.calmar, None);
        let flat = strategy_report(&[0.05; 4]).unwrap();
        assert_eq!((flat.sharpe, flat.calmar), (None, None));
        let r = strategy_report(&[0.1, -0.05, -0.05, 0.2]).unwrap();
        assert!((r.calmar.unwrap() - r.mean / 0.1).abs() < 1e-12);
        assert!(strategy_report(&[0.1]).is_err());
    }
}
