//! Ridge regression on quantised features as a deterministic baseline ranker.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::dataset::{DatasetWeek, QuantizedTable};
use crate::error::{invalid, Error, Result};

/// Linear scoring model; missing cells score as the middle bin (0).
#[derive(Debug, Clone, PartialEq)]
pub struct RidgeModel {
    pub columns: Vec<String>,
    pub weights: Vec<f64>,
    pub intercept: f64,
}

/// Fits `y ~ intercept + X w` with penalty `lambda * |w|^2` on the rows of
/// `weeks` that carry a target. The intercept is not penalised.
pub fn fit_ridge<'a>(weeks: impl IntoIterator<Item = &'a DatasetWeek>, lambda: f64) -> Result<RidgeModel> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Config(alloc::format!("ridge penalty must be positive, got {lambda}")));
    }
    let mut columns: Option<Vec<String>> = None;
    let mut p = 0;
    // Cells are small integers, so the Gram matrix and column sums are
    // accumulated exactly.
    let mut xtx: Vec<i64> = Vec::new();
    let mut sum_x: Vec<i64> = Vec::new();
    let mut xty: Vec<f64> = Vec::new();
    let (mut sum_y, mut n) = (0.0, 0usize);
    let mut nz: Vec<(usize, i64)> = Vec::new();
    for week in weeks {
        let table = &week.features;
        match &columns {
            None => {
                p = table.n_cols();
                columns = Some(table.columns().to_vec());
                xtx = vec![0; p * p];
                sum_x = vec![0; p];
                xty = vec![0.0; p];
            }
            Some(c) if c.as_slice() != &table.columns()[..] => {
                return Err(invalid(alloc::format!("week {} has a different column set", table.week())));
            }
            Some(_) => {}
        }
        let index: BTreeMap<&str, usize> =
            table.assets().iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect();
        for (asset, y) in &week.targets {
            let Some(&r) = index.get(asset.as_str()) else {
                return Err(invalid(alloc::format!("target for {asset} has no feature row")));
            };
            nz.clear();
            nz.extend(table.row(r).iter().enumerate().filter_map(|(i, v)| match v {
                Some(v) if *v != 0 => Some((i, *v as i64)),
                _ => None,
            }));
            for (k, &(i, vi)) in nz.iter().enumerate() {
                sum_x[i] += vi;
                xty[i] += vi as f64 * y;
                let row = &mut xtx[i * p..(i + 1) * p];
                for &(j, vj) in &nz[k..] {
                    row[j] += vi * vj;
                }
            }
            sum_y += y;
            n += 1;
        }
    }
    let columns = columns.ok_or_else(|| invalid("no training weeks"))?;
    if n == 0 {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let nf = n as f64;
    let mean_x: Vec<f64> = sum_x.iter().map(|s| *s as f64 / nf).collect();
    let mean_y = sum_y / nf;
    let a = DMatrix::from_fn(p, p, |i, j| {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let centred = xtx[lo * p + hi] as f64 - nf * mean_x[i] * mean_x[j];
        if i == j { centred + lambda } else { centred }
    });
    let b = DVector::from_fn(p, |i, _| xty[i] - nf * mean_x[i] * mean_y);
    let chol = a.cholesky().ok_or_else(|| invalid("normal equations are not positive definite"))?;
    let w = chol.solve(&b);
    let weights: Vec<f64> = w.iter().copied().collect();
    let intercept = mean_y - mean_x.iter().zip(&weights).map(|(m, w)| m * w).sum::<f64>();
    Ok(RidgeModel { columns, weights, intercept })
}

impl RidgeModel {
    /// Scores every row of `table`, in row order. Model columns are matched
    /// by name.
    pub fn predict(&self, table: &QuantizedTable) -> Result<Vec<(String, f64)>> {
        let index: BTreeMap<&str, usize> =
            table.columns().iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
        let map = self
            .columns
            .iter()
            .map(|c| index.get(c.as_str()).copied().ok_or_else(|| invalid(alloc::format!("column {c} missing"))))
            .collect::<Result<Vec<usize>>>()?;
        Ok((0..table.n_rows())
            .map(|r| {
                let row = table.row(r);
                let s = map
                    .iter()
                    .zip(&self.weights)
                    .map(|(&c, w)| row[c].map_or(0.0, |v| v as f64 * w))
                    .sum::<f64>();
                (table.assets()[r].clone(), self.intercept + s)
            })
            .collect())
    }
}
