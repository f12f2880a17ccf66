//! Long-lived wide tables keyed by `(week, asset)`; missing cells are NaN.

use std::collections::BTreeMap;
use std::sync::Arc;

use chrono::NaiveDate;
use tabfeat_core::dataset::{FeatureTable, QuantizedTable};

use crate::error::{validation, Result};

#[derive(Debug, Clone, Default)]
pub struct WideTable {
    pub columns: Arc<[String]>,
    pub keys: Vec<(NaiveDate, String)>,
    pub values: Vec<f64>,
}

/// Cells compare bitwise, so missing equals missing.
impl PartialEq for WideTable {
    fn eq(&self, other: &Self) -> bool {
        self.columns == other.columns
            && self.keys == other.keys
            && self.values.len() == other.values.len()
            && self.values.iter().zip(&other.values).all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

impl WideTable {
    pub fn new(columns: Arc<[String]>) -> Self {
        Self { columns, keys: Vec::new(), values: Vec::new() }
    }

    pub fn n_rows(&self) -> usize {
        self.keys.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n_cols()..(i + 1) * self.n_cols()]
    }

    pub fn push(&mut self, week: NaiveDate, asset: &str, row: impl IntoIterator<Item = Option<f64>>) {
        let before = self.values.len();
        self.values.extend(row.into_iter().map(|v| v.unwrap_or(f64::NAN)));
        debug_assert_eq!(self.values.len() - before, self.n_cols());
        self.keys.push((week, asset.to_string()));
    }

    pub fn append(&mut self, other: WideTable) {
        debug_assert_eq!(self.columns, other.columns);
        self.keys.extend(other.keys);
        self.values.extend(other.values);
    }

    /// Row indices grouped by week, in row order within each week.
    pub fn week_index(&self) -> BTreeMap<NaiveDate, Vec<usize>> {
        let mut out: BTreeMap<NaiveDate, Vec<usize>> = BTreeMap::new();
        for (i, (w, _)) in self.keys.iter().enumerate() {
            out.entry(*w).or_default().push(i);
        }
        out
    }

    /// Fails on a repeated `(week, asset)` key.
    pub fn check_unique_keys(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for (w, a) in &self.keys {
            if !seen.insert((w, a)) {
                return Err(validation(format!("duplicate row for asset {a} in week {w}")));
            }
        }
        Ok(())
    }

    /// Cross-section of one week built from the given rows.
    pub fn feature_table(&self, week: NaiveDate, rows: &[usize]) -> Result<FeatureTable> {
        let rows = rows
            .iter()
            .map(|&i| (self.keys[i].1.clone(), self.row(i).iter().map(|v| (!v.is_nan()).then_some(*v)).collect()))
            .collect();
        Ok(FeatureTable::new(week, self.columns.clone(), rows)?)
    }

    pub fn quantized_table(&self, week: NaiveDate, rows: &[usize]) -> Result<QuantizedTable> {
        let rows = rows
            .iter()
            .map(|&i| (self.keys[i].1.clone(), self.row(i).iter().map(|v| (!v.is_nan()).then_some(*v as i8)).collect()))
            .collect();
        Ok(QuantizedTable::new(week, self.columns.clone(), rows)?)
    }

    pub fn push_feature_table(&mut self, t: &FeatureTable) {
        for (i, a) in t.assets().iter().enumerate() {
            self.push(t.week(), a, t.row(i).iter().copied());
        }
    }

    pub fn push_quantized_table(&mut self, t: &QuantizedTable) {
        for (i, a) in t.assets().iter().enumerate() {
            self.push(t.week(), a, t.row(i).iter().map(|v| v.map(f64::from)));
        }
    }
}
