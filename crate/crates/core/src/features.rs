//! Feature families and the shared row / column-naming conventions.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{invalid, Error};

/// Source family of a feature column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Stats,
    Catch22,
    Signature,
    Sentiment,
    Financials,
}

impl Family {
    pub const ALL: [Family; 5] =
        [Family::Stats, Family::Catch22, Family::Signature, Family::Sentiment, Family::Financials];

    pub const fn as_str(self) -> &'static str {
        match self {
            Family::Stats => "stats",
            Family::Catch22 => "catch22",
            Family::Signature => "signature",
            Family::Sentiment => "sentiment",
            Family::Financials => "financials",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| invalid(format!("unknown feature family '{s}'")))
    }
}

/// `<family>.<name>.w<window>`
pub fn column_name(family: Family, name: &str, window: usize) -> String {
    format!("{family}.{name}.w{window}")
}

/// Family prefix of a column name produced by [`column_name`].
pub fn column_family(column: &str) -> Option<Family> {
    column.split('.').next()?.parse().ok()
}

/// Feature values of one asset on one date, in the order of the family's
/// column list. `None` marks a missing feature.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeatureRow {
    pub values: Vec<Option<f64>>,
}

impl FeatureRow {
    pub fn from_values(values: impl IntoIterator<Item = f64>) -> Self {
        Self { values: values.into_iter().map(Some).collect() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}
