//! Truncated signatures and log-signatures of piecewise-linear paths.
//!
//! Discrete samples are joined linearly, so a path's signature is the Chen
//! product of one tensor exponential per segment. Log-signatures are
//! reported as coordinates in the Lyndon basis (standard bracketing), whose
//! size at each level is the Witt number; for three channels and depth four
//! that is `3 + 3 + 8 + 18 = 32` coordinates.

mod lyndon;
mod tensor;

use alloc::string::String;
use alloc::vec::Vec;

pub use lyndon::{is_lyndon, lyndon_words, witt_dimension, word_label, LyndonBasis};
pub use tensor::{chen_concat, GradedTensor};

use crate::error::{invalid, Error, Result};
use crate::features::{column_name, Family, FeatureRow};
use crate::series::LookbackWindow;
use tensor::balanced_product;

/// Default truncation depth.
pub const DEFAULT_DEPTH: usize = 4;

/// Samples `(t_i, x_i)` joined by straight lines.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearPath {
    dim: usize,
    times: Vec<f64>,
    points: Vec<f64>,
}

impl PiecewiseLinearPath {
    /// `points` is row-major with `dim` values per sample.
    pub fn new(dim: usize, times: Vec<f64>, points: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("path dimension must be >= 1"));
        }
        if points.len() != times.len() * dim {
            return Err(Error::ShapeMismatch {
                expected: alloc::format!("{} values", times.len() * dim),
                got: alloc::format!("{}", points.len()),
            });
        }
        if times.len() < 2 {
            return Err(Error::InsufficientData { needed: 2, got: times.len() });
        }
        if times.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(invalid("path times must be strictly increasing"));
        }
        if points.iter().any(|v| !v.is_finite()) {
            return Err(invalid("path values must be finite"));
        }
        Ok(Self { dim, times, points })
    }

    /// Samples at integer times `0, 1, 2, ..`.
    pub fn from_points(dim: usize, points: Vec<f64>) -> Result<Self> {
        let n = if dim == 0 { 0 } else { points.len() / dim };
        Self::new(dim, (0..n).map(|i| i as f64).collect(), points)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    fn segment_signatures(&self, depth: usize) -> Vec<GradedTensor> {
        segment_signatures(&self.points, self.dim, depth)
    }
}

fn segment_signatures(points: &[f64], dim: usize, depth: usize) -> Vec<GradedTensor> {
    let n = points.len() / dim;
    (1..n)
        .map(|i| {
            let inc: Vec<f64> = (0..dim).map(|c| points[i * dim + c] - points[(i - 1) * dim + c]).collect();
            GradedTensor::exp_of_increment(&inc, depth)
        })
        .collect()
}

/// Truncated signature of a piecewise-linear path.
pub fn signature(path: &PiecewiseLinearPath, depth: usize) -> Result<GradedTensor> {
    if depth == 0 {
        return Err(invalid("signature depth must be >= 1"));
    }
    Ok(balanced_product(&path.segment_signatures(depth), path.dim, depth))
}

/// Log-signature coordinates in the Lyndon basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LogSignature {
    pub dim: usize,
    pub depth: usize,
    /// Concatenated by level, lexicographic word order within a level.
    pub coeffs: Vec<f64>,
}

impl LogSignature {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Basis words matching `coeffs`.
    pub fn basis_words(&self) -> Vec<Vec<u8>> {
        lyndon_words(self.dim, self.depth)
    }
}

impl LyndonBasis {
    pub fn log_signature(&self, sig: &GradedTensor) -> Result<LogSignature> {
        let lie = sig.log()?;
        Ok(LogSignature { dim: sig.dim(), depth: sig.depth(), coeffs: self.coordinates(&lie)? })
    }

    /// Inverse of [`log_signature`](Self::log_signature).
    pub fn exp_log_signature(&self, log_sig: &LogSignature) -> Result<GradedTensor> {
        self.to_tensor(&log_sig.coeffs)?.exp()
    }
}

pub fn log_signature(sig: &GradedTensor) -> Result<LogSignature> {
    LyndonBasis::new(sig.dim(), sig.depth()).log_signature(sig)
}

/// Log-signature of every trailing window `[i-k+1, i]` for `i >= k-1`.
///
/// Segment signatures are computed once; each window is a fresh balanced
/// Chen fold over its `k - 1` cached segments. A window longer than the
/// path yields an empty series.
pub fn rolling_log_signature(
    path: &PiecewiseLinearPath,
    window: LookbackWindow,
    depth: usize,
) -> Result<Vec<LogSignature>> {
    if depth == 0 {
        return Err(invalid("signature depth must be >= 1"));
    }
    let k = window.size();
    if k > path.len() {
        return Ok(Vec::new());
    }
    let segs = path.segment_signatures(depth);
    let basis = LyndonBasis::new(path.dim, depth);
    (k - 1..path.len())
        .map(|i| basis.log_signature(&balanced_product(&segs[i + 1 - k..i], path.dim, depth)))
        .collect()
}

pub fn signature_feature_names(basis: &LyndonBasis, windows: &[usize]) -> Vec<String> {
    windows
        .iter()
        .flat_map(|w| {
            basis.words().iter().map(move |word| {
                column_name(Family::Signature, &alloc::format!("lyndon_{}", word_label(word)), *w)
            })
        })
        .collect()
}

/// Log-signature of the trailing `k` path points for each window `k`.
/// `points` is row-major with `basis.dim()` channels and ends at the as-of
/// date; at least `max(windows)` complete points are required.
pub fn signature_feature_row(points: &[f64], basis: &LyndonBasis, windows: &[usize]) -> Option<FeatureRow> {
    let dim = basis.dim();
    let n = points.len() / dim;
    let longest = *windows.iter().max()?;
    if n < longest || windows.iter().any(|w| *w < 2) {
        return None;
    }
    let segs = segment_signatures(&points[(n - longest) * dim..], dim, basis.depth());
    let mut values = Vec::with_capacity(basis.len() * windows.len());
    for w in windows {
        let sig = balanced_product(&segs[segs.len() + 1 - w..], dim, basis.depth());
        values.extend(basis.log_signature(&sig).ok()?.coeffs);
    }
    Some(FeatureRow::from_values(values))
}
