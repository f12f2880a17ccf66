use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};

/// Element of the truncated tensor algebra over `R^dim` up to `depth`.
///
/// Coefficients are stored level by level starting with the scalar level 0;
/// within level `n` the multi-index `(i_1, .., i_n)` sits at
/// `sum_k i_k * dim^(n-k)` (lexicographic order).
#[derive(Debug, Clone, PartialEq)]
pub struct GradedTensor {
    dim: usize,
    depth: usize,
    coeffs: Vec<f64>,
}

pub(crate) fn level_offset(dim: usize, level: usize) -> usize {
    (0..level).map(|j| dim.pow(j as u32)).sum()
}

impl GradedTensor {
    pub fn zero(dim: usize, depth: usize) -> Self {
        Self { dim, depth, coeffs: vec![0.0; level_offset(dim, depth + 1)] }
    }

    /// The unit `(1, 0, 0, ..)`.
    pub fn identity(dim: usize, depth: usize) -> Self {
        let mut t = Self::zero(dim, depth);
        t.coeffs[0] = 1.0;
        t
    }

    /// Builds a tensor from the scalar level and blocks for levels `1..=depth`.
    pub fn from_levels(dim: usize, scalar: f64, levels: &[Vec<f64>]) -> Result<Self> {
        let depth = levels.len();
        let mut t = Self::zero(dim, depth);
        t.coeffs[0] = scalar;
        for (n, block) in levels.iter().enumerate() {
            let expected = dim.pow(n as u32 + 1);
            if block.len() != expected {
                return Err(Error::ShapeMismatch {
                    expected: alloc::format!("{expected} coefficients at level {}", n + 1),
                    got: alloc::format!("{}", block.len()),
                });
            }
            t.level_mut(n + 1).copy_from_slice(block);
        }
        Ok(t)
    }

    /// Signature of a single linear segment: level `n` is `increment^{⊗n} / n!`.
    pub fn exp_of_increment(increment: &[f64], depth: usize) -> Self {
        let dim = increment.len();
        let mut t = Self::identity(dim, depth);
        for n in 1..=depth {
            let (head, tail) = t.coeffs.split_at_mut(level_offset(dim, n));
            let prev = &head[level_offset(dim, n - 1)..];
            let cur = &mut tail[..dim.pow(n as u32)];
            for (i, p) in prev.iter().enumerate() {
                for (j, x) in increment.iter().enumerate() {
                    cur[i * dim + j] = p * x / n as f64;
                }
            }
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn scalar(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn level(&self, n: usize) -> &[f64] {
        let start = level_offset(self.dim, n);
        &self.coeffs[start..start + self.dim.pow(n as u32)]
    }

    pub fn level_mut(&mut self, n: usize) -> &mut [f64] {
        let start = level_offset(self.dim, n);
        &mut self.coeffs[start..start + self.dim.pow(n as u32)]
    }

    /// Coefficient of a word (letters `0..dim`); the empty word is level 0.
    pub fn get(&self, word: &[usize]) -> f64 {
        let idx = word.iter().fold(0, |acc, l| acc * self.dim + l);
        self.level(word.len())[idx]
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim || self.depth != other.depth {
            return Err(Error::ShapeMismatch {
                expected: alloc::format!("dim {} depth {}", self.dim, self.depth),
                got: alloc::format!("dim {} depth {}", other.dim, other.depth),
            });
        }
        Ok(())
    }

    /// Truncated tensor product; panics on shape mismatch.
    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let d = self.dim;
        let mut out = Self::zero(d, self.depth);
        for n in 0..=self.depth {
            let out_start = level_offset(d, n);
            for p in 0..=n {
                let q = n - p;
                let a = self.level(p);
                let b = other.level(q);
                let width = b.len();
                for (i, ai) in a.iter().enumerate() {
                    if *ai == 0.0 {
                        continue;
                    }
                    let row = &mut out.coeffs[out_start + i * width..out_start + (i + 1) * width];
                    for (o, bj) in row.iter_mut().zip(b) {
                        *o += ai * bj;
                    }
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn add_scaled(&mut self, other: &Self, scale: f64) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += scale * b;
        }
    }

    /// Truncated logarithm; requires a unit scalar level.
    pub fn log(&self) -> Result<Self> {
        if self.coeffs[0] != 1.0 {
            return Err(invalid(alloc::format!(
                "tensor logarithm needs level-0 coefficient 1, got {}",
                self.coeffs[0]
            )));
        }
        let mut x = self.clone();
        x.coeffs[0] = 0.0;
        let mut out = Self::zero(self.dim, self.depth);
        let mut power = x.clone();
        for k in 1..=self.depth {
            if k > 1 {
                power = power.mul_unchecked(&x);
            }
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            out.add_scaled(&power, sign / k as f64);
        }
        Ok(out)
    }

    /// Truncated exponential; requires a zero scalar level.
    pub fn exp(&self) -> Result<Self> {
        if self.coeffs[0] != 0.0 {
            return Err(invalid("tensor exponential needs level-0 coefficient 0"));
        }
        let mut out = Self::identity(self.dim, self.depth);
        let mut power = Self::identity(self.dim, self.depth);
        let mut factorial = 1.0;
        for k in 1..=self.depth {
            power = power.mul_unchecked(self);
            factorial *= k as f64;
            out.add_scaled(&power, 1.0 / factorial);
        }
        Ok(out)
    }
}

/// Chen's identity: the signature of a concatenated path is the truncated
/// tensor product of the pieces' signatures.
pub fn chen_concat(first: &GradedTensor, second: &GradedTensor) -> Result<GradedTensor> {
    first.mul(second)
}

/// Product of `items` by recursive halving; the reduction tree depends only
/// on `items.len()`.
pub(crate) fn balanced_product(items: &[GradedTensor], dim: usize, depth: usize) -> GradedTensor {
    match items.len() {
        0 => GradedTensor::identity(dim, depth),
        1 => items[0].clone(),
        n => {
            let (l, r) = items.split_at(n / 2);
            balanced_product(l, dim, depth).mul_unchecked(&balanced_product(r, dim, depth))
        }
    }
}
