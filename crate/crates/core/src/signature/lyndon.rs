//! Lyndon words and the associated Hall basis of the free Lie algebra.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::tensor::GradedTensor;
use crate::error::{Error, Result};

/// Dimension of level `n` of the free Lie algebra on `d` letters:
/// `(1/n) * sum_{k | n} mu(k) d^(n/k)`.
pub fn witt_dimension(d: usize, n: usize) -> usize {
    let mut total: i128 = 0;
    for k in 1..=n {
        if n % k == 0 {
            total += mobius(k) as i128 * (d as i128).pow((n / k) as u32);
        }
    }
    (total / n as i128) as usize
}

fn mobius(mut n: usize) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// All Lyndon words over `0..d` of length `1..=max_len`, grouped by length
/// and lexicographically ordered within each length.
pub fn lyndon_words(d: usize, max_len: usize) -> Vec<Vec<u8>> {
    let mut words = Vec::new();
    if d == 0 || max_len == 0 {
        return words;
    }
    // Duval's generator yields every Lyndon word up to max_len in lex order.
    let mut w: Vec<u8> = vec![0];
    loop {
        words.push(w.clone());
        let m = w.len();
        while w.len() < max_len {
            w.push(w[w.len() - m]);
        }
        while let Some(&last) = w.last() {
            if last as usize == d - 1 {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    words
}

pub fn is_lyndon(word: &[u8]) -> bool {
    !word.is_empty() && (1..word.len()).all(|i| word < &word[i..])
}

/// Standard factorisation `w = u v` with `v` the longest proper Lyndon suffix.
fn standard_factorisation(word: &[u8]) -> (&[u8], &[u8]) {
    (1..word.len())
        .find(|&i| is_lyndon(&word[i..]))
        .map(|i| word.split_at(i))
        .expect("words of length >= 2 have a Lyndon suffix")
}

/// Human-readable, 1-based name of a word, e.g. `[0, 1, 1]` -> `"122"`.
pub fn word_label(word: &[u8]) -> String {
    let sep = if word.iter().any(|l| *l >= 9) { "-" } else { "" };
    let parts: Vec<String> = word.iter().map(|l| alloc::format!("{}", l + 1)).collect();
    parts.join(sep)
}

/// Lyndon basis of the truncated free Lie algebra together with the tensor
/// expansion of each standard bracket.
#[derive(Debug, Clone)]
pub struct LyndonBasis {
    dim: usize,
    depth: usize,
    words: Vec<Vec<u8>>,
    /// Dense expansion of the bracket of each word in its own tensor level.
    expansions: Vec<Vec<f64>>,
    /// Tensor index of each word within its level.
    word_index: Vec<usize>,
}

fn tensor_index(word: &[u8], dim: usize) -> usize {
    word.iter().fold(0, |acc, l| acc * dim + *l as usize)
}

impl LyndonBasis {
    pub fn new(dim: usize, depth: usize) -> Self {
        let words = lyndon_words(dim, depth);
        let mut expansions: Vec<Vec<f64>> = Vec::with_capacity(words.len());
        for w in &words {
            let expansion = if w.len() == 1 {
                let mut e = vec![0.0; dim];
                e[w[0] as usize] = 1.0;
                e
            } else {
                let (u, v) = standard_factorisation(w);
                let pu = &expansions[words.iter().position(|x| x == u).expect("factor is Lyndon")];
                let pv = &expansions[words.iter().position(|x| x == v).expect("factor is Lyndon")];
                let mut e = vec![0.0; dim.pow(w.len() as u32)];
                let (nu, nv) = (pu.len(), pv.len());
                for (i, a) in pu.iter().enumerate() {
                    for (j, b) in pv.iter().enumerate() {
                        e[i * nv + j] += a * b;
                    }
                }
                for (j, b) in pv.iter().enumerate() {
                    for (i, a) in pu.iter().enumerate() {
                        e[j * nu + i] -= b * a;
                    }
                }
                e
            };
            expansions.push(expansion);
        }
        let word_index = words.iter().map(|w| tensor_index(w, dim)).collect();
        Self { dim, depth, words, expansions, word_index }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn words(&self) -> &[Vec<u8>] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Number of basis elements at each level `1..=depth`.
    pub fn level_sizes(&self) -> Vec<usize> {
        (1..=self.depth).map(|n| self.words.iter().filter(|w| w.len() == n).count()).collect()
    }

    /// Coordinates of a Lie element (given as a tensor) in this basis.
    ///
    /// The bracket of a Lyndon word `w` is `w` plus lexicographically larger
    /// words of the same length, so coordinates follow by forward
    /// substitution in lexicographic order.
    pub fn coordinates(&self, lie: &GradedTensor) -> Result<Vec<f64>> {
        self.check(lie)?;
        let mut coords = vec![0.0; self.words.len()];
        for (k, w) in self.words.iter().enumerate() {
            let level = lie.level(w.len());
            let target = self.word_index[k];
            let mut c = level[target];
            for u in 0..k {
                if self.words[u].len() == w.len() {
                    c -= coords[u] * self.expansions[u][target];
                }
            }
            coords[k] = c;
        }
        Ok(coords)
    }

    /// Tensor expansion of `sum_w coords[w] * [w]`.
    pub fn to_tensor(&self, coords: &[f64]) -> Result<GradedTensor> {
        if coords.len() != self.words.len() {
            return Err(Error::ShapeMismatch {
                expected: alloc::format!("{} coordinates", self.words.len()),
                got: alloc::format!("{}", coords.len()),
            });
        }
        let mut t = GradedTensor::zero(self.dim, self.depth);
        for ((w, e), c) in self.words.iter().zip(&self.expansions).zip(coords) {
            for (o, v) in t.level_mut(w.len()).iter_mut().zip(e) {
                *o += c * v;
            }
        }
        Ok(t)
    }

    fn check(&self, t: &GradedTensor) -> Result<()> {
        if t.dim() != self.dim || t.depth() != self.depth {
            return Err(Error::ShapeMismatch {
                expected: alloc::format!("dim {} depth {}", self.dim, self.depth),
                got: alloc::format!("dim {} depth {}", t.dim(), t.depth()),
            });
        }
        Ok(())
    }
}
