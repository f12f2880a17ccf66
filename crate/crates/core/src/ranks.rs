//! Average ranks with tie groups.

use alloc::vec;
use alloc::vec::Vec;

/// A run of equal values in sorted order, as 1-based positions `first..=last`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TieGroup {
    pub first: usize,
    pub last: usize,
}

impl TieGroup {
    /// Twice the average rank; always an integer.
    pub fn doubled_rank(&self) -> usize {
        self.first + self.last
    }

    pub fn average_rank(&self) -> f64 {
        self.doubled_rank() as f64 / 2.0
    }
}

/// Tie group of every element of `x`. Values must not be NaN.
pub fn tie_groups(x: &[f64]) -> Vec<TieGroup> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut out = vec![TieGroup { first: 0, last: 0 }; x.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && x[order[end]] == x[order[start]] {
            end += 1;
        }
        let group = TieGroup { first: start + 1, last: end };
        for &i in &order[start..end] {
            out[i] = group;
        }
        start = end;
    }
    out
}

/// 1-based ranks; tied values share the mean of the positions they occupy.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    tie_groups(x).iter().map(TieGroup::average_rank).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_with_ties() {
        assert_eq!(average_ranks(&[3.0, 1.0, 2.0]), vec![3.0, 1.0, 2.0]);
        assert_eq!(average_ranks(&[1.0, 1.0, 1.0, 2.0, 3.0]), vec![2.0, 2.0, 2.0, 4.0, 5.0]);
        assert_eq!(average_ranks(&[5.0, -0.0, 0.0]), vec![3.0, 1.5, 1.5]);
        assert!(average_ranks(&[]).is_empty());
    }
}
