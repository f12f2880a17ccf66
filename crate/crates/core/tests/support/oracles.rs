//! Independent reference implementations used by the integration and
//! acceptance tests. Everything here is written for clarity, not speed.

#![allow(dead_code)]

/// splitmix64, shared with `data/gen_catch22_reference.py`.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Irwin-Hall approximation to a standard normal.
    pub fn normal(&mut self) -> f64 {
        let mut s = 0.0;
        for _ in 0..12 {
            s += self.uniform();
        }
        s - 6.0
    }
}

/// Input series `index` of the Catch22 reference fixture.
pub fn reference_series(index: u64, length: usize) -> Vec<f64> {
    let mut rng = SplitMix(0x5EED_0000 + index);
    let noise: Vec<f64> = (0..length).map(|_| rng.normal()).collect();
    let kind = index % 4;
    if kind == 0 {
        return noise;
    }
    let mut acc = 0.0;
    let mut out: Vec<f64> = noise
        .iter()
        .map(|e| {
            acc = if kind == 2 { 0.8 * acc + e } else { acc + e };
            acc
        })
        .collect();
    if kind == 3 {
        for v in &mut out {
            *v = (*v * 2.0 + 0.5).floor() / 2.0;
        }
    }
    out
}

/// Rows of the Catch22 reference fixture: 22 values per series.
pub fn catch22_reference() -> Vec<Vec<f64>> {
    let text = include_str!("../data/catch22_reference.csv");
    text.lines()
        .skip(1)
        .map(|l| l.split(',').skip(1).map(|v| v.parse::<f64>().expect("fixture value")).collect())
        .collect()
}

/// Level-by-level signature of a piecewise-linear path (row-major points)
/// from iterated trapezoid sums over `subdivisions` equal steps in total.
/// `out[n]` holds level `n` in lexicographic word order.
pub fn riemann_signature(points: &[f64], dim: usize, depth: usize, subdivisions: usize) -> Vec<Vec<f64>> {
    let n_seg = points.len() / dim - 1;
    let per_seg = subdivisions / n_seg;
    let mut levels: Vec<Vec<f64>> = (0..=depth).map(|n| vec![0.0; dim.pow(n as u32)]).collect();
    levels[0][0] = 1.0;
    let mut dx = vec![0.0; dim];
    for s in 0..n_seg {
        for c in 0..dim {
            dx[c] = (points[(s + 1) * dim + c] - points[s * dim + c]) / per_seg as f64;
        }
        for _ in 0..per_seg {
            let old = levels.clone();
            for n in 1..=depth {
                let lower_new = levels[n - 1].clone();
                let level = &mut levels[n];
                for (i, (a, b)) in old[n - 1].iter().zip(&lower_new).enumerate() {
                    let mid = 0.5 * (a + b);
                    for (j, x) in dx.iter().enumerate() {
                        level[i * dim + j] += mid * x;
                    }
                }
            }
        }
    }
    levels
}

/// Signature by a left-to-right fold of segment exponentials, computed
/// directly on nested level vectors.
pub fn sequential_signature(points: &[f64], dim: usize, depth: usize) -> Vec<Vec<f64>> {
    let mut acc: Vec<Vec<f64>> = (0..=depth).map(|n| vec![0.0; dim.pow(n as u32)]).collect();
    acc[0][0] = 1.0;
    for s in 0..points.len() / dim - 1 {
        let inc: Vec<f64> = (0..dim).map(|c| points[(s + 1) * dim + c] - points[s * dim + c]).collect();
        let mut seg: Vec<Vec<f64>> = vec![vec![1.0]];
        for n in 1..=depth {
            let prev = &seg[n - 1];
            let mut next = vec![0.0; dim.pow(n as u32)];
            for (i, p) in prev.iter().enumerate() {
                for (j, x) in inc.iter().enumerate() {
                    next[i * dim + j] = p * x / n as f64;
                }
            }
            seg.push(next);
        }
        let mut out: Vec<Vec<f64>> = (0..=depth).map(|n| vec![0.0; dim.pow(n as u32)]).collect();
        for n in 0..=depth {
            for p in 0..=n {
                let (a, b) = (&acc[p], &seg[n - p]);
                for (i, ai) in a.iter().enumerate() {
                    for (j, bj) in b.iter().enumerate() {
                        out[n][i * b.len() + j] += ai * bj;
                    }
                }
            }
        }
        acc = out;
    }
    acc
}

/// Lyndon words counted by checking every word against the definition
/// (strictly smaller than all its proper rotations).
pub fn brute_force_lyndon_count(d: usize, n: usize) -> usize {
    let mut count = 0;
    let mut word = vec![0usize; n];
    loop {
        let is_lyndon = (1..n).all(|r| {
            let rotated: Vec<usize> = word[r..].iter().chain(&word[..r]).copied().collect();
            word < rotated
        });
        if is_lyndon {
            count += 1;
        }
        let mut k = n;
        loop {
            if k == 0 {
                return count;
            }
            k -= 1;
            word[k] += 1;
            if word[k] < d {
                break;
            }
            word[k] = 0;
        }
    }
}

/// Rank by definition: 1 + #smaller + (#equal - 1) / 2.
pub fn brute_force_ranks(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|a| {
            let smaller = x.iter().filter(|b| *b < a).count() as f64;
            let equal = x.iter().filter(|b| *b == a).count() as f64;
            1.0 + smaller + (equal - 1.0) / 2.0
        })
        .collect()
}

/// Spearman correlation from pairwise products of centred ranks.
pub fn brute_force_spearman(a: &[f64], b: &[f64]) -> f64 {
    let (ra, rb) = (brute_force_ranks(a), brute_force_ranks(b));
    let n = a.len() as f64;
    let (ma, mb) = (ra.iter().sum::<f64>() / n, rb.iter().sum::<f64>() / n);
    let mut num = 0.0;
    let mut da = 0.0;
    let mut db = 0.0;
    for i in 0..a.len() {
        num += (ra[i] - ma) * (rb[i] - mb);
        da += (ra[i] - ma) * (ra[i] - ma);
        db += (rb[i] - mb) * (rb[i] - mb);
    }
    if da == 0.0 || db == 0.0 {
        0.0
    } else {
        num / (da * db).sqrt()
    }
}

/// Maximum over all peak/trough pairs `i <= j` of `P_i - P_j`, where `P`
/// are the prefix sums with `P_0 = 0`.
pub fn brute_force_max_drawdown(c: &[f64]) -> f64 {
    let mut prefix = vec![0.0];
    let mut s = 0.0;
    for v in c {
        s += v;
        prefix.push(s);
    }
    let mut best: f64 = 0.0;
    for i in 0..prefix.len() {
        for j in i..prefix.len() {
            best = best.max(prefix[i] - prefix[j]);
        }
    }
    best
}

/// Quantile bins by sorting with stable tie grouping: values are sorted,
/// equal values are grouped, and each group takes the bin of its first
/// sorted position `p` (1-based), `#{j in 1..q : p * q > j * n}`.
pub fn brute_force_bins(x: &[f64], q: usize) -> Vec<usize> {
    let n = x.len();
    if x.iter().all(|v| *v == x[0]) {
        return vec![q / 2; n];
    }
    let mut sorted: Vec<f64> = x.to_vec();
    sorted.sort_by(f64::total_cmp);
    x.iter()
        .map(|v| {
            let p = sorted.iter().position(|s| s == v).unwrap() + 1;
            (1..q).filter(|j| p * q > j * n).count()
        })
        .collect()
}
