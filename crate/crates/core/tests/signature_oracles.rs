mod support;

use proptest::prelude::*;
use support::oracles::{brute_force_lyndon_count, riemann_signature, sequential_signature, SplitMix};
use tabfeat_core::series::LookbackWindow;
use tabfeat_core::signature::{
    chen_concat, log_signature, lyndon_words, rolling_log_signature, signature, witt_dimension, GradedTensor,
    LyndonBasis, PiecewiseLinearPath,
};

fn random_points(rng: &mut SplitMix, n: usize, dim: usize) -> Vec<f64> {
    (0..n * dim).map(|_| 2.0 * rng.uniform() - 1.0).collect()
}

fn max_abs(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn assert_close(a: &GradedTensor, levels: &[Vec<f64>], rel: f64) {
    for (n, level) in levels.iter().enumerate() {
        let scale = max_abs(level).max(1e-300);
        let err = max_abs(&a.level(n).iter().zip(level).map(|(x, y)| x - y).collect::<Vec<_>>());
        assert!(err <= rel * scale, "level {n}: error {err} vs scale {scale}");
    }
}

#[test]
fn matches_iterated_riemann_sums() {
    let mut rng = SplitMix(1);
    for case in 0..12 {
        let dim = 1 + case % 3;
        let depth = 1 + case % 4;
        let segments = 1 + case % 4;
        let pts = random_points(&mut rng, segments + 1, dim);
        let sig = signature(&PiecewiseLinearPath::from_points(dim, pts.clone()).unwrap(), depth).unwrap();
        assert_close(&sig, &riemann_signature(&pts, dim, depth, 100_000), 1e-4);
    }
}

#[test]
fn chen_concatenation_matches_joined_path() {
    let mut rng = SplitMix(2);
    for _ in 0..50 {
        let pts = random_points(&mut rng, 9, 3);
        let whole = signature(&PiecewiseLinearPath::from_points(3, pts.clone()).unwrap(), 4).unwrap();
        let first = signature(&PiecewiseLinearPath::from_points(3, pts[..15].to_vec()).unwrap(), 4).unwrap();
        let second = signature(&PiecewiseLinearPath::from_points(3, pts[12..].to_vec()).unwrap(), 4).unwrap();
        let joined = chen_concat(&first, &second).unwrap();
        let levels: Vec<Vec<f64>> = (0..=4).map(|n| whole.level(n).to_vec()).collect();
        assert_close(&joined, &levels, 1e-10);
    }
}

#[test]
fn log_exp_round_trip_through_lyndon_coordinates() {
    let mut rng = SplitMix(3);
    let basis = LyndonBasis::new(3, 4);
    for _ in 0..50 {
        let pts = random_points(&mut rng, 6, 3);
        let sig = signature(&PiecewiseLinearPath::from_points(3, pts).unwrap(), 4).unwrap();
        let back = basis.exp_log_signature(&basis.log_signature(&sig).unwrap()).unwrap();
        let levels: Vec<Vec<f64>> = (0..=4).map(|n| sig.level(n).to_vec()).collect();
        assert_close(&back, &levels, 1e-10);
    }
}

#[test]
fn rolling_matches_per_window_recomputation() {
    let mut rng = SplitMix(4);
    let basis = LyndonBasis::new(3, 4);
    for _ in 0..5 {
        let pts: Vec<f64> = random_points(&mut rng, 300, 3).iter().scan(0.0, |s, v| {
            *s += 0.1 * v;
            Some(*s)
        }).collect();
        let path = PiecewiseLinearPath::from_points(3, pts.clone()).unwrap();
        let rolled = rolling_log_signature(&path, LookbackWindow::new(21).unwrap(), 4).unwrap();
        assert_eq!(rolled.len(), 280);
        for (i, l) in rolled.iter().enumerate().step_by(7) {
            let window = &pts[i * 3..(i + 21) * 3];
            let levels = sequential_signature(window, 3, 4);
            let flat: Vec<Vec<f64>> = levels[1..].to_vec();
            let direct = GradedTensor::from_levels(3, 1.0, &flat).unwrap();
            let expected = basis.log_signature(&direct).unwrap();
            let scale = max_abs(&expected.coeffs);
            for (a, b) in l.coeffs.iter().zip(&expected.coeffs) {
                assert!((a - b).abs() <= 1e-9 * scale);
            }
        }
    }
}

#[test]
fn witt_counts_match_enumeration() {
    for d in 1..=4 {
        for n in 1..=5 {
            let listed = lyndon_words(d, n).iter().filter(|w| w.len() == n).count();
            assert_eq!(witt_dimension(d, n), brute_force_lyndon_count(d, n), "d={d} n={n}");
            assert_eq!(listed, witt_dimension(d, n), "d={d} n={n}");
        }
    }
    assert_eq!(LyndonBasis::new(3, 4).level_sizes(), [3, 3, 8, 18]);
}

fn path_strategy() -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-2.0f64..2.0, 6..=24).prop_map(|mut v| {
        v.truncate(v.len() / 3 * 3);
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn translation_and_reparametrisation_invariant(pts in path_strategy(), shift in -5.0f64..5.0) {
        let n = pts.len() / 3;
        let base = signature(&PiecewiseLinearPath::from_points(3, pts.clone()).unwrap(), 3).unwrap();
        let moved: Vec<f64> = pts.iter().map(|v| v + shift).collect();
        let times: Vec<f64> = (0..n).map(|i| (i * i) as f64 + i as f64).collect();
        let other = signature(&PiecewiseLinearPath::new(3, times, moved).unwrap(), 3).unwrap();
        for (a, b) in base.coefficients().iter().zip(other.coefficients()) {
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn reversed_path_is_inverse(pts in path_strategy()) {
        let fwd = signature(&PiecewiseLinearPath::from_points(3, pts.clone()).unwrap(), 4).unwrap();
        let rev_pts: Vec<f64> = pts.chunks(3).rev().flatten().copied().collect();
        let rev = signature(&PiecewiseLinearPath::from_points(3, rev_pts).unwrap(), 4).unwrap();
        let id = chen_concat(&fwd, &rev).unwrap();
        let scale = 1.0 + max_abs(fwd.coefficients()).powi(2);
        prop_assert!((id.scalar() - 1.0).abs() < 1e-12);
        prop_assert!(max_abs(&id.coefficients()[1..]) <= 1e-10 * scale);
    }

    #[test]
    fn level_one_log_is_total_increment(pts in path_strategy()) {
        let l = log_signature(&signature(&PiecewiseLinearPath::from_points(3, pts.clone()).unwrap(), 4).unwrap()).unwrap();
        let n = pts.len();
        for c in 0..3 {
            prop_assert!((l.coeffs[c] - (pts[n - 3 + c] - pts[c])).abs() < 1e-12);
        }
    }
}
