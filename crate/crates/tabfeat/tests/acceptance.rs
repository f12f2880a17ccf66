//! Acceptance checks, one line per criterion. Run with
//! `cargo test -p tabfeat --test acceptance`.

#[path = "../../core/tests/support/oracles.rs"]
mod oracles;

use std::path::Path;
use std::sync::Arc;
use std::time::{Duration, Instant};

use chrono::NaiveDate;
use clap::Parser;
use oracles::{
    brute_force_bins, brute_force_lyndon_count, brute_force_max_drawdown, brute_force_spearman, catch22_reference,
    reference_series, riemann_signature, sequential_signature, SplitMix,
};
use tabfeat::cli::{run, Cli};
use tabfeat::config::PipelineConfig;
use tabfeat::pipeline;
use tabfeat::synth;
use tabfeat_core::backtest::{default_cv_schemes, max_drawdown, spearman_corr, strategy_report};
use tabfeat_core::catch22::{catch22, INTEGER_FEATURES};
use tabfeat_core::dataset::{rank_quantize, FeatureTable, MonthlyTable};
use tabfeat_core::features::Family;
use tabfeat_core::series::LookbackWindow;
use tabfeat_core::signature::{
    chen_concat, lyndon_words, rolling_log_signature, signature, witt_dimension, GradedTensor, LyndonBasis,
    PiecewiseLinearPath,
};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn day(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).unwrap()
}

fn max_abs(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Largest level-wise error relative to the level's magnitude.
fn level_error(got: &GradedTensor, want: &[Vec<f64>]) -> f64 {
    want.iter()
        .enumerate()
        .map(|(n, level)| {
            let err = max_abs(&got.level(n).iter().zip(level).map(|(a, b)| a - b).collect::<Vec<_>>());
            err / max_abs(level).max(1e-300)
        })
        .fold(0.0, f64::max)
}

fn levels_of(t: &GradedTensor) -> Vec<Vec<f64>> {
    (0..=t.depth()).map(|n| t.level(n).to_vec()).collect()
}

fn random_points(rng: &mut SplitMix, n: usize, dim: usize) -> Vec<f64> {
    (0..n * dim).map(|_| 2.0 * rng.uniform() - 1.0).collect()
}

fn feature_widths() -> Check {
    let start = day(2016, 1, 1);
    let calendar = synth::weekday_calendar(start, day(2022, 12, 31));
    let mut c = PipelineConfig { start, end: calendar.days()[1299], category_start: start, ..Default::default() };
    c.category_end = c.end;
    c.synth.assets = 100;
    let t0 = Instant::now();
    let d = synth::generate(&c).map_err(|e| e.to_string())?;
    ensure(d.prices.values().all(|b| b.len() == 1300), || "expected 1300 trading days per asset".into())?;
    let mut widths = Vec::new();
    let mut tables = Vec::new();
    for family in [Family::Stats, Family::Catch22, Family::Signature] {
        let f = pipeline::price_features(family, &d.prices, &c).map_err(|e| e.to_string())?;
        widths.push(f.table.n_cols());
        tables.push((family, f.table));
    }
    let cats = pipeline::select_categories(&d.events, &c).map_err(|e| e.to_string())?;
    let sentiment = pipeline::sentiment_features(&d.prices, &d.events, &cats.categories, &c).map_err(|e| e.to_string())?;
    widths.push(sentiment.table.n_cols());
    tables.push((Family::Sentiment, sentiment.table));
    let mut monthly = MonthlyTable::new(d.financial_columns.iter().cloned().collect::<Arc<[String]>>());
    for (m, a, v) in &d.financials {
        monthly.insert(a, *m, v.clone()).map_err(|e| e.to_string())?;
    }
    let refs: Vec<(Family, &tabfeat::table::WideTable)> = tables.iter().map(|(f, t)| (*f, t)).collect();
    let all = pipeline::assemble_dataset(&refs, Some(&monthly), &d.universe).map_err(|e| e.to_string())?;
    let elapsed = t0.elapsed();
    widths.push(all.table.n_cols());
    ensure(widths == [12, 66, 96, 204, 582], || format!("widths {widths:?}"))?;
    ensure(all.table.n_rows() > 0, || "assembled dataset is empty".into())?;
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "stats/catch22/signature/sentiment/all = {widths:?}, {} rows, pipeline {:.1}s",
        all.table.n_rows(),
        elapsed.as_secs_f64()
    ))
}

fn log_signature_dimension() -> Check {
    let basis = LyndonBasis::new(3, 4);
    ensure(basis.len() == 32 && basis.level_sizes() == [3, 3, 8, 18], || format!("{:?}", basis.level_sizes()))?;
    for d in 1..=4 {
        for m in 1..=5 {
            let listed = lyndon_words(d, m).iter().filter(|w| w.len() == m).count();
            let brute = brute_force_lyndon_count(d, m);
            ensure(witt_dimension(d, m) == brute && listed == brute, || {
                format!("d={d} m={m}: witt {} listed {listed} brute {brute}", witt_dimension(d, m))
            })?;
        }
    }
    Ok("32 = 3+3+8+18; Witt = enumeration for d<=4, m<=5".into())
}

fn signature_oracles() -> Check {
    let t0 = Instant::now();
    let mut rng = SplitMix(0xACCE_0003);
    let mut worst_riemann: f64 = 0.0;
    for i in 0..200 {
        let dim = 1 + i % 3;
        let depth = 1 + (i / 3) % 4;
        let segments = 1 + (i / 12) % 4;
        let pts = random_points(&mut rng, segments + 1, dim);
        let sig = signature(&PiecewiseLinearPath::from_points(dim, pts.clone()).unwrap(), depth).unwrap();
        worst_riemann = worst_riemann.max(level_error(&sig, &riemann_signature(&pts, dim, depth, 100_000)));
    }
    ensure(worst_riemann <= 1e-4, || format!("Riemann error {worst_riemann:e}"))?;

    let mut worst_chen: f64 = 0.0;
    let mut worst_round: f64 = 0.0;
    let basis = LyndonBasis::new(3, 4);
    for _ in 0..200 {
        let pts = random_points(&mut rng, 9, 3);
        let whole = signature(&PiecewiseLinearPath::from_points(3, pts.clone()).unwrap(), 4).unwrap();
        let a = signature(&PiecewiseLinearPath::from_points(3, pts[..15].to_vec()).unwrap(), 4).unwrap();
        let b = signature(&PiecewiseLinearPath::from_points(3, pts[12..].to_vec()).unwrap(), 4).unwrap();
        worst_chen = worst_chen.max(level_error(&chen_concat(&a, &b).unwrap(), &levels_of(&whole)));
        let back = basis.exp_log_signature(&basis.log_signature(&whole).unwrap()).unwrap();
        worst_round = worst_round.max(level_error(&back, &levels_of(&whole)));
    }
    ensure(worst_chen <= 1e-10, || format!("Chen error {worst_chen:e}"))?;
    ensure(worst_round <= 1e-10, || format!("exp(log) error {worst_round:e}"))?;
    let elapsed = t0.elapsed();
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "max rel error: Riemann {worst_riemann:.1e}, Chen {worst_chen:.1e}, exp(log) {worst_round:.1e}; {:.1}s",
        elapsed.as_secs_f64()
    ))
}

fn rolling_equivalence() -> Check {
    let mut rng = SplitMix(0xACCE_0004);
    let basis = LyndonBasis::new(3, 4);
    let mut worst: f64 = 0.0;
    let mut windows = 0;
    for _ in 0..50 {
        let mut acc = [0.0; 3];
        let pts: Vec<f64> = (0..300 * 3)
            .map(|i| {
                acc[i % 3] += 0.1 * rng.normal();
                acc[i % 3]
            })
            .collect();
        let path = PiecewiseLinearPath::from_points(3, pts.clone()).unwrap();
        let rolled = rolling_log_signature(&path, LookbackWindow::new(21).unwrap(), 4).unwrap();
        ensure(rolled.len() == 280, || format!("{} windows", rolled.len()))?;
        for (i, l) in rolled.iter().enumerate() {
            let levels = sequential_signature(&pts[i * 3..(i + 21) * 3], 3, 4);
            let direct = GradedTensor::from_levels(3, 1.0, &levels[1..]).unwrap();
            let expected = basis.log_signature(&direct).unwrap().coeffs;
            let scale = max_abs(&expected);
            let err = max_abs(&l.coeffs.iter().zip(&expected).map(|(a, b)| a - b).collect::<Vec<_>>());
            worst = worst.max(err / scale);
            windows += 1;
        }
    }
    ensure(worst <= 1e-9, || format!("max rel error {worst:e}"))?;
    Ok(format!("{windows} windows, max rel error {worst:.1e}"))
}

fn catch22_conformance() -> Check {
    let reference = catch22_reference();
    ensure(reference.len() == 100, || "fixture must hold 100 series".into())?;
    let mut worst: f64 = 0.0;
    for (i, expected) in reference.iter().enumerate() {
        let got = catch22(&reference_series(i as u64, 252)).map_err(|e| e.to_string())?;
        for (f, (a, b)) in got.values.iter().zip(expected).enumerate() {
            if INTEGER_FEATURES.contains(&f) {
                ensure(a == b, || format!("series {i} feature {f}: {a} != {b}"))?;
            } else {
                let rel = (a - b).abs() / b.abs().max(1e-12);
                ensure(rel <= 1e-8, || format!("series {i} feature {f}: {a} vs {b}"))?;
                worst = worst.max(rel);
            }
        }
    }
    let mut rng = SplitMix(0xACCE_0005);
    let mut worst_inv: f64 = 0.0;
    for i in 0..100 {
        // Continuous-valued series only: with exact ties, threshold-crossing
        // features flip on last-bit differences of the z-scores.
        let mut acc = 0.0;
        let x: Vec<f64> = (0..252)
            .map(|_| match i % 3 {
                0 => rng.normal(),
                1 => {
                    acc += rng.normal();
                    acc
                }
                _ => {
                    acc = 0.8 * acc + rng.normal();
                    acc
                }
            })
            .collect();
        let (scale, shift) = (10f64.powf(4.0 * rng.uniform() - 2.0), 2000.0 * rng.uniform() - 1000.0);
        let y: Vec<f64> = x.iter().map(|v| scale * v + shift).collect();
        let (a, b) = (catch22(&x).unwrap(), catch22(&y).unwrap());
        for f in 0..22 {
            let (p, q) = (a.values[f], b.values[f]);
            if INTEGER_FEATURES.contains(&f) {
                ensure(p == q, || format!("series {i} feature {f} not invariant: {p} vs {q}"))?;
            } else {
                let err = (p - q).abs() / p.abs().max(1.0);
                ensure(err <= 1e-9, || format!("series {i} feature {f} not invariant: {p} vs {q}"))?;
                worst_inv = worst_inv.max(err);
            }
        }
    }
    Ok(format!("100 x 22 vs reference, max rel error {worst:.1e}; affine invariance on 100 series, max error {worst_inv:.1e}"))
}

fn metric_oracles() -> Check {
    let mut rng = SplitMix(0xACCE_0006);
    let mut worst: f64 = 0.0;
    let mut tied = 0;
    for _ in 0..1000 {
        let n = 2 + (rng.next_u64() % 49) as usize;
        let levels = 2 + rng.next_u64() % 12;
        let a: Vec<f64> = (0..n).map(|_| (rng.next_u64() % levels) as f64).collect();
        let b: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
        let b: Vec<f64> = if rng.uniform() < 0.5 { b.iter().map(|v| (v * 5.0).floor()).collect() } else { b };
        tied += usize::from(a.iter().enumerate().any(|(i, v)| a[..i].contains(v)));
        let got = spearman_corr(&a, &b).map_err(|e| e.to_string())?.corr;
        worst = worst.max((got - brute_force_spearman(&a, &b)).abs());
    }
    ensure(worst <= 1e-12, || format!("Spearman error {worst:e}"))?;
    for _ in 0..1000 {
        let n = 1 + (rng.next_u64() % 60) as usize;
        let c: Vec<f64> = (0..n).map(|_| rng.uniform() - 0.5).collect();
        let (got, want) = (max_drawdown(&c), brute_force_max_drawdown(&c));
        ensure(got == want, || format!("max drawdown {got} vs brute force {want}"))?;
    }
    // Hand-computed: mean 0.02, sample sd sqrt(0.003/3), cumulative
    // 0.04, 0.02, 0.03, 0.08 so the drawdown is 0.02.
    let r = strategy_report(&[0.04, -0.02, 0.01, 0.05]).map_err(|e| e.to_string())?;
    let vol = (0.003f64 / 3.0).sqrt();
    ensure((r.mean - 0.02).abs() < 1e-15 && (r.volatility - vol).abs() < 1e-15, || format!("{r:?}"))?;
    ensure((r.sharpe.unwrap() - 0.02 / vol).abs() < 1e-12, || format!("sharpe {:?}", r.sharpe))?;
    ensure((r.max_drawdown - 0.02).abs() < 1e-15 && (r.calmar.unwrap() - 1.0).abs() < 1e-12, || format!("{r:?}"))?;
    // The published "All" row (Sharpe 0.5158, Calmar 0.0736, mean 0.0147,
    // volatility 0.0286, drawdown 0.1996) is consistent with these
    // definitions within its rounding.
    let (s_lo, s_hi) = lo_hi(0.0147, 0.0286);
    let (c_lo, c_hi) = lo_hi(0.0147, 0.1996);
    ensure((s_lo..=s_hi).contains(&0.5158) && (c_lo..=c_hi).contains(&0.0736), || "published row inconsistent".into())?;
    Ok(format!("Spearman max error {worst:.1e} over 1000 vectors ({tied} with ties); drawdown exact; fixtures match"))
}

/// Range of `m / d` for values rounded to four decimals.
fn lo_hi(m: f64, d: f64) -> (f64, f64) {
    ((m - 5e-5) / (d + 5e-5), (m + 5e-5) / (d - 5e-5))
}

fn cv_schedule() -> Check {
    let table = [
        ["2003-01-31", "2010-12-31", "2012-01-06", "2015-12-25", "2016-07-01", "2021-12-31"],
        ["2003-01-31", "2012-01-06", "2013-01-11", "2016-12-30", "2017-06-30", "2021-12-31"],
        ["2003-01-31", "2013-01-04", "2014-01-10", "2017-12-29", "2018-06-29", "2021-12-31"],
        ["2003-01-31", "2014-01-03", "2015-01-09", "2018-12-28", "2019-06-28", "2021-12-31"],
        ["2003-01-31", "2015-01-02", "2016-01-08", "2019-12-27", "2020-06-26", "2021-12-31"],
    ];
    let schemes = default_cv_schemes();
    ensure(schemes.len() == 5, || format!("{} schemes", schemes.len()))?;
    let mut min_gaps = (i64::MAX, i64::MAX);
    for (s, row) in schemes.iter().zip(&table) {
        let got: Vec<String> = s.dates().iter().map(|d| d.to_string()).collect();
        ensure(got == row, || format!("{}: {got:?}", s.name))?;
        let gap_v = (s.validation_start - s.train_end).num_days() / 7;
        let gap_t = (s.test_start - s.validation_end).num_days() / 7;
        min_gaps = (min_gaps.0.min(gap_v), min_gaps.1.min(gap_t));
    }
    ensure(min_gaps.0 >= 52 && min_gaps.1 >= 26, || format!("gaps {min_gaps:?}"))?;
    Ok(format!("30/30 dates; min gaps {} and {} weeks", min_gaps.0, min_gaps.1))
}

fn quantize_properties() -> Check {
    let mut rng = SplitMix(0xACCE_0008);
    let transforms: [fn(f64) -> f64; 3] = [|x| x.exp(), |x| x * x * x + x, |x| 3.0 * x - 7.0];
    let column = |x: &[f64]| {
        let rows = x.iter().enumerate().map(|(i, v)| (format!("a{i:03}"), vec![Some(*v)])).collect();
        let t = FeatureTable::new(day(2020, 1, 3), Arc::from(vec!["f".to_string()]), rows).unwrap();
        let q = rank_quantize(&t, 5).unwrap();
        (0..x.len()).map(|r| q.get(r, 0).unwrap()).collect::<Vec<i8>>()
    };
    for _ in 0..1000 {
        let n = 5 + (rng.next_u64() % 196) as usize;
        let x: Vec<f64> = (0..n).map(|_| 4.0 * rng.uniform() - 2.0).collect();
        let mut sorted = x.clone();
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let bins = column(&x);
        let mut counts = [0usize; 5];
        for b in &bins {
            counts[(b + 2) as usize] += 1;
        }
        let (lo, hi) = (n / 5, n.div_ceil(5));
        ensure(counts.iter().all(|c| (lo..=hi).contains(c)), || format!("n={n}: counts {counts:?}"))?;
        let oracle: Vec<i8> = brute_force_bins(&x, 5).iter().map(|b| *b as i8 - 2).collect();
        ensure(bins == oracle, || format!("n={n}: bins differ from oracle"))?;
        for f in transforms {
            let y: Vec<f64> = x.iter().map(|v| f(*v)).collect();
            ensure(column(&y) == bins, || format!("n={n}: not invariant under a monotone transform"))?;
        }
    }
    Ok("1000 tie-free columns: sizes in {floor(n/5), ceil(n/5)}, invariant under 3 monotone maps".into())
}

fn tabfeat(dir: &Path, threads: usize, args: &[&str]) -> Result<(), String> {
    let config = dir.join("config.toml").to_string_lossy().into_owned();
    let threads = threads.to_string();
    let all = [&["tabfeat", "--config", &config, "--threads", &threads][..], args].concat();
    let cli = Cli::try_parse_from(all).map_err(|e| e.to_string())?;
    run(cli).map_err(|e| format!("{args:?}: {e}"))
}

/// synth -> features -> assemble -> normalize -> split -> train-baseline
/// -> evaluate (CV 0, validation and test).
fn full_pipeline(dir: &Path, config: &str, families: &[&str], threads: usize) -> Result<(), String> {
    std::fs::write(dir.join("config.toml"), config).map_err(|e| e.to_string())?;
    let p = |n: &str| dir.join(n).to_string_lossy().into_owned();
    let run = |args: &[&str]| tabfeat(dir, threads, args);
    run(&["synth", "--out-dir", &p("")])?;
    let mut assemble = vec!["assemble".to_string(), "--features".to_string()];
    for f in families {
        let out = p(&format!("features_{f}.csv"));
        run(&["features", "--family", f, "--prices", &p("prices.csv"), "--events", &p("events.csv"), "--out", &out])?;
        assemble.push(out);
    }
    assemble.extend(["--financials", &p("financials.csv"), "--universe", &p("universe.csv"), "--out", &p("dataset.csv")].map(String::from));
    run(&assemble.iter().map(String::as_str).collect::<Vec<_>>())?;
    run(&["normalize", "--dataset", &p("dataset.csv"), "--out", &p("quantized.csv")])?;
    run(&["split", "--out-dir", &p("")])?;
    run(&[
        "train-baseline", "--quantized", &p("quantized.csv"), "--targets", &p("targets.csv"), "--split", &p("split_cv0.csv"),
        "--model", &p("model.csv"), "--predictions", &p("predictions.csv"),
    ])?;
    for period in ["validation", "test"] {
        run(&[
            "evaluate", "--predictions", &p("predictions.csv"), "--targets", &p("targets.csv"), "--split", &p("split_cv0.csv"),
            "--period", period, "--out", &p(&format!("eval_{period}.csv")), "--series", &p(&format!("series_{period}.csv")),
        ])?;
    }
    run(&["report", "--series", &p("series_validation.csv"), &p("series_test.csv"), "--out", &p("summary.csv")])
}

fn mean_corr(dir: &Path, period: &str) -> Result<f64, String> {
    let rows = tabfeat::io::read_metrics(&dir.join(format!("eval_{period}.csv"))).map_err(|e| e.to_string())?.value;
    rows.iter()
        .find(|(k, _)| k == "mean")
        .and_then(|(_, v)| v.parse().ok())
        .ok_or_else(|| "no mean in evaluation".to_string())
}

const PLANTED: &str = r#"
[synth]
assets = 30
financial_columns = 20
signal_strength = 1.0
"#;

fn null_config(seed: u64) -> String {
    format!("seed = {seed}\n[synth]\nassets = 20\nfinancial_columns = 10\nsignal_strength = 0.0\n")
}

fn power_test() -> Check {
    let t0 = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    full_pipeline(dir.path(), PLANTED, &["stats", "catch22", "signature", "sentiment"], 1)?;
    let planted = mean_corr(dir.path(), "validation")?;
    ensure(planted > 0.9, || format!("planted validation mean corr {planted}"))?;

    let mut means = Vec::new();
    for seed in 0..50 {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        full_pipeline(dir.path(), &null_config(seed), &["stats", "sentiment"], 1)?;
        means.push(mean_corr(dir.path(), "test")?);
    }
    let n = means.len() as f64;
    let grand = means.iter().sum::<f64>() / n;
    let sigma = (means.iter().map(|m| (m - grand).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let band = 3.0 * sigma / n.sqrt();
    ensure(grand.abs() < band, || format!("null mean {grand:.4} outside band {band:.4}"))?;
    let elapsed = t0.elapsed();
    ensure(elapsed < Duration::from_secs(600), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "planted validation corr {planted:.4}; null test mean {grand:+.4} (band {band:.4}, sigma {sigma:.4}); {:.0}s",
        elapsed.as_secs_f64()
    ))
}

const SMALL: &str = r#"
categories = 50
[synth]
assets = 8
financial_columns = 5
signal_strength = 0.5
"#;

fn determinism() -> Check {
    let dirs: Vec<_> = (0..3).map(|_| tempfile::tempdir().unwrap()).collect();
    let families = ["stats", "catch22", "signature", "sentiment"];
    for (d, threads) in dirs.iter().zip([1, 4, 1]) {
        full_pipeline(d.path(), SMALL, &families, threads)?;
    }
    let listing = |d: &Path| -> Vec<(String, Vec<u8>)> {
        let mut v: Vec<_> = std::fs::read_dir(d)
            .unwrap()
            .map(|e| e.unwrap().path())
            .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
            .collect();
        v.sort();
        v
    };
    let base = listing(dirs[0].path());
    for other in &dirs[1..] {
        let files = listing(other.path());
        ensure(files.len() == base.len(), || "different file sets".into())?;
        for ((name, a), (_, b)) in base.iter().zip(&files) {
            ensure(a == b, || format!("{name} differs"))?;
        }
    }
    Ok(format!("{} files byte-identical across 3 runs (1, 4 and 1 threads)", base.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("feature-count conformance", feature_widths),
        ("log-signature dimension", log_signature_dimension),
        ("signature oracle equivalence", signature_oracles),
        ("rolling-window equivalence", rolling_equivalence),
        ("catch22 conformance", catch22_conformance),
        ("spearman/metrics oracles", metric_oracles),
        ("cv schedule", cv_schedule),
        ("rank-quantize properties", quantize_properties),
        ("end-to-end power test", power_test),
        ("determinism", determinism),
    ];
    let filter: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let t0 = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t0.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {id:>2} {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id:>2} {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
