//! `tabfeat` subcommands.

use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};
use tabfeat_core::backtest::{strategy_report, CorrSeries, CvScheme, Period, StrategyReport};
use tabfeat_core::features::{column_family, Family};

use crate::config::PipelineConfig;
use crate::error::{validation, PipelineError, Result};
use crate::io::{self, CellFormat, Loaded, Provenance, SchemeSeries};
use crate::pipeline;
use crate::synth;
use crate::table::WideTable;

#[derive(Debug, Parser)]
#[command(name = "tabfeat", version, about = "Weekly cross-sectional feature pipeline for equity data")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// TOML configuration file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads (defaults to the number of CPUs). Does not affect output.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Accept inputs produced under a different configuration.
    #[arg(long, global = true)]
    pub force: bool,
    #[command(flatten)]
    pub overrides: ConfigOverrides,
}

/// Flags mirroring [`PipelineConfig`] fields.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigOverrides {
    #[arg(long, global = true)]
    pub start: Option<NaiveDate>,
    #[arg(long, global = true)]
    pub end: Option<NaiveDate>,
    #[arg(long, global = true, value_delimiter = ',')]
    pub windows: Option<Vec<usize>>,
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    #[arg(long, global = true, value_delimiter = ',')]
    pub ma_lags: Option<Vec<usize>>,
    #[arg(long, global = true)]
    pub categories: Option<usize>,
    #[arg(long, global = true)]
    pub category_start: Option<NaiveDate>,
    #[arg(long, global = true)]
    pub category_end: Option<NaiveDate>,
    #[arg(long, global = true)]
    pub quantiles: Option<usize>,
    #[arg(long, global = true)]
    pub ridge_lambda: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub assets: Option<usize>,
    #[arg(long, global = true)]
    pub drift: Option<f64>,
    #[arg(long, global = true)]
    pub volatility: Option<f64>,
    #[arg(long, global = true)]
    pub events_per_day: Option<f64>,
    #[arg(long, global = true)]
    pub event_categories: Option<usize>,
    #[arg(long, global = true)]
    pub financial_columns: Option<usize>,
    #[arg(long, global = true)]
    pub missing_rate: Option<f64>,
    #[arg(long, global = true)]
    pub universe_dropout: Option<f64>,
    #[arg(long, global = true)]
    pub signal_strength: Option<f64>,
    #[arg(long, global = true)]
    pub horizon: Option<usize>,
}

impl ConfigOverrides {
    pub fn apply(&self, c: &mut PipelineConfig) -> Result<()> {
        macro_rules! set {
            ($($field:ident).+ <- $value:ident) => {
                if let Some(v) = &self.$value {
                    c.$($field).+ = v.clone();
                }
            };
        }
        set!(start <- start);
        set!(end <- end);
        set!(windows <- windows);
        set!(depth <- depth);
        set!(categories <- categories);
        set!(category_start <- category_start);
        set!(category_end <- category_end);
        set!(quantiles <- quantiles);
        set!(ridge_lambda <- ridge_lambda);
        set!(seed <- seed);
        set!(synth.assets <- assets);
        set!(synth.drift <- drift);
        set!(synth.volatility <- volatility);
        set!(synth.events_per_day <- events_per_day);
        set!(synth.event_categories <- event_categories);
        set!(synth.financial_columns <- financial_columns);
        set!(synth.missing_rate <- missing_rate);
        set!(synth.universe_dropout <- universe_dropout);
        set!(synth.signal_strength <- signal_strength);
        set!(synth.horizon <- horizon);
        if let Some(l) = &self.ma_lags {
            c.ma_lags = <[usize; 2]>::try_from(l.as_slice())
                .map_err(|_| validation("--ma-lags takes exactly two values"))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Stats,
    Catch22,
    Signature,
    Sentiment,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Stats => Family::Stats,
            FamilyArg::Catch22 => Family::Catch22,
            FamilyArg::Signature => Family::Signature,
            FamilyArg::Sentiment => Family::Sentiment,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PeriodArg {
    Validation,
    Test,
}

impl From<PeriodArg> for Period {
    fn from(p: PeriodArg) -> Self {
        match p {
            PeriodArg::Validation => Period::Validation,
            PeriodArg::Test => Period::Test,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate synthetic prices, events, financials, universe and targets.
    Synth {
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Compute one feature family for every asset and week.
    Features {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        prices: PathBuf,
        /// News events (sentiment only).
        #[arg(long)]
        events: Option<PathBuf>,
        /// Existing category list (sentiment only); selected from the
        /// events and written to --categories-out when absent.
        #[arg(long)]
        categories_file: Option<PathBuf>,
        #[arg(long)]
        categories_out: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Join feature families and monthly financials over the universe.
    Assemble {
        #[arg(long = "features", num_args = 1.., required = true)]
        features: Vec<PathBuf>,
        #[arg(long)]
        financials: Option<PathBuf>,
        #[arg(long)]
        universe: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rank-quantise every column within each week.
    Normalize {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write one manifest per cross-validation scheme.
    Split {
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Fit the ridge baseline on a scheme's training weeks and score all rows.
    TrainBaseline {
        #[arg(long)]
        quantized: PathBuf,
        #[arg(long)]
        targets: PathBuf,
        #[arg(long)]
        split: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        predictions: PathBuf,
    },
    /// Weekly Spearman correlation of predictions with targets.
    Evaluate {
        #[arg(long)]
        predictions: PathBuf,
        #[arg(long)]
        targets: PathBuf,
        #[arg(long)]
        split: PathBuf,
        #[arg(long, value_enum, default_value = "test")]
        period: PeriodArg,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        series: Option<PathBuf>,
    },
    /// Summarise one or more correlation series, one row each.
    Report {
        #[arg(long = "series", num_args = 1.., required = true)]
        series: Vec<PathBuf>,
        /// Row labels, one per series (defaults to the file stem).
        #[arg(long = "labels", num_args = 1.., value_delimiter = ',')]
        labels: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Resolved configuration: defaults, then the config file, then flags.
pub fn resolve_config(global: &GlobalArgs) -> Result<PipelineConfig> {
    let mut c = match &global.config {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    global.overrides.apply(&mut c)?;
    c.validate()?;
    Ok(c)
}

pub fn run(cli: Cli) -> Result<()> {
    let config = resolve_config(&cli.global)?;
    let ctx = Context { config, force: cli.global.force };
    match cli.global.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| validation(format!("thread pool: {e}")))?;
            pool.install(|| ctx.execute(&cli.command))
        }
        None => ctx.execute(&cli.command),
    }
}

struct Context {
    config: PipelineConfig,
    force: bool,
}

fn require(path: &Path, command: &str) -> Result<()> {
    if path.exists() {
        Ok(())
    } else {
        Err(PipelineError::MissingInput { path: path.to_path_buf(), command: command.to_string() })
    }
}

fn note(msg: impl AsRef<str>) {
    eprintln!("tabfeat: {}", msg.as_ref());
}

impl Context {
    fn derived<T>(&self, l: Loaded<T>, kind: &str) -> Result<Loaded<T>> {
        l.check_kind(kind)?;
        l.check_config(&self.config, self.force)?;
        Ok(l)
    }

    fn provenance(&self, kind: &str, inputs: &[(&Path, &str)]) -> Provenance {
        inputs.iter().fold(Provenance::new(kind, &self.config), |p, (path, d)| p.with_input(path, d))
    }

    fn execute(&self, command: &Command) -> Result<()> {
        match command {
            Command::Synth { out_dir } => self.synth(out_dir),
            Command::Features { family, prices, events, categories_file, categories_out, out } => {
                self.features((*family).into(), prices, events.as_deref(), categories_file.as_deref(), categories_out.as_deref(), out)
            }
            Command::Assemble { features, financials, universe, out } => {
                self.assemble(features, financials.as_deref(), universe, out)
            }
            Command::Normalize { dataset, out } => self.normalize(dataset, out),
            Command::Split { out_dir } => self.split(out_dir),
            Command::TrainBaseline { quantized, targets, split, model, predictions } => {
                self.train(quantized, targets, split, model, predictions)
            }
            Command::Evaluate { predictions, targets, split, period, out, series } => {
                self.evaluate(predictions, targets, split, (*period).into(), out, series.as_deref())
            }
            Command::Report { series, labels, out } => self.report(series, labels, out),
        }
    }

    fn synth(&self, dir: &Path) -> Result<()> {
        let d = synth::generate(&self.config)?;
        // Generated files stand in for external data, so they carry the
        // config digest as a note rather than as a checked stamp.
        let prov = |kind: &str| Provenance {
            kind: kind.to_string(),
            notes: vec![format!("synthetic, config sha256:{}", self.config.digest())],
            ..Default::default()
        };
        io::write_prices(&dir.join("prices.csv"), &prov("prices"), &d.prices)?;
        io::write_events(&dir.join("events.csv"), &prov("events"), &d.events)?;
        io::write_financials(&dir.join("financials.csv"), &prov("financials"), &d.financial_columns, &d.financials)?;
        io::write_universe(&dir.join("universe.csv"), &prov("universe"), &d.universe)?;
        io::write_targets(&dir.join("targets.csv"), &prov("targets"), &d.targets)?;
        Ok(())
    }

    fn features(
        &self,
        family: Family,
        prices_path: &Path,
        events_path: Option<&Path>,
        categories_file: Option<&Path>,
        categories_out: Option<&Path>,
        out: &Path,
    ) -> Result<()> {
        require(prices_path, "synth")?;
        let prices = io::read_prices(prices_path)?;
        prices.check_kind("prices")?;
        let mut inputs = vec![(prices_path, prices.digest.clone())];
        let result = if family == Family::Sentiment {
            let events_path = events_path.ok_or_else(|| validation("sentiment features need --events"))?;
            require(events_path, "synth")?;
            let events = io::read_events(events_path)?;
            events.check_kind("events")?;
            inputs.push((events_path, events.digest.clone()));
            let categories = match categories_file {
                Some(p) => {
                    require(p, "features --family sentiment")?;
                    let c = self.derived(io::read_categories(p)?, "categories")?;
                    inputs.push((p, c.digest.clone()));
                    c.value
                }
                None => {
                    let sel = pipeline::select_categories(&events.value, &self.config)?;
                    if sel.short {
                        note(format!(
                            "only {} categories found in the selection window, {} requested",
                            sel.categories.len(),
                            self.config.categories
                        ));
                    }
                    let path = match categories_out {
                        Some(p) => p.to_path_buf(),
                        None => out.with_file_name("categories.csv"),
                    };
                    let prov = self.provenance("categories", &[(events_path, &events.digest)]);
                    io::write_categories(&path, &prov, &sel.categories)?;
                    sel.categories
                }
            };
            pipeline::sentiment_features(&prices.value, &events.value, &categories, &self.config)?
        } else {
            pipeline::price_features(family, &prices.value, &self.config)?
        };
        if result.skipped > 0 {
            note(format!("{family}: skipped {} asset-weeks with insufficient history", result.skipped));
        }
        let refs: Vec<(&Path, &str)> = inputs.iter().map(|(p, d)| (*p, d.as_str())).collect();
        let prov = self.provenance("features", &refs).note(format!("family {family}"));
        io::write_wide(out, &prov, &result.table, CellFormat::Feature)
    }

    fn assemble(&self, features: &[PathBuf], financials: Option<&Path>, universe: &Path, out: &Path) -> Result<()> {
        require(universe, "synth")?;
        let uni = io::read_universe(universe)?;
        uni.check_kind("universe")?;
        let mut inputs = vec![(universe.to_path_buf(), uni.digest.clone())];
        let mut tables: Vec<(Family, WideTable)> = Vec::new();
        for p in features {
            require(p, "features")?;
            let t = self.derived(io::read_wide(p)?, "features")?;
            let family = t
                .value
                .columns
                .first()
                .and_then(|c| column_family(c))
                .ok_or_else(|| validation(format!("{}: cannot tell the feature family from its columns", p.display())))?;
            if t.value.columns.iter().any(|c| column_family(c) != Some(family)) {
                return Err(validation(format!("{}: columns from more than one family", p.display())));
            }
            if tables.iter().any(|(f, _)| *f == family) {
                return Err(validation(format!("{family} features given twice")));
            }
            inputs.push((p.clone(), t.digest.clone()));
            tables.push((family, t.value));
        }
        tables.sort_by_key(|(f, _)| Family::ALL.iter().position(|x| x == f));
        let monthly = match financials {
            Some(p) => {
                require(p, "synth")?;
                let m = io::read_financials(p)?;
                m.check_kind("financials")?;
                inputs.push((p.to_path_buf(), m.digest.clone()));
                Some(m.value)
            }
            None => None,
        };
        let refs: Vec<(Family, &WideTable)> = tables.iter().map(|(f, t)| (*f, t)).collect();
        let assembled = pipeline::assemble_dataset(&refs, monthly.as_ref(), &uni.value)?;
        let mut prov = self.provenance("dataset", &inputs.iter().map(|(p, d)| (p.as_path(), d.as_str())).collect::<Vec<_>>());
        for (family, n) in &assembled.drops {
            if *n > 0 {
                note(format!("dropped {n} universe rows missing {family} features"));
            }
            prov = prov.note(format!("dropped {n} rows missing {family}"));
        }
        io::write_wide(out, &prov, &assembled.table, CellFormat::Feature)
    }

    fn normalize(&self, dataset: &Path, out: &Path) -> Result<()> {
        require(dataset, "assemble")?;
        let d = self.derived(io::read_wide(dataset)?, "dataset")?;
        let n = pipeline::normalize_dataset(&d.value, self.config.quantiles)?;
        if n.sparse > 0 {
            note(format!("{} week-columns had too few values to rank and were set to 0", n.sparse));
        }
        let prov = self.provenance("quantized", &[(dataset, &d.digest)]);
        io::write_wide(out, &prov, &n.table, CellFormat::Integer)
    }

    fn split(&self, dir: &Path) -> Result<()> {
        for s in self.config.schemes()? {
            let prov = Provenance::new("split", &self.config);
            io::write_split(&dir.join(format!("split_{}.csv", s.name)), &prov, &s)?;
        }
        Ok(())
    }

    fn scheme(&self, path: &Path) -> Result<Loaded<CvScheme>> {
        require(path, "split")?;
        self.derived(io::read_split(path)?, "split")
    }

    fn train(&self, quantized: &Path, targets: &Path, split: &Path, model_out: &Path, preds_out: &Path) -> Result<()> {
        require(quantized, "normalize")?;
        require(targets, "synth")?;
        let q = self.derived(io::read_wide(quantized)?, "quantized")?;
        let t = io::read_targets(targets)?;
        t.check_kind("targets")?;
        let s = self.scheme(split)?;
        let model = pipeline::train_baseline(&q.value, &t.value, &s.value, self.config.ridge_lambda)?;
        let preds = pipeline::predict(&model, &q.value)?;
        let inputs = [(quantized, q.digest.as_str()), (targets, t.digest.as_str()), (split, s.digest.as_str())];
        io::write_model(model_out, &self.provenance("model", &inputs).note(format!("scheme {}", s.value.name)), &model)?;
        io::write_predictions(preds_out, &self.provenance("predictions", &inputs).note(format!("scheme {}", s.value.name)), &preds)
    }

    fn evaluate(
        &self,
        predictions: &Path,
        targets: &Path,
        split: &Path,
        period: Period,
        out: &Path,
        series_out: Option<&Path>,
    ) -> Result<()> {
        require(predictions, "train-baseline")?;
        require(targets, "synth")?;
        let p = self.derived(io::read_predictions(predictions)?, "predictions")?;
        let t = io::read_targets(targets)?;
        t.check_kind("targets")?;
        let s = self.scheme(split)?;
        let e = pipeline::evaluate(&p.value, &t.value, &s.value, period)?;
        let inputs = [(predictions, p.digest.as_str()), (targets, t.digest.as_str()), (split, s.digest.as_str())];
        let period_name = match period {
            Period::Validation => "validation",
            _ => "test",
        };
        let mut rows = vec![
            ("scheme".to_string(), s.value.name.clone()),
            ("period".to_string(), period_name.to_string()),
        ];
        rows.extend(report_rows(&e.report));
        rows.push(("skipped_weeks".to_string(), e.skipped_weeks.to_string()));
        rows.push(("degenerate_weeks".to_string(), e.degenerate_weeks.to_string()));
        io::write_metrics(out, &self.provenance("evaluation", &inputs), &rows)?;
        if let Some(path) = series_out {
            let series = SchemeSeries {
                scheme: s.value.name.clone(),
                weeks: e.series.weeks().to_vec(),
                corrs: e.series.corrs().to_vec(),
            };
            io::write_corr_series(path, &self.provenance("corr-series", &inputs).note(period_name), &series)?;
        }
        Ok(())
    }

    fn report(&self, series: &[PathBuf], labels: &[String], out: &Path) -> Result<()> {
        if !labels.is_empty() && labels.len() != series.len() {
            return Err(validation(format!("{} labels given for {} series", labels.len(), series.len())));
        }
        let mut inputs = Vec::new();
        let mut rows: Vec<(String, String, StrategyReport)> = Vec::new();
        for (i, p) in series.iter().enumerate() {
            require(p, "evaluate --series")?;
            let s = self.derived(io::read_corr_series(p)?, "corr-series")?;
            let label = match labels.get(i) {
                Some(l) => l.clone(),
                None => p.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned()),
            };
            let checked = CorrSeries::new(s.value.weeks.clone(), s.value.corrs.clone())
                .map_err(|e| validation(format!("{}: {e}", p.display())))?;
            rows.push((label, s.value.scheme.clone(), strategy_report(checked.corrs())?));
            inputs.push((p.clone(), s.digest));
        }
        let refs: Vec<(&Path, &str)> = inputs.iter().map(|(p, d)| (p.as_path(), d.as_str())).collect();
        io::write_summary(out, &self.provenance("summary", &refs), &rows)
    }
}

fn report_rows(r: &StrategyReport) -> Vec<(String, String)> {
    let opt = |v: Option<f64>| v.map_or_else(String::new, io::format_exact);
    vec![
        ("weeks".to_string(), r.weeks.to_string()),
        ("mean".to_string(), io::format_exact(r.mean)),
        ("volatility".to_string(), io::format_exact(r.volatility)),
        ("sharpe".to_string(), opt(r.sharpe)),
        ("max_drawdown".to_string(), io::format_exact(r.max_drawdown)),
        ("calmar".to_string(), opt(r.calmar)),
    ]
}
