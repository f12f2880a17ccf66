//! File formats. Every file is UTF-8 CSV with a header row, preceded by
//! `#` provenance lines naming the format, the config digest and the
//! digests of the files it was derived from.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use chrono::NaiveDate;
use sha2::{Digest, Sha256};
use tabfeat_core::backtest::{CvScheme, PredictionTable, RidgeModel, StrategyReport};
use tabfeat_core::dataset::{MonthlyTable, TargetTable};
use tabfeat_core::sentiment::NewsEvent;
use tabfeat_core::series::OhlcBar;
use tempfile::NamedTempFile;

use crate::config::PipelineConfig;
use crate::error::{validation, PipelineError, Result};
use crate::table::WideTable;

pub const FORMAT_VERSION: u32 = 1;
pub const INTERCEPT: &str = "__intercept__";

/// Feature values: 12 significant digits, `0` for zero, empty when missing.
pub fn format_feature(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else if v == 0.0 {
        String::from("0")
    } else {
        format!("{v:.11e}")
    }
}

/// Shortest text that parses back to the same `f64`; empty when missing.
pub fn format_exact(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else if v == 0.0 {
        String::from("0")
    } else {
        format!("{v}")
    }
}

pub fn format_integer(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        format!("{}", v as i64)
    }
}

/// How the numeric cells of a wide table are written.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellFormat {
    Feature,
    Integer,
}

/// `#` lines at the top of a file.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Provenance {
    pub kind: String,
    pub config_digest: Option<String>,
    pub inputs: Vec<(String, String)>,
    pub notes: Vec<String>,
}

impl Provenance {
    pub fn new(kind: &str, config: &PipelineConfig) -> Self {
        Self { kind: kind.to_string(), config_digest: Some(config.digest()), ..Default::default() }
    }

    pub fn with_input(mut self, path: &Path, digest: &str) -> Self {
        let name = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
        self.inputs.push((name, digest.to_string()));
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    fn write(&self, w: &mut impl Write) -> std::io::Result<()> {
        writeln!(w, "# tabfeat-format: {} v{FORMAT_VERSION}", self.kind)?;
        if let Some(d) = &self.config_digest {
            writeln!(w, "# config-sha256: {d}")?;
        }
        for (name, d) in &self.inputs {
            writeln!(w, "# input: {name} sha256:{d}")?;
        }
        for n in &self.notes {
            writeln!(w, "# note: {n}")?;
        }
        Ok(())
    }

    fn parse_line(&mut self, line: &str) {
        let body = line.trim_start_matches('#').trim();
        if let Some(rest) = body.strip_prefix("tabfeat-format:") {
            self.kind = rest.split_whitespace().next().unwrap_or_default().to_string();
        } else if let Some(rest) = body.strip_prefix("config-sha256:") {
            self.config_digest = Some(rest.trim().to_string());
        } else if let Some(rest) = body.strip_prefix("input:") {
            if let Some((name, d)) = rest.trim().rsplit_once(" sha256:") {
                self.inputs.push((name.to_string(), d.to_string()));
            }
        } else if let Some(rest) = body.strip_prefix("note:") {
            self.notes.push(rest.trim().to_string());
        }
    }
}

/// SHA-256 of a file's bytes.
pub fn file_digest(path: &Path) -> Result<String> {
    let mut f = File::open(path).map_err(|e| PipelineError::io(path, e))?;
    let mut h = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    loop {
        let n = f.read(&mut buf).map_err(|e| PipelineError::io(path, e))?;
        if n == 0 {
            break;
        }
        h.update(&buf[..n]);
    }
    Ok(hex::encode(h.finalize()))
}

/// Writes to a temporary file next to the target and renames on
/// [`finish`](Self::finish), so readers never see partial output.
pub struct AtomicWriter {
    path: PathBuf,
    csv: csv::Writer<BufWriter<NamedTempFile>>,
}

impl AtomicWriter {
    pub fn create(path: &Path, provenance: &Provenance) -> Result<Self> {
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        std::fs::create_dir_all(&dir).map_err(|e| PipelineError::io(&dir, e))?;
        let tmp = NamedTempFile::new_in(&dir).map_err(|e| PipelineError::io(&dir, e))?;
        let mut buf = BufWriter::new(tmp);
        provenance.write(&mut buf).map_err(|e| PipelineError::io(path, e))?;
        Ok(Self { path: path.to_path_buf(), csv: csv::Writer::from_writer(buf) })
    }

    pub fn record<I, T>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[u8]>,
    {
        self.csv.write_record(fields).map_err(|e| csv_io(&self.path, e))
    }

    pub fn finish(self) -> Result<()> {
        let path = self.path;
        let buf = self.csv.into_inner().map_err(|e| PipelineError::io(&path, e.into_error()))?;
        let tmp = buf.into_inner().map_err(|e| PipelineError::io(&path, e.into_error()))?;
        tmp.as_file().sync_all().map_err(|e| PipelineError::io(&path, e))?;
        #[cfg(unix)]
        {
            use std::os::unix::fs::PermissionsExt;
            std::fs::set_permissions(tmp.path(), std::fs::Permissions::from_mode(0o644))
                .map_err(|e| PipelineError::io(&path, e))?;
        }
        tmp.persist(&path).map_err(|e| PipelineError::io(&path, e.error))?;
        Ok(())
    }
}

fn csv_io(path: &Path, e: csv::Error) -> PipelineError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => PipelineError::io(path, io),
        other => validation(format!("{}: {other:?}", path.display())),
    }
}

/// A parsed input file.
#[derive(Debug)]
pub struct Loaded<T> {
    pub value: T,
    pub provenance: Provenance,
    pub digest: String,
    pub path: PathBuf,
}

impl<T> Loaded<T> {
    /// Refuses files written under a different configuration unless forced.
    /// Files without a config line (external inputs) are accepted.
    pub fn check_config(&self, config: &PipelineConfig, force: bool) -> Result<()> {
        match &self.provenance.config_digest {
            Some(d) if *d != config.digest() && !force => Err(validation(format!(
                "{} was produced with config {}, current config is {}; rerun the upstream command or pass --force",
                self.path.display(),
                short(d),
                short(&config.digest())
            ))),
            _ => Ok(()),
        }
    }

    pub fn check_kind(&self, kind: &str) -> Result<()> {
        if !self.provenance.kind.is_empty() && self.provenance.kind != kind {
            return Err(validation(format!(
                "{} is a {} file, expected {kind}",
                self.path.display(),
                self.provenance.kind
            )));
        }
        Ok(())
    }
}

fn short(d: &str) -> &str {
    &d[..d.len().min(12)]
}

/// Line-numbered cursor over the records of a CSV file.
pub struct Records {
    path: PathBuf,
    reader: csv::Reader<BufReader<File>>,
    pub header: Vec<String>,
    header_line: u64,
    record: csv::StringRecord,
}

impl Records {
    pub fn line(&self) -> u64 {
        self.record.position().map_or(0, |p| p.line())
    }

    /// Advances to the next record; `false` at end of file.
    pub fn advance(&mut self) -> Result<bool> {
        self.reader.read_record(&mut self.record).map_err(|e| self.csv_error(e))
    }

    /// Number of fields in the current record.
    pub fn width(&self) -> usize {
        self.record.len()
    }

    pub fn field(&self, i: usize) -> &str {
        &self.record[i]
    }

    fn csv_error(&self, e: csv::Error) -> PipelineError {
        let line = e.position().map_or(0, |p| p.line());
        match e.into_kind() {
            csv::ErrorKind::Io(io) => PipelineError::io(&self.path, io),
            kind => PipelineError::Schema { path: self.path.clone(), line, message: format!("{kind:?}") },
        }
    }

    pub fn error(&self, message: impl Into<String>) -> PipelineError {
        PipelineError::Schema { path: self.path.clone(), line: self.line(), message: message.into() }
    }

    pub fn expect_header(&self, expected: &[&str]) -> Result<()> {
        if self.header.len() < expected.len() || self.header.iter().zip(expected).any(|(a, b)| a != b) {
            return Err(PipelineError::Schema {
                path: self.path.clone(),
                line: self.header_line,
                message: format!("header must start with {}", expected.join(",")),
            });
        }
        Ok(())
    }

    pub fn date(&self, field: usize) -> Result<NaiveDate> {
        let s = &self.record[field];
        NaiveDate::parse_from_str(s, "%Y-%m-%d")
            .map_err(|_| self.error(format!("column {}: invalid date {s:?}", self.header[field])))
    }

    pub fn float(&self, field: usize) -> Result<f64> {
        let s = &self.record[field];
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(self.error(format!("column {}: invalid number {s:?}", self.header[field]))),
        }
    }

    /// Empty cells are missing.
    pub fn optional_float(&self, field: usize) -> Result<Option<f64>> {
        if self.record[field].is_empty() {
            Ok(None)
        } else {
            self.float(field).map(Some)
        }
    }

    pub fn text(&self, field: usize) -> Result<&str> {
        let s = &self.record[field];
        if s.is_empty() {
            return Err(self.error(format!("column {} is empty", self.header[field])));
        }
        Ok(s)
    }
}

/// Opens a CSV file, reading its provenance and digest.
pub fn open(path: &Path) -> Result<(Records, Provenance, String)> {
    let digest = file_digest(path)?;
    let mut provenance = Provenance::default();
    let mut header_line = 1;
    let f = File::open(path).map_err(|e| PipelineError::io(path, e))?;
    for line in BufReader::new(f).lines() {
        let line = line.map_err(|e| PipelineError::io(path, e))?;
        if !line.starts_with('#') {
            break;
        }
        provenance.parse_line(&line);
        header_line += 1;
    }
    let f = File::open(path).map_err(|e| PipelineError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(BufReader::new(f));
    let header = reader
        .headers()
        .map_err(|e| csv_io(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    let records = Records { path: path.to_path_buf(), reader, header, header_line, record: csv::StringRecord::new() };
    Ok((records, provenance, digest))
}

fn loaded<T>(value: T, provenance: Provenance, digest: String, path: &Path) -> Loaded<T> {
    Loaded { value, provenance, digest, path: path.to_path_buf() }
}

pub const PRICES_HEADER: [&str; 6] = ["date", "asset_id", "open", "high", "low", "close"];

pub type PriceData = BTreeMap<String, Vec<OhlcBar>>;

/// Daily bars grouped by asset and sorted by date.
pub fn read_prices(path: &Path) -> Result<Loaded<PriceData>> {
    let (mut r, prov, digest) = open(path)?;
    r.expect_header(&PRICES_HEADER)?;
    let mut out: PriceData = BTreeMap::new();
    while r.advance()? {
        let bar = OhlcBar { date: r.date(0)?, open: r.float(2)?, high: r.float(3)?, low: r.float(4)?, close: r.float(5)? };
        bar.validate().map_err(|e| r.error(e.to_string()))?;
        out.entry(r.text(1)?.to_string()).or_default().push(bar);
    }
    for (asset, bars) in out.iter_mut() {
        bars.sort_by_key(|b| b.date);
        if let Some(w) = bars.windows(2).find(|w| w[0].date == w[1].date) {
            return Err(validation(format!("{}: duplicate bar for {asset} on {}", path.display(), w[0].date)));
        }
    }
    Ok(loaded(out, prov, digest, path))
}

pub fn write_prices(path: &Path, prov: &Provenance, prices: &PriceData) -> Result<()> {
    let mut w = AtomicWriter::create(path, prov)?;
    w.record(PRICES_HEADER)?;
    let mut rows: Vec<(NaiveDate, &str, &OhlcBar)> =
        prices.iter().flat_map(|(a, bars)| bars.iter().map(move |b| (b.date, a.as_str(), b))).collect();
    rows.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
    for (d, a, b) in rows {
        w.record([
            d.to_string(),
            a.to_string(),
            format_exact(b.open),
            format_exact(b.high),
            format_exact(b.low),
            format_exact(b.close),
        ])?;
    }
    w.finish()
}

pub const EVENTS_HEADER: [&str; 6] = ["date", "asset_id", "relevance", "similar_days", "sentiment", "category"];

pub fn read_events(path: &Path) -> Result<Loaded<Vec<NewsEvent>>> {
    let (mut r, prov, digest) = open(path)?;
    r.expect_header(&EVENTS_HEADER)?;
    let mut out = Vec::new();
    while r.advance()? {
        let relevance: u8 = r.record[2]
            .parse()
            .map_err(|_| r.error(format!("column relevance: invalid integer {:?}", &r.record[2])))?;
        let e = NewsEvent {
            date: r.date(0)?,
            asset: r.text(1)?.to_string(),
            relevance,
            similar_days: r.float(3)?,
            sentiment: r.float(4)?,
            category: r.text(5)?.to_string(),
        };
        e.validate().map_err(|err| r.error(err.to_string()))?;
        out.push(e);
    }
    Ok(loaded(out, prov, digest, path))
}

pub fn write_events(path: &Path, prov: &Provenance, events: &[NewsEvent]) -> Result<()> {
    let mut w = AtomicWriter::create(path, prov)?;
    w.record(EVENTS_HEADER)?;
    for e in events {
        w.record([
            e.date.to_string(),
            e.asset.clone(),
            e.relevance.to_string(),
            format_exact(e.similar_days),
            format_exact(e.sentiment),
            e.category.clone(),
        ])?;
    }
    w.finish()
}

pub fn read_financials(path: &Path) -> Result<Loaded<MonthlyTable>> {
    let (mut r, prov, digest) = open(path)?;
    r.expect_header(&["month_end", "asset_id"])?;
    let columns: Arc<[String]> = r.header[2..].iter().cloned().collect();
    let mut table = MonthlyTable::new(columns);
    while r.advance()? {
        if r.width() != r.header.len() {
            return Err(r.error(format!("expected {} fields, got {}", r.header.len(), r.width())));
        }
        let values = (2..r.header.len()).map(|i| r.optional_float(i)).collect::<Result<Vec<_>>>()?;
        let (date, asset) = (r.date(0)?, r.text(1)?.to_string());
        table.insert(&asset, date, values).map_err(|e| r.error(e.to_string()))?;
    }
    Ok(loaded(table, prov, digest, path))
}

/// Rows are `(month_end, asset, values)` in the order given.
pub fn write_financials(
    path: &Path,
    prov: &Provenance,
    columns: &[String],
    rows: &[(NaiveDate, String, Vec<Option<f64>>)],
) -> Result<()> {
    let mut w = AtomicWriter::create(path, prov)?;
    w.record(["month_end", "asset_id"].into_iter().map(String::from).chain(columns.iter().cloned()))?;
    for (d, a, values) in rows {
        w.record(
            [d.to_string(), a.clone()]
                .into_iter()
                .chain(values.iter().map(|v| format_exact(v.unwrap_or(f64::NAN)))),
        )?;
    }
    w.finish()
}

pub type Universe = BTreeMap<NaiveDate, Vec<String>>;

pub fn read_universe(path: &Path) -> Result<Loaded<Universe>> {
    let (mut r, prov, digest) = open(path)?;
    r.expect_header(&["week", "asset_id"])?;
    let mut out: Universe = BTreeMap::new();
    while r.advance()? {
        out.entry(r.date(0)?).or_default().push(r.text(1)?.to_string());
    }
    for (w, assets) in out.iter_mut() {
        assets.sort();
        if assets.windows(2).any(|p| p[0] == p[1]) {
            return Err(validation(format!("{}: duplicate universe member in week {w}", path.display())));
        }
    }
    Ok(loaded(out, prov, digest, path))
}

pub fn write_universe(path: &Path, prov: &Provenance, universe: &Universe) -> Result<()> {
    let mut w = AtomicWriter::create(path, prov)?;
    w.record(["week", "asset_id"])?;
    for (week, assets) in universe {
        for a in assets {
            w.record([week.to_string(), a.clone()])?;
        }
    }
    w.finish()
}

pub fn read_targets(path: &Path) -> Result<Loaded<TargetTable>> {
    let (mut r, prov, digest) = open(path)?;
    r.expect_header(&["week", "asset_id", "target"])?;
    let mut t = TargetTable::new();
    while r.advance()? {
        let (week, asset, value) = (r.date(0)?, r.text(1)?.to_string(), r.float(2)?);
        t.insert(week, &asset, value).map_err(|e| r.error(e.to_string()))?;
    }
    Ok(loaded(t, prov, digest, path))
}

pub fn write_targets(path: &Path, prov: &Provenance, targets: &TargetTable) -> Result<()> {
    let mut w = AtomicWriter::create(path, prov)?;
    w.record(["week", "asset_id", "target"])?;
    for (week, asset, v) in targets.iter() {
        w.record([week.to_string(), asset.to_string(), format_exact(v)])?;
    }
    w.finish()
}

/// Reads a `week,asset_id,<columns..>` table.
pub fn read_wide(path: &Path) -> Result<Loaded<WideTable>> {
    let (mut r, prov, digest) = open(path)?;
    r.expect_header(&["week", "asset_id"])?;
    let columns: Arc<[String]> = r.header[2..].iter().cloned().collect();
    let width = r.header.len();
    let mut t = WideTable::new(columns);
    while r.advance()? {
        if r.width() != width {
            return Err(r.error(format!("expected {width} fields, got {}", r.width())));
        }
        let values = (2..width).map(|i| r.optional_float(i)).collect::<Result<Vec<_>>>()?;
        let (week, asset) = (r.date(0)?, r.text(1)?.to_string());
        t.push(week, &asset, values);
    }
    t.check_unique_keys()?;
    Ok(loaded(t, prov, digest, path))
}

pub fn write_wide(path: &Path, prov: &Provenance, table: &WideTable, cells: CellFormat) -> Result<()> {
    let mut w = AtomicWriter::create(path, prov)?;
    w.record(["week", "asset_id"].into_iter().map(String::from).chain(table.columns.iter().cloned()))?;
    let fmt = match cells {
        CellFormat::Feature => format_feature,
        CellFormat::Integer => format_integer,
    };
    for (i, (week, asset)) in table.keys.iter().enumerate() {
        w.record([week.to_string(), asset.clone()].into_iter().chain(table.row(i).iter().map(|v| fmt(*v))))?;
    }
    w.finish()
}

pub fn read_categories(path: &Path) -> Result<Loaded<Vec<String>>> {
    let (mut r, prov, digest) = open(path)?;
    r.expect_header(&["rank", "category"])?;
    let mut out = Vec::new();
    while r.advance()? {
        out.push(r.text(1)?.to_string());
    }
    Ok(loaded(out, prov, digest, path))
}

pub fn write_categories(path: &Path, prov: &Provenance, categories: &[String]) -> Result<()> {
    let mut w = AtomicWriter::create(path, prov)?;
    w.record(["rank", "category"])?;
    for (i, c) in categories.iter().enumerate() {
        w.record([i.to_string(), c.clone()])?;
    }
    w.finish()
}

pub const SPLIT_HEADER: [&str; 7] =
    ["scheme", "train_start", "train_end", "validation_start", "validation_end", "test_start", "test_end"];

pub fn read_split(path: &Path) -> Result<Loaded<CvScheme>> {
    let (mut r, prov, digest) = open(path)?;
    r.expect_header(&SPLIT_HEADER)?;
    if !r.advance()? {
        return Err(r.error("split file has no scheme row"));
    }
    let mut dates = [NaiveDate::MIN; 6];
    for (i, d) in dates.iter_mut().enumerate() {
        *d = r.date(i + 1)?;
    }
    let scheme = CvScheme::from_dates(r.text(0)?.to_string(), dates);
    scheme.validate()?;
    Ok(loaded(scheme, prov, digest, path))
}

pub fn write_split(path: &Path, prov: &Provenance, scheme: &CvScheme) -> Result<()> {
    let mut w = AtomicWriter::create(path, prov)?;
    w.record(SPLIT_HEADER)?;
    w.record(std::iter::once(scheme.name.clone()).chain(scheme.dates().iter().map(|d| d.to_string())))?;
    w.finish()
}

pub fn read_model(path: &Path) -> Result<Loaded<RidgeModel>> {
    let (mut r, prov, digest) = open(path)?;
    r.expect_header(&["feature", "weight"])?;
    let (mut columns, mut weights, mut intercept) = (Vec::new(), Vec::new(), None);
    while r.advance()? {
        let (name, w) = (r.text(0)?.to_string(), r.float(1)?);
        if name == INTERCEPT {
            intercept = Some(w);
        } else {
            columns.push(name);
            weights.push(w);
        }
    }
    let intercept = intercept.ok_or_else(|| validation(format!("{}: no {INTERCEPT} row", path.display())))?;
    Ok(loaded(RidgeModel { columns, weights, intercept }, prov, digest, path))
}

pub fn write_model(path: &Path, prov: &Provenance, model: &RidgeModel) -> Result<()> {
    let mut w = AtomicWriter::create(path, prov)?;
    w.record(["feature", "weight"])?;
    w.record([INTERCEPT.to_string(), format_exact(model.intercept)])?;
    for (c, v) in model.columns.iter().zip(&model.weights) {
        w.record([c.clone(), format_exact(*v)])?;
    }
    w.finish()
}

pub fn read_predictions(path: &Path) -> Result<Loaded<PredictionTable>> {
    let (mut r, prov, digest) = open(path)?;
    r.expect_header(&["week", "asset_id", "score"])?;
    let mut t = PredictionTable::new();
    while r.advance()? {
        let (week, asset, score) = (r.date(0)?, r.text(1)?.to_string(), r.float(2)?);
        t.insert(week, &asset, score).map_err(|e| r.error(e.to_string()))?;
    }
    Ok(loaded(t, prov, digest, path))
}

pub fn write_predictions(path: &Path, prov: &Provenance, preds: &PredictionTable) -> Result<()> {
    let mut w = AtomicWriter::create(path, prov)?;
    w.record(["week", "asset_id", "score"])?;
    for (week, asset, s) in preds.iter() {
        w.record([week.to_string(), asset.to_string(), format_exact(s)])?;
    }
    w.finish()
}

/// `metric,value` rows.
pub fn write_metrics(path: &Path, prov: &Provenance, rows: &[(String, String)]) -> Result<()> {
    let mut w = AtomicWriter::create(path, prov)?;
    w.record(["metric", "value"])?;
    for (k, v) in rows {
        w.record([k, v])?;
    }
    w.finish()
}

pub fn read_metrics(path: &Path) -> Result<Loaded<Vec<(String, String)>>> {
    let (mut r, prov, digest) = open(path)?;
    r.expect_header(&["metric", "value"])?;
    let mut out = Vec::new();
    while r.advance()? {
        out.push((r.field(0).to_string(), r.field(1).to_string()));
    }
    Ok(loaded(out, prov, digest, path))
}

/// Weekly correlations of one scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeSeries {
    pub scheme: String,
    pub weeks: Vec<NaiveDate>,
    pub corrs: Vec<f64>,
}

pub fn write_corr_series(path: &Path, prov: &Provenance, series: &SchemeSeries) -> Result<()> {
    let mut w = AtomicWriter::create(path, prov)?;
    w.record(["scheme", "week", "corr"])?;
    for (d, c) in series.weeks.iter().zip(&series.corrs) {
        w.record([series.scheme.clone(), d.to_string(), format_exact(*c)])?;
    }
    w.finish()
}

pub fn read_corr_series(path: &Path) -> Result<Loaded<SchemeSeries>> {
    let (mut r, prov, digest) = open(path)?;
    r.expect_header(&["scheme", "week", "corr"])?;
    let mut s = SchemeSeries { scheme: String::new(), weeks: Vec::new(), corrs: Vec::new() };
    while r.advance()? {
        let scheme = r.text(0)?;
        if s.weeks.is_empty() {
            s.scheme = scheme.to_string();
        } else if s.scheme != scheme {
            return Err(r.error(format!("mixed schemes {} and {scheme} in one series file", s.scheme)));
        }
        s.weeks.push(r.date(1)?);
        s.corrs.push(r.float(2)?);
    }
    Ok(loaded(s, prov, digest, path))
}

pub const SUMMARY_HEADER: [&str; 8] =
    ["label", "scheme", "weeks", "sharpe", "calmar", "mean", "volatility", "max_drawdown"];

/// One row per `(label, scheme, report)`.
pub fn write_summary(path: &Path, prov: &Provenance, rows: &[(String, String, StrategyReport)]) -> Result<()> {
    let mut w = AtomicWriter::create(path, prov)?;
    w.record(SUMMARY_HEADER)?;
    for (label, scheme, r) in rows {
        w.record([
            label.clone(),
            scheme.clone(),
            r.weeks.to_string(),
            format_exact(r.sharpe.unwrap_or(f64::NAN)),
            format_exact(r.calmar.unwrap_or(f64::NAN)),
            format_exact(r.mean),
            format_exact(r.volatility),
            format_exact(r.max_drawdown),
        ])?;
    }
    w.finish()
}
