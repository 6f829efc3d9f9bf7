//! CSV tables and JSON sidecars.
//!
//! Every command writes `<verb>-<timestamp>.csv` (or `.json`) into the output
//! directory. In CSV mode a `<verb>-<timestamp>.json` sidecar holds the full
//! configuration and seed, enough to re-run the command.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use super::config::fmt_f64;
use super::engine::{ModelReport, RunReport};
use super::experiments::SweepPoint;
use super::MonteCarloError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => fmt_f64(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// A rectangular table with named columns.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(columns: &[S]) -> Self {
        Table { columns: columns.iter().map(|c| c.as_ref().to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric value at (`row`, `name`), if present and numeric.
    pub fn num(&self, row: usize, name: &str) -> Option<f64> {
        match self.rows.get(row)?.get(self.column(name)?)? {
            Cell::Num(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            Cell::Text(_) => None,
        }
    }

    /// RFC-4180 CSV with a header row and CRLF line ends.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), MonteCarloError> {
        let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(w);
        out.write_record(&self.columns)?;
        for row in &self.rows {
            out.write_record(row.iter().map(Cell::render))?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String, MonteCarloError> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn from_reports(reports: &[RunReport]) -> Table {
        let mut t = Table::new(&report_columns(&[]));
        for r in reports {
            t.push(report_row(r, &[]));
        }
        t
    }

    pub fn from_sweep(points: &[SweepPoint]) -> Table {
        let mut t = Table::new(&report_columns(&["param", "value"]));
        for p in points {
            t.push(report_row(&p.report, &[p.param.as_str().into(), p.value.into()]));
        }
        t
    }
}

fn report_columns(prefix: &[&str]) -> Vec<String> {
    let mut c: Vec<String> = prefix.iter().map(|s| s.to_string()).collect();
    c.extend(["scenario", "model_y", "beta_db", "trials", "seed", "truncation_radius"].iter().map(|s| s.to_string()));
    c.extend(MODEL_COLUMNS.iter().map(|s| s.to_string()));
    c
}

/// Columns filled by [`model_cells`].
pub const MODEL_COLUMNS: &[&str] = &[
    "model_x",
    "index",
    "index_se",
    "p_fa",
    "se_fa",
    "p_md",
    "se_md",
    "xi",
    "n_h0",
    "n_h1",
    "rho",
    "bhattacharyya_distance",
    "kl_yx",
    "bound_lower",
    "bound_upper",
    "rate_x",
    "rate_y",
    "deviation_pct",
];

fn report_row(r: &RunReport, prefix: &[Cell]) -> Vec<Cell> {
    let mut row = prefix.to_vec();
    row.extend([
        r.config.scenario.to_string().into(),
        r.model_y.to_string().into(),
        r.stats.beta_db.into(),
        r.trials.into(),
        r.seed.into(),
        r.truncation_radius.into(),
    ]);
    let m = ModelReport {
        model_x: r.model_x,
        stats: r.stats.clone(),
        index: r.index,
        index_se: r.index_se,
        distances: r.distances,
        throughput: r.throughput,
    };
    row.extend(model_cells(&m));
    row
}

/// The [`MODEL_COLUMNS`] of one model; undefined quantities become NaN.
pub fn model_cells(m: &ModelReport) -> Vec<Cell> {
    let nan = f64::NAN;
    let d = m.distances;
    let s = &m.stats;
    vec![
        m.model_x.to_string().into(),
        m.index.value.into(),
        m.index_se.into(),
        s.p_fa.into(),
        s.se_fa.into(),
        s.p_md.into(),
        s.se_md.into(),
        s.xi.into(),
        s.n_h0.into(),
        s.n_h1.into(),
        d.map_or(nan, |d| d.rho).into(),
        d.map_or(nan, |d| d.bhattacharyya_distance).into(),
        d.map_or(nan, |d| d.kl_yx).into(),
        d.map_or(nan, |d| d.bound_lower).into(),
        d.map_or(nan, |d| d.bound_upper).into(),
        m.throughput.rate_x.into(),
        m.throughput.rate_y.into(),
        m.throughput.deviation_pct.unwrap_or(nan).into(),
    ]
}

/// Everything needed to re-run a command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sidecar {
    pub verb: String,
    pub version: String,
    pub seed: u64,
    pub trials: u64,
    /// Flat key-value configuration, as accepted by `--config`.
    pub config: BTreeMap<String, String>,
    /// Command arguments other than the configuration.
    pub args: BTreeMap<String, String>,
}

impl Sidecar {
    pub fn new(verb: &str, cfg: &super::ScenarioConfig) -> Self {
        Sidecar {
            verb: verb.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: cfg.seed,
            trials: cfg.trials,
            config: cfg.to_map(),
            args: BTreeMap::new(),
        }
    }

    pub fn arg(mut self, k: &str, v: impl ToString) -> Self {
        self.args.insert(k.to_string(), v.to_string());
        self
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    #[serde(flatten)]
    sidecar: &'a Sidecar,
    columns: &'a [String],
    rows: Vec<BTreeMap<&'a str, &'a Cell>>,
}

/// UTC time as `YYYYMMDDTHHMMSSZ`.
pub fn timestamp() -> String {
    chrono::Utc::now().format("%Y%m%dT%H%M%SZ").to_string()
}

/// Writes the table (and, for CSV, the sidecar) under `dir`; returns the paths written.
/// An existing file is never overwritten: a counter is appended to the stem instead.
pub fn write_outputs(dir: &Path, verb: &str, stamp: &str, table: &Table, sidecar: &Sidecar, format: Format) -> Result<Vec<PathBuf>, MonteCarloError> {
    fs::create_dir_all(dir)?;
    let mut stem = format!("{verb}-{stamp}");
    let mut k = 1;
    while dir.join(format!("{stem}.csv")).exists() || dir.join(format!("{stem}.json")).exists() {
        k += 1;
        stem = format!("{verb}-{stamp}-{k}");
    }
    let json_path = dir.join(format!("{stem}.json"));
    match format {
        Format::Csv => {
            let csv_path = dir.join(format!("{stem}.csv"));
            table.write_csv(fs::File::create(&csv_path)?)?;
            fs::write(&json_path, serde_json::to_string_pretty(sidecar)? + "\n")?;
            Ok(vec![csv_path, json_path])
        }
        Format::Json => {
            let rows = table.rows.iter().map(|r| table.columns.iter().map(String::as_str).zip(r.iter()).collect()).collect();
            let doc = JsonReport { sidecar, columns: &table.columns, rows };
            fs::write(&json_path, serde_json::to_string_pretty(&doc)? + "\n")?;
            Ok(vec![json_path])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_and_crlf() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["x,y".into(), 1.5.into()]);
        t.push(vec!["say \"hi\"".into(), f64::INFINITY.into()]);
        assert_eq!(t.to_csv_string().unwrap(), "a,b\r\n\"x,y\",1.5\r\n\"say \"\"hi\"\"\",inf\r\n");
    }

    #[test]
    fn never_overwrites() {
        let dir = tempfile::tempdir().unwrap();
        let t = Table::new(&["a"]);
        let s = Sidecar::new("run", &super::super::ScenarioConfig::preset(super::super::Scenario::S1));
        let a = write_outputs(dir.path(), "run", "T", &t, &s, Format::Csv).unwrap();
        let b = write_outputs(dir.path(), "run", "T", &t, &s, Format::Csv).unwrap();
        assert_ne!(a[0], b[0]);
        assert!(b[0].to_string_lossy().ends_with("run-T-2.csv"));
        let j = write_outputs(dir.path(), "run", "U", &t, &s, Format::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&j[0]).unwrap()).unwrap();
        assert_eq!(v["seed"], 1);
        assert_eq!(v["config"]["scenario"], "s1");
    }
}
