use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::run::{CounterexampleResults, CylinderRow, DimensionResults, ExpansionRow, PointImage};
use super::scenario::{Kind, ScenarioDoc};
use crate::criteria::{CriterionReport, Verdict};
use crate::dimension::{DimensionEstimate, ScaleSample};
use crate::error::{Error, Result};
use crate::rational::ln_rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(Error::InvalidParameter(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: String) -> Self {
        Self { name: name.to_string(), passed, detail }
    }
}

/// The only nondeterministic part of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunInfo {
    pub timestamp_unix: u64,
    pub timings_ms: BTreeMap<String, f64>,
}

impl RunInfo {
    pub fn now(timings_ms: BTreeMap<String, f64>) -> Self {
        let timestamp_unix = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        Self { timestamp_unix, timings_ms }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Results {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expansions: Option<Vec<ExpansionRow>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cylinders: Option<Vec<CylinderRow>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point_images: Option<Vec<PointImage>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<DimensionResults>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image_dimension: Option<DimensionResults>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criteria: Option<CriterionReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleResults>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub kind: Option<Kind>,
    pub scenario: Option<ScenarioDoc>,
    pub results: Results,
    pub checks: Vec<Check>,
    pub error: Option<String>,
    pub run_info: RunInfo,
}

impl Report {
    /// A report for a run that failed before any scenario could be loaded.
    pub fn failure(kind: Option<Kind>, err: &Error) -> Self {
        Self {
            kind,
            scenario: None,
            results: Results::default(),
            checks: Vec::new(),
            error: Some(err.to_string()),
            run_info: RunInfo::now(BTreeMap::new()),
        }
    }

    pub fn is_error(&self) -> bool {
        self.error.is_some()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Every dimension estimate in the report, keyed by a stable table name.
    pub fn estimates(&self) -> Vec<(String, &DimensionEstimate)> {
        let mut out = Vec::new();
        for (prefix, d) in [("", &self.results.dimension), ("image_", &self.results.image_dimension)] {
            if let Some(d) = d {
                out.push((format!("{prefix}family"), &d.family));
                if let Some(b) = &d.box_estimate {
                    out.push((format!("{prefix}box"), b));
                }
            }
        }
        if let Some(c) = &self.results.counterexample {
            out.push(("l_family".into(), &c.l_under_q));
            out.push(("l_image_family".into(), &c.image_under_p));
        }
        out
    }
}

fn write_scale_csv(path: &Path, samples: &[ScaleSample]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["scale_num", "scale_den", "count", "log_ratio"])?;
    for s in samples {
        w.write_record([
            s.scale.numer().to_string(),
            s.scale.denom().to_string(),
            s.count.to_string(),
            s.log_ratio.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn extended(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        x.to_string()
    }
}

fn write_criteria_csv(path: &Path, c: &CriterionReport) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["k", "h_partial", "b_partial", "li_ratio", "B_partial", "in_T"])?;
    for k in 1..=c.k_max {
        w.write_record([
            k.to_string(),
            c.h_partials[k - 1].to_string(),
            c.b_partials[k - 1].to_string(),
            c.li_ratio_partials[k - 1].to_string(),
            extended(c.big_b_partials[k - 1]),
            c.in_t(k).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `report.json` into `dir`, plus one CSV per table for [`OutputFormat::Csv`].
pub fn emit_report(r: &Report, dir: &Path, format: OutputFormat) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let master = dir.join("report.json");
    std::fs::write(&master, r.to_json()?)?;
    written.push(master);
    if format == OutputFormat::Csv {
        for (name, est) in r.estimates() {
            let path = dir.join(format!("{name}_samples.csv"));
            write_scale_csv(&path, &est.samples)?;
            written.push(path);
        }
        if let Some(c) = &r.results.criteria {
            let path = dir.join("criteria.csv");
            write_criteria_csv(&path, c)?;
            written.push(path);
        }
    }
    Ok(written)
}

fn write_series(path: &Path, rows: impl IntoIterator<Item = (String, String)>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for (x, y) in rows {
        writeln!(w, "{x} {y}")?;
    }
    w.flush()?;
    Ok(())
}

/// Two-column whitespace-separated series: `ln(1/δ) log_ratio` per dimension
/// estimate, and `k value` for the criterion partials.
pub fn emit_plot_data(r: &Report, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (name, est) in r.estimates() {
        let path = dir.join(format!("{name}_log_ratio.dat"));
        let rows = est
            .samples
            .iter()
            .filter(|s| s.scale > crate::rational::Rational::from_integer(0.into()))
            .map(|s| ((-ln_rational(&s.scale)).to_string(), s.log_ratio.to_string()));
        write_series(&path, rows)?;
        written.push(path);
    }
    if let Some(c) = &r.results.criteria {
        let path = dir.join("B_partial.dat");
        write_series(&path, c.big_b_partials.iter().enumerate().map(|(i, &b)| ((i + 1).to_string(), extended(b))))?;
        written.push(path);
        let path = dir.join("li_ratio.dat");
        write_series(&path, c.li_ratio_partials.iter().enumerate().map(|(i, &x)| ((i + 1).to_string(), x.to_string())))?;
        written.push(path);
    }
    Ok(written)
}
