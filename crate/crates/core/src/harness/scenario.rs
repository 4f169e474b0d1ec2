use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dimension::MoranSpec;
use crate::error::{Error, Result};
use crate::limsup::{LimsupEstimator, DEFAULT_WINDOW_FRACTION};
use crate::qtilde::{validate_matrix, PMatrix, QMatrix, RawMatrix};
use crate::rational::{parse_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Expand,
    Transform,
    Dimension,
    Criteria,
    Preservation,
    Counterexample,
}

impl Kind {
    pub const ALL: [Kind; 6] =
        [Kind::Expand, Kind::Transform, Kind::Dimension, Kind::Criteria, Kind::Preservation, Kind::Counterexample];

    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Expand => "expand",
            Kind::Transform => "transform",
            Kind::Dimension => "dimension",
            Kind::Criteria => "criteria",
            Kind::Preservation => "preservation",
            Kind::Counterexample => "counterexample",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Kind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Schema(format!("unknown scenario kind {s:?}")))
    }
}

/// Tolerance defaults: dimension 0.03, verdict band 0.05, counterexample slack 0.08.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub dimension: f64,
    pub verdict: f64,
    pub counterexample: f64,
    pub oracle: f64,
    /// Width of pointwise F_ξ enclosures.
    pub point: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { dimension: 0.03, verdict: 0.05, counterexample: 0.08, oracle: 0.01, point: 1e-6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomWords {
    pub count: usize,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputSpec {
    pub dir: Option<String>,
    pub format: Option<String>,
}

/// The scenario document as written on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub kind: Kind,
    #[serde(rename = "Q")]
    pub q: RawMatrix,
    #[serde(rename = "P", default, skip_serializing_if = "Option::is_none")]
    pub p: Option<RawMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<MoranSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ranks: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub words: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_words: Option<RandomWords>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default = "default_window")]
    pub window_fraction: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_budget: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
}

fn default_window() -> f64 {
    DEFAULT_WINDOW_FRACTION
}

/// A validated scenario: matrices checked, kind-specific fields present.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub doc: ScenarioDoc,
    pub q: QMatrix,
    pub p: Option<PMatrix>,
    pub points: Vec<Rational>,
    pub estimator: LimsupEstimator,
}

impl Scenario {
    pub fn from_doc(doc: ScenarioDoc) -> Result<Self> {
        let q = validate_matrix(&doc.q)?;
        let p = doc.p.as_ref().map(|raw| PMatrix::paired(raw, &q)).transpose()?;
        let points = doc.points.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        let estimator = LimsupEstimator::new(doc.window_fraction)?;
        if let Some(spec) = &doc.spec {
            spec.validate(&q)?;
        }
        let s = Self { doc, q, p, points, estimator };
        s.check_schema()?;
        Ok(s)
    }

    fn check_schema(&self) -> Result<()> {
        let d = &self.doc;
        let need = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::Schema(format!("{} scenario requires {what}", d.kind)))
            }
        };
        if d.ranks.iter().any(|&k| k == 0) {
            return Err(Error::Schema("ranks must be positive".into()));
        }
        match d.kind {
            Kind::Expand => need(
                (!d.points.is_empty() && !d.ranks.is_empty()) || !d.words.is_empty() || d.random_words.is_some(),
                "points with ranks, words, or random_words",
            ),
            Kind::Transform => {
                need(self.p.is_some(), "P")?;
                need(!d.points.is_empty() || !d.words.is_empty() || d.random_words.is_some(), "points or words")
            }
            Kind::Dimension => {
                need(d.spec.is_some(), "spec")?;
                need(!d.ranks.is_empty(), "ranks")
            }
            Kind::Criteria => {
                need(self.p.is_some(), "P")?;
                need(d.k_max.is_some_and(|k| k > 0), "a positive k_max")
            }
            Kind::Preservation => {
                need(self.p.is_some(), "P")?;
                need(d.spec.is_some(), "spec")?;
                need(!d.ranks.is_empty(), "ranks")
            }
            Kind::Counterexample => {
                need(self.p.is_some(), "P")?;
                need(d.k_max.is_some_and(|k| k > 0) || !d.ranks.is_empty(), "k_max or ranks")
            }
        }
    }

    pub fn kind(&self) -> Kind {
        self.doc.kind
    }

    /// `k_max` for criteria, defaulting to the largest rank.
    pub fn k_max(&self) -> usize {
        self.doc.k_max.unwrap_or_else(|| self.doc.ranks.iter().copied().max().unwrap_or(1))
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let doc: ScenarioDoc = serde_json::from_str(s).map_err(|e| {
            if e.is_data() {
                Error::Schema(e.to_string())
            } else {
                Error::Parse(e.to_string())
            }
        })?;
        Scenario::from_doc(doc)
    }
}

/// Reads, parses and validates a scenario document.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    text.parse()
}
