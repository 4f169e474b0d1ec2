use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::report::{Check, Report, Results, RunInfo};
use super::scenario::{Kind, Scenario};
use crate::criteria::{counterexample_l, pdp_verdict, CriterionReport, Verdict};
use crate::dimension::{
    box_dimension, enumerate_cylinders, family_dim, moran_dim_oracle, Budget, DimensionEstimate,
    MoranOracle, MoranSpec,
};
use crate::error::{Error, Result};
use crate::limsup::LimsupEstimator;
use crate::measure::{f_xi_cylinder, f_xi_point, local_dim_ratio, mu_cylinder, DEFAULT_POINT_RANK};
use crate::qtilde::{cylinder, expand, ColumnSource, DigitWord, Interval};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionRow {
    #[serde(with = "crate::rational::serde_rational")]
    pub point: Rational,
    pub rank: usize,
    pub word: DigitWord,
    pub cylinder: Interval,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CylinderRow {
    pub word: DigitWord,
    pub cylinder: Interval,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub image: Option<Interval>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rational")]
    pub mu: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub local_dim_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointImage {
    #[serde(with = "crate::rational::serde_rational")]
    pub point: Rational,
    pub image: Interval,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionResults {
    pub family: DimensionEstimate,
    pub enumerated_rank: Option<usize>,
    pub enumerated_cylinders: Option<usize>,
    #[serde(rename = "box")]
    pub box_estimate: Option<DimensionEstimate>,
    /// Oracle partial ratios at the scenario ranks, with their tail estimate.
    pub oracle: Option<MoranOracle>,
    pub oracle_agreement: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleResults {
    pub spec: MoranSpec,
    pub ranks: Vec<usize>,
    pub t_counts: Vec<usize>,
    pub l_under_q: DimensionEstimate,
    pub l_oracle: Option<MoranOracle>,
    pub image_under_p: DimensionEstimate,
    #[serde(with = "crate::rational::serde_extended_f64")]
    pub b_estimate: f64,
    pub bound: f64,
    pub slack: f64,
}

struct Timer(BTreeMap<String, f64>);

impl Timer {
    fn time<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.0.insert(name.to_string(), start.elapsed().as_secs_f64() * 1e3);
        out
    }
}

/// Runs one scenario. Failures never abort the report: whatever was computed
/// before the failure is kept and the error is recorded.
pub fn run_scenario(s: &Scenario, budget: &Budget) -> Report {
    let mut results = Results::default();
    let mut checks = Vec::new();
    let mut timer = Timer(BTreeMap::new());
    let outcome = match s.kind() {
        Kind::Expand => run_expand(s, &mut results),
        Kind::Transform => run_transform(s, &mut results),
        Kind::Dimension => run_dimension(s, budget, &mut results, &mut checks, &mut timer),
        Kind::Criteria => run_criteria(s, &mut results, &mut timer),
        Kind::Preservation => run_preservation(s, budget, &mut results, &mut checks, &mut timer),
        Kind::Counterexample => run_counterexample(s, &mut results, &mut checks, &mut timer),
    };
    let mut error = outcome.err().map(|e| e.to_string());
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    if error.is_none() && !failed.is_empty() {
        error = Some(format!("failed checks: {}", failed.join(", ")));
    }
    Report {
        kind: Some(s.kind()),
        scenario: Some(s.doc.clone()),
        results,
        checks,
        error,
        run_info: RunInfo::now(timer.0),
    }
}

fn sampled_words(s: &Scenario) -> Vec<DigitWord> {
    let mut words: Vec<DigitWord> = s.doc.words.iter().cloned().map(DigitWord::new).collect();
    if let Some(rw) = s.doc.random_words {
        let mut rng = ChaCha8Rng::seed_from_u64(s.doc.seed.unwrap_or(0));
        for _ in 0..rw.count {
            let digits = (1..=rw.rank).map(|j| rng.gen_range(0..s.q.digits(j))).collect();
            words.push(DigitWord::new(digits));
        }
    }
    words
}

fn run_expand(s: &Scenario, out: &mut Results) -> Result<()> {
    let mut rows = Vec::new();
    for x in &s.points {
        for &k in &s.doc.ranks {
            let word = expand(&s.q, x, k)?;
            let c = cylinder(&s.q, &word)?;
            rows.push(ExpansionRow { point: x.clone(), rank: k, word, cylinder: c.interval() });
        }
    }
    out.expansions = Some(rows);
    let mut cyl = Vec::new();
    for w in sampled_words(s) {
        let c = cylinder(&s.q, &w)?;
        cyl.push(CylinderRow { cylinder: c.interval(), word: w, image: None, mu: None, local_dim_ratio: None });
    }
    out.cylinders = Some(cyl);
    Ok(())
}

fn run_transform(s: &Scenario, out: &mut Results) -> Result<()> {
    let p = s.p.as_ref().expect("schema checked");
    let mut rows = Vec::new();
    for w in sampled_words(s) {
        let c = cylinder(&s.q, &w)?;
        let image = f_xi_cylinder(&s.q, p, &w)?;
        let mu = mu_cylinder(p, &w)?;
        let ratio = match local_dim_ratio(&s.q, p, &w) {
            Ok(r) => Some(r),
            Err(Error::ZeroMeasureCylinder | Error::EmptyWord) => None,
            Err(e) => return Err(e),
        };
        rows.push(CylinderRow {
            word: w,
            cylinder: c.interval(),
            image: Some(image.interval()),
            mu: Some(mu),
            local_dim_ratio: ratio,
        });
    }
    out.cylinders = Some(rows);
    let mut images = Vec::new();
    for x in &s.points {
        let iv = f_xi_point(&s.q, p, x, s.doc.tolerances.point, DEFAULT_POINT_RANK)?;
        images.push(PointImage { point: x.clone(), image: iv });
    }
    out.point_images = Some(images);
    Ok(())
}

/// Family estimate, box estimate at the deepest rank, and oracle when `m` is digit-uniform.
fn dimension_of(
    spec: &MoranSpec,
    m: &impl ColumnSource,
    ranks: &[usize],
    est: &LimsupEstimator,
    budget: &Budget,
    oracle_tol: f64,
) -> Result<DimensionResults> {
    let family = family_dim(spec, m, ranks, est)?;
    let deepest = ranks.iter().copied().max().unwrap_or(0);
    let cylinders = enumerate_cylinders(spec, m, deepest, budget)?;
    let box_estimate = if cylinders.is_empty() { None } else { Some(box_dimension(&cylinders, m, est)?) };
    let oracle = oracle_at(spec, m, ranks, est)?;
    let oracle_agreement = oracle.as_ref().map(|o| (o.estimate - family.estimate).abs() <= oracle_tol);
    Ok(DimensionResults {
        family,
        enumerated_rank: Some(deepest),
        enumerated_cylinders: Some(cylinders.len()),
        box_estimate,
        oracle,
        oracle_agreement,
    })
}

fn run_dimension(
    s: &Scenario,
    budget: &Budget,
    out: &mut Results,
    checks: &mut Vec<Check>,
    timer: &mut Timer,
) -> Result<()> {
    let spec = s.doc.spec.as_ref().expect("schema checked");
    let tol = s.doc.tolerances;
    let d = timer.time("dimension", || dimension_of(spec, &s.q, &s.doc.ranks, &s.estimator, budget, tol.oracle))?;
    if let Some(agree) = d.oracle_agreement {
        checks.push(Check::new("oracle_agreement", agree, format!("tolerance {}", tol.oracle)));
    }
    if let Some(b) = &d.box_estimate {
        let gap = (b.estimate - d.family.estimate).abs();
        checks.push(Check::new(
            "box_family_consistency",
            gap <= tol.dimension,
            format!("|box - family| = {gap:.6}, tolerance {}", tol.dimension),
        ));
    }
    out.dimension = Some(d);
    Ok(())
}

fn run_criteria(s: &Scenario, out: &mut Results, timer: &mut Timer) -> Result<()> {
    let p = s.p.as_ref().expect("schema checked");
    let report =
        timer.time("criteria", || pdp_verdict(&s.q, p, s.k_max(), s.doc.tolerances.verdict, &s.estimator))?;
    out.verdict = Some(report.verdict);
    out.criteria = Some(report);
    Ok(())
}

fn run_preservation(
    s: &Scenario,
    budget: &Budget,
    out: &mut Results,
    checks: &mut Vec<Check>,
    timer: &mut Timer,
) -> Result<()> {
    let p = s.p.as_ref().expect("schema checked");
    let spec = s.doc.spec.as_ref().expect("schema checked");
    let tol = s.doc.tolerances;
    let report = timer.time("criteria", || pdp_verdict(&s.q, p, s.k_max(), tol.verdict, &s.estimator))?;
    out.verdict = Some(report.verdict);
    out.criteria = Some(report.clone());
    let source = timer.time("dimension", || dimension_of(spec, &s.q, &s.doc.ranks, &s.estimator, budget, tol.oracle))?;
    out.dimension = Some(source.clone());
    let image = timer.time("image_dimension", || dimension_of(spec, p, &s.doc.ranks, &s.estimator, budget, tol.oracle))?;
    out.image_dimension = Some(image.clone());
    if report.verdict == Verdict::Pdp {
        let gap = (source.family.estimate - image.family.estimate).abs();
        checks.push(Check::new(
            "preservation_family",
            gap <= tol.dimension,
            format!("|dim E - dim F(E)| = {gap:.6}, tolerance {}", tol.dimension),
        ));
        if let (Some(a), Some(b)) = (&source.box_estimate, &image.box_estimate) {
            let gap = (a.estimate - b.estimate).abs();
            checks.push(Check::new(
                "preservation_box",
                gap <= tol.dimension,
                format!("|box E - box F(E)| = {gap:.6}, tolerance {}", tol.dimension),
            ));
        }
    }
    Ok(())
}

/// Default sampling ranks: members of `T`, where the `B` partials peak.
fn peak_ranks(report: &CriterionReport) -> Vec<usize> {
    report.t_members.clone()
}

fn run_counterexample(s: &Scenario, out: &mut Results, checks: &mut Vec<Check>, timer: &mut Timer) -> Result<()> {
    let p = s.p.as_ref().expect("schema checked");
    let tol = s.doc.tolerances;
    let report = timer.time("criteria", || pdp_verdict(&s.q, p, s.k_max(), tol.verdict, &s.estimator))?;
    out.verdict = Some(report.verdict);
    let ranks = if s.doc.ranks.is_empty() { peak_ranks(&report) } else { s.doc.ranks.clone() };
    out.criteria = Some(report.clone());
    let deepest = ranks.iter().copied().max().unwrap_or(0);
    let spec = counterexample_l(&s.q, p, deepest);
    let t_counts = ranks.iter().map(|&k| spec.forced_ranks(&s.q, k).len()).collect();

    let (l_under_q, image_under_p) = timer.time("family", || -> Result<_> {
        Ok((family_dim(&spec, &s.q, &ranks, &s.estimator)?, family_dim(&spec, p, &ranks, &s.estimator)?))
    })?;
    let l_oracle = oracle_at(&spec, &s.q, &ranks, &s.estimator)?;
    let b = report.big_b_estimate;
    let bound = 1.0 / (1.0 + b);
    checks.push(Check::new(
        "image_bound",
        image_under_p.estimate <= bound + tol.counterexample,
        format!(
            "dim F(L) = {:.6} <= 1/(1+B) + slack = {:.6} + {}",
            image_under_p.estimate, bound, tol.counterexample
        ),
    ));
    out.counterexample = Some(CounterexampleResults {
        spec,
        ranks,
        t_counts,
        l_under_q,
        l_oracle,
        image_under_p,
        b_estimate: b,
        bound,
        slack: tol.counterexample,
    });
    Ok(())
}

/// Oracle partials at `ranks`, or `None` when `m` is not digit-uniform.
fn oracle_at(
    spec: &MoranSpec,
    m: &impl ColumnSource,
    ranks: &[usize],
    est: &LimsupEstimator,
) -> Result<Option<MoranOracle>> {
    if !m.distinct_columns().iter().all(|c| c.is_uniform()) {
        return Ok(None);
    }
    let deepest = ranks.iter().copied().max().unwrap_or(1);
    let full = moran_dim_oracle(spec, m, deepest, est)?;
    let partials: Vec<f64> = ranks.iter().map(|&k| full.partials[k - 1]).collect();
    let estimate = est.estimate(&partials).unwrap_or(0.0);
    Ok(Some(MoranOracle { partials, estimate }))
}

mod opt_rational {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::rational::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_str(&format_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| parse_rational(&t).map_err(serde::de::Error::custom))
            .transpose()
    }
}
