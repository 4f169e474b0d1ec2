//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dimlab::criteria::{counterexample_l, entropy_terms, li_ratio, pdp_verdict, sparse_t_and_b, Verdict};
use dimlab::dimension::{
    box_dimension, enumerate_cylinders, family_dim, moran_dim_oracle, packing_premeasure, premeasure_ordering_check,
    separation_levels, Budget, MoranSpec, PackingMode,
};
use dimlab::fixtures;
use dimlab::harness::{load_scenario, run_scenario};
use dimlab::measure::{f_xi_cylinder, mu_cylinder};
use dimlab::qtilde::{cylinder, expand, joint_horizon, ColumnSource, DigitWord, PMatrix, QMatrix};
use dimlab::rational::{rat, Rational};
use dimlab::LimsupEstimator;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn est() -> LimsupEstimator {
    LimsupEstimator::default()
}

fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn q_fixtures() -> Vec<(&'static str, QMatrix)> {
    vec![
        ("uniform_binary", fixtures::uniform_binary()),
        ("uniform_ternary", fixtures::uniform_ternary()),
        ("mixed", fixtures::mixed()),
    ]
}

fn cylinder_algebra() -> Outcome {
    let mut checked = 0usize;
    for (name, q) in q_fixtures() {
        for k in 0..=8 {
            let words = common::all_words(&q, k);
            let cyl: Vec<_> = words.iter().map(|w| cylinder(&q, w).unwrap()).collect();
            let mut sorted = cyl.clone();
            sorted.sort_by(|a, b| a.left.cmp(&b.left));
            ensure(sorted[0].left.is_zero() && sorted.last().unwrap().right.is_one(), || format!("{name} rank {k}: ends"))?;
            ensure(sorted.windows(2).all(|p| p[0].right == p[1].left), || format!("{name} rank {k}: tiling"))?;
            for (w, c) in words.iter().zip(&cyl) {
                let product = w.digits().iter().enumerate().fold(Rational::one(), |a, (i, &d)| a * q.column(i + 1).entry(d));
                ensure(c.length() == product, || format!("{name} {w}: length law"))?;
                if k < 8 {
                    let kids: Vec<_> = (0..q.digits(k + 1)).map(|a| cylinder(&q, &w.extended(a)).unwrap()).collect();
                    ensure(
                        kids[0].left == c.left
                            && kids.last().unwrap().right == c.right
                            && kids.windows(2).all(|p| p[0].right == p[1].left),
                        || format!("{name} {w}: nesting"),
                    )?;
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} cylinders exact"))
}

fn mixed_pair() -> (QMatrix, PMatrix) {
    let q = fixtures::mixed();
    let raw = dimlab::qtilde::RawMatrix::from_columns(
        &[vec![rat(1, 2), rat(1, 2)]],
        &[vec![rat(1, 4), rat(3, 4)], vec![rat(1, 2), rat(1, 4), rat(1, 4)]],
    );
    let p = PMatrix::paired(&raw, &q).unwrap();
    (q, p)
}

fn transform_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (q, p) = mixed_pair();
    let id = PMatrix::identity(&q);
    let mut words = Vec::new();
    for _ in 0..1000 {
        let w = common::random_word(&q, rng.gen_range(0..=24), &mut rng);
        let img = f_xi_cylinder(&q, &p, &w).unwrap();
        ensure(img.length() == mu_cylinder(&p, &w).unwrap(), || format!("{w}: image length"))?;
        ensure(f_xi_cylinder(&q, &id, &w).unwrap() == cylinder(&q, &w).unwrap(), || format!("{w}: identity"))?;
        words.push(w);
    }
    let den = 1u64 << 40;
    for _ in 0..10_000 {
        let (a, b) = (rng.gen_range(0..den), rng.gen_range(0..den));
        if a == b {
            continue;
        }
        let x = Rational::new(a.min(b).into(), den.into());
        let y = Rational::new(a.max(b).into(), den.into());
        let (wx, wy) = (expand(&q, &x, 48).unwrap(), expand(&q, &y, 48).unwrap());
        let split = (0..48).find(|&i| wx.digits()[i] != wy.digits()[i]).unwrap();
        let cx = f_xi_cylinder(&q, &p, &DigitWord::new(wx.digits()[..=split].to_vec())).unwrap();
        let cy = f_xi_cylinder(&q, &p, &DigitWord::new(wy.digits()[..=split].to_vec())).unwrap();
        ensure(cx.right <= cy.left, || format!("monotonicity at {x} < {y}"))?;
    }
    Ok(format!("{} words, 10000 pairs", words.len()))
}

fn calibration() -> Outcome {
    let target = 2f64.ln() / 3f64.ln();
    let t = fixtures::uniform_ternary();
    let spec = fixtures::cantor_spec();
    let mut worst = 0.0f64;
    for k in 8..=12 {
        let cyl = enumerate_cylinders(&spec, &t, k, &Budget::default()).unwrap();
        let bx = box_dimension(&cyl, &t, &est()).unwrap().estimate;
        let ranks: Vec<usize> = (1..=k).collect();
        let fam = family_dim(&spec, &t, &ranks, &est()).unwrap().estimate;
        worst = worst.max((bx - target).abs()).max((fam - target).abs());
    }
    ensure(worst <= 0.02, || format!("Cantor deviation {worst:.4} > 0.02"))?;
    let q = fixtures::uniform_binary();
    let cyl = enumerate_cylinders(&MoranSpec::full(), &q, 12, &Budget::default()).unwrap();
    let full = box_dimension(&cyl, &q, &est()).unwrap().estimate;
    let ranks: Vec<usize> = (1..=12).collect();
    let full_fam = family_dim(&MoranSpec::full(), &q, &ranks, &est()).unwrap().estimate;
    ensure((full - 1.0).abs() <= 0.01 && (full_fam - 1.0).abs() <= 0.01, || format!("full interval {full:.4}"))?;
    Ok(format!("Cantor max deviation {worst:.5}, full interval {full:.5}"))
}

fn faithfulness() -> Outcome {
    let cap = BigUint::from(1u32 << 14);
    let mut parts = Vec::new();
    for (name, m, spec, _) in fixtures::digit_uniform_specs() {
        ensure(m.q_min() > &Rational::zero(), || format!("{name}: q_min"))?;
        let k = (1..64).take_while(|&k| spec.cylinder_count(&m, k) <= cap).last().unwrap();
        let cyl = enumerate_cylinders(&spec, &m, k, &Budget::default()).unwrap();
        let bx = box_dimension(&cyl, &m, &est()).unwrap().estimate;
        let ranks: Vec<usize> = (1..=k).collect();
        let fam = family_dim(&spec, &m, &ranks, &est()).unwrap().estimate;
        ensure((fam - bx).abs() <= 0.03, || format!("{name}: |family {fam:.4} - box {bx:.4}| > 0.03"))?;
        ensure(fam <= bx + 0.02, || format!("{name}: family {fam:.4} > box {bx:.4} + 0.02"))?;
        parts.push(format!("{name} {fam:.4}/{bx:.4}"));
    }
    Ok(parts.join(", "))
}

fn criterion_engine() -> Outcome {
    let (q, p) = fixtures::sparse_spike(10_000);
    let r = pdp_verdict(&q, &p, 10_000, 0.05, &est()).map_err(|e| e.to_string())?;
    let oracle: f64 = (2..=20).map(|m: i32| -((-(m as f64)).exp()).ln()).sum::<f64>() / 400.0;
    let b400 = r.big_b_partials[399];
    ensure((b400 - oracle).abs() < 1e-9, || format!("B_partial[400] {b400} vs summation {oracle}"))?;
    ensure((b400 - 0.5225).abs() <= 0.01, || format!("B_partial[400] {b400:.4}"))?;
    ensure((r.big_b_estimate - 0.5).abs() <= 0.05, || format!("B estimate {:.4}", r.big_b_estimate))?;
    ensure(r.li_estimate >= 0.98, || format!("Li estimate {:.4} < 0.98", r.li_estimate))?;
    ensure(r.verdict == Verdict::NotPdpBPositive, || format!("verdict {:?}", r.verdict))?;
    Ok(format!("B[400]={b400:.4} B={:.4} Li={:.4} at k_max=10000", r.big_b_estimate, r.li_estimate))
}

fn counterexample_pipeline() -> Outcome {
    let (q, p) = fixtures::sparse_spike(400);
    for (k, expected) in [(4usize, 3.0 / 4.0), (9, 7.0 / 9.0), (16, 13.0 / 16.0)] {
        let l = counterexample_l(&q, &p, k);
        let t = sparse_t_and_b(&q, &p, k, &est());
        let oracle = moran_dim_oracle(&l, &q, k, &est()).unwrap();
        let formula = 1.0 - t.members.len() as f64 / k as f64;
        ensure((oracle.partials[k - 1] - formula).abs() < 1e-12, || format!("rank {k}: oracle vs 1-|T_k|/k"))?;
        ensure((formula - expected).abs() < 1e-12, || format!("rank {k}: 1-|T_k|/k = {formula}"))?;
    }
    let ranks: Vec<usize> = (1..=12).map(|m| m * m).collect();
    let l = counterexample_l(&q, &p, 144);
    let image = family_dim(&l, &p, &ranks, &est()).unwrap().estimate;
    let b = sparse_t_and_b(&q, &p, 400, &est()).estimate;
    let bound = 1.0 / (1.0 + b) + 0.08;
    ensure(image <= bound, || format!("dim F(L) {image:.4} > {bound:.4}"))?;
    let report = run_scenario(&load_scenario(fixture_path("counterexample_sparse_spike.json")).unwrap(), &Budget::default());
    ensure(report.error.is_none(), || format!("fixture run: {:?}", report.error))?;
    Ok(format!("dim F(L)={image:.4} <= 1/(1+B)+0.08={bound:.4}"))
}

fn positive_case() -> Outcome {
    let mut qs = q_fixtures();
    qs.push(("sparse_spike_q", fixtures::sparse_spike(16).0));
    for (name, q) in &qs {
        let p = PMatrix::identity(q);
        let r = pdp_verdict(q, &p, 200, 0.05, &est()).unwrap();
        ensure(r.big_b_estimate == 0.0 && r.big_b_partials.iter().all(|&b| b == 0.0), || format!("{name}: B"))?;
        ensure(r.li_ratio_partials.iter().all(|&x| x == 1.0), || format!("{name}: Li"))?;
        ensure(r.verdict == Verdict::Pdp, || format!("{name}: verdict {:?}", r.verdict))?;
    }
    let report = run_scenario(&load_scenario(fixture_path("preservation_cantor_identity.json")).unwrap(), &Budget::default());
    ensure(report.error.is_none(), || format!("preservation run: {:?}", report.error))?;
    let e = report.results.dimension.as_ref().unwrap().family.estimate;
    let fe = report.results.image_dimension.as_ref().unwrap().family.estimate;
    ensure((e - fe).abs() <= 0.01, || format!("dim E {e:.4} vs dim F(E) {fe:.4}"))?;
    Ok(format!("{} matrices PDP, Cantor gap {:.2e}", qs.len(), (e - fe).abs()))
}

fn packing_ordering() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let eps = rat(1, 4);
    for _ in 0..100 {
        let mut raw: Vec<i64> = Vec::new();
        while raw.len() < 20 {
            let v = rng.gen_range(0..1 << 12);
            if !raw.contains(&v) {
                raw.push(v);
            }
        }
        let pts: Vec<Rational> = raw.into_iter().map(|v| rat(v, 1 << 12)).collect();
        let t = separation_levels(&pts, &eps);
        premeasure_ordering_check(&pts, 0.5, &eps, t).map_err(|e| e.to_string())?;
    }
    let mut midpoint_sets = 0;
    for (name, q) in q_fixtures() {
        let cyl = enumerate_cylinders(&MoranSpec::full(), &q, 4, &Budget::default()).unwrap();
        let mids: Vec<Rational> = cyl.iter().map(|c| (&c.left + &c.right) / rat(2, 1)).collect();
        let t = separation_levels(&mids, &eps);
        premeasure_ordering_check(&mids, 0.7, &eps, t).map_err(|e| format!("{name}: {e}"))?;
        midpoint_sets += 1;
    }
    let half = rat(1, 2);
    for trial in 0..40 {
        let units = common::lattice_set(&mut rng, 1 + trial % 8);
        let pts = common::to_rationals(&units);
        let dp = packing_premeasure(&pts, 0.0, &half, 3, PackingMode::Centered).unwrap().value;
        let bf = common::brute_force(&units, &units, 0.0, 3, PackingMode::Centered);
        ensure(dp == bf, || format!("{pts:?}: dp {dp} vs exhaustive {bf}"))?;
    }
    Ok(format!("100 random sets, {midpoint_sets} midpoint sets, 40 exhaustive checks"))
}

fn gibbs() -> Outcome {
    let mut pairs: Vec<(String, QMatrix, PMatrix)> = Vec::new();
    for (name, q) in q_fixtures() {
        pairs.push((format!("{name}/identity"), q.clone(), PMatrix::identity(&q)));
    }
    let (q, p) = mixed_pair();
    pairs.push(("mixed/skewed".into(), q, p));
    let (q, p) = fixtures::constant_binary_p(rat(1, 3));
    pairs.push(("binary/thirds".into(), q, p));
    let (q, p) = fixtures::sparse_spike(400);
    pairs.push(("sparse_spike".into(), q, p));
    let mut columns = 0;
    for (name, q, p) in &pairs {
        for j in 1..=joint_horizon(q, p) {
            let (h, b) = entropy_terms(q, p, j);
            let same = q.column(j) == p.column(j);
            ensure(h <= b, || format!("{name} column {j}: h {h} > b {b}"))?;
            ensure(same == (h == b), || format!("{name} column {j}: equality iff coincide"))?;
            columns += 1;
        }
    }
    let li = li_ratio(&fixtures::uniform_binary(), &PMatrix::identity(&fixtures::uniform_binary()), 10, &est()).unwrap();
    ensure(li.estimate == 1.0, || "identity ratio".into())?;
    Ok(format!("{columns} columns over {} pairs", pairs.len()))
}

fn main() -> ExitCode {
    let suite: [(u32, &str, fn() -> Outcome, Option<Duration>); 9] = [
        (1, "exact cylinder algebra", cylinder_algebra, Some(Duration::from_secs(5))),
        (2, "transform correctness", transform_correctness, Some(Duration::from_secs(10))),
        (3, "dimension estimator calibration", calibration, Some(Duration::from_secs(30))),
        (4, "family vs box faithfulness", faithfulness, None),
        (5, "criterion engine on sparse spike", criterion_engine, Some(Duration::from_secs(5))),
        (6, "counterexample pipeline", counterexample_pipeline, Some(Duration::from_secs(120))),
        (7, "positive PDP case", positive_case, None),
        (8, "packing premeasure ordering", packing_ordering, None),
        (9, "Gibbs inequality", gibbs, None),
    ];
    let mut failed = 0;
    for (id, title, run, limit) in suite {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if elapsed > l => Err(format!("took {:.2}s, limit {}s", elapsed.as_secs_f64(), l.as_secs())),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("criterion {id} PASS  {title}: {detail} ({:.2}s)", elapsed.as_secs_f64()),
            Err(detail) => {
                failed += 1;
                println!("criterion {id} FAIL  {title}: {detail} ({:.2}s)", elapsed.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
