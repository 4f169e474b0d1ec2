//! Regenerates the scenario documents under `fixtures/`.
//!
//! `cargo run --example gen_fixtures`

use std::path::Path;

use dimlab::dimension::MoranSpec;
use dimlab::fixtures;
use dimlab::harness::{Kind, RandomWords, ScenarioDoc, Tolerances};
use dimlab::limsup::DEFAULT_WINDOW_FRACTION;
use dimlab::qtilde::RawMatrix;

fn doc(kind: Kind, q: RawMatrix) -> ScenarioDoc {
    ScenarioDoc {
        kind,
        q,
        p: None,
        spec: None,
        ranks: Vec::new(),
        k_max: None,
        points: Vec::new(),
        words: Vec::new(),
        random_words: None,
        tolerances: Tolerances::default(),
        window_fraction: DEFAULT_WINDOW_FRACTION,
        rank_budget: None,
        seed: None,
        output: None,
    }
}

fn write(dir: &Path, name: &str, d: &ScenarioDoc, pretty: bool) {
    let text = if pretty { serde_json::to_string_pretty(d) } else { serde_json::to_string(d) }.unwrap();
    std::fs::write(dir.join(name), text + "\n").unwrap();
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    std::fs::create_dir_all(&dir).unwrap();
    let binary = fixtures::uniform_binary().to_raw();
    let ternary = fixtures::uniform_ternary().to_raw();
    let thirds = fixtures::constant_binary_p(dimlab::rational::rat(1, 3)).1.to_raw();

    let mut d = doc(Kind::Expand, binary.clone());
    d.points = vec!["0/1".into(), "1/3".into(), "1/2".into()];
    d.ranks = vec![3, 8];
    d.words = vec![vec![1, 0, 1]];
    write(&dir, "expand_binary.json", &d, true);

    let mut d = doc(Kind::Expand, fixtures::mixed().to_raw());
    d.points = vec!["1/2".into(), "7/10".into()];
    d.ranks = vec![2, 6];
    write(&dir, "expand_mixed.json", &d, true);

    let mut d = doc(Kind::Transform, binary.clone());
    d.p = Some(thirds.clone());
    d.words = vec![vec![1], vec![1, 0], vec![1, 1], vec![0, 0]];
    d.points = vec!["1/2".into(), "1/5".into()];
    d.random_words = Some(RandomWords { count: 4, rank: 10 });
    d.seed = Some(7);
    write(&dir, "transform_thirds.json", &d, true);

    let mut d = doc(Kind::Dimension, ternary.clone());
    d.spec = Some(fixtures::cantor_spec());
    d.ranks = (8..=12).collect();
    write(&dir, "dimension_cantor.json", &d, true);

    let mut d = doc(Kind::Dimension, binary.clone());
    d.spec = Some(MoranSpec::full());
    d.ranks = (8..=12).collect();
    write(&dir, "dimension_full_binary.json", &d, true);

    let mut d = doc(Kind::Criteria, binary.clone());
    d.p = Some(thirds);
    d.k_max = Some(100);
    write(&dir, "criteria_thirds.json", &d, true);

    let mut d = doc(Kind::Criteria, binary.clone());
    d.p = Some(fixtures::sparse_spike_raw(10_000));
    d.k_max = Some(10_000);
    write(&dir, "criteria_sparse_spike.json", &d, false);

    let mut d = doc(Kind::Preservation, ternary.clone());
    d.p = Some(ternary);
    d.spec = Some(fixtures::cantor_spec());
    d.ranks = (8..=12).collect();
    d.k_max = Some(100);
    write(&dir, "preservation_cantor_identity.json", &d, true);

    let mut d = doc(Kind::Counterexample, binary);
    d.p = Some(fixtures::sparse_spike_raw(400));
    d.ranks = (2..=12).map(|m| m * m).collect();
    d.k_max = Some(400);
    write(&dir, "counterexample_sparse_spike.json", &d, false);
}
