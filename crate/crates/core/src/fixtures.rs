//! Matrices and digit specs used by the shipped scenarios and the test suites.

use crate::dimension::{DigitSet, MoranSpec};
use crate::qtilde::{PMatrix, ProbColumn, QMatrix, RawMatrix};
use crate::rational::{from_f64, rat, Rational};

pub fn uniform_binary() -> QMatrix {
    QMatrix::s_adic(2)
}

pub fn uniform_ternary() -> QMatrix {
    QMatrix::s_adic(3)
}

/// Prefix `(1/4, 3/4)`, then alternating binary `(1/3, 2/3)` and ternary
/// `(1/5, 1/5, 3/5)` columns.
pub fn mixed() -> QMatrix {
    let col = |v: Vec<Rational>| ProbColumn::strict(v).expect("fixture column is stochastic");
    QMatrix::from_columns(
        vec![col(vec![rat(1, 4), rat(3, 4)])],
        vec![col(vec![rat(1, 3), rat(2, 3)]), col(vec![rat(1, 5), rat(1, 5), rat(3, 5)])],
    )
    .expect("fixture matrix is valid")
}

pub fn cantor_spec() -> MoranSpec {
    MoranSpec::constant(vec![0, 2])
}

/// Spike probability at rank `m²`: the float nearest `e^{−m}`, taken as an exact rational.
pub fn spike_probability(m: u32) -> Rational {
    from_f64((-(m as f64)).exp()).expect("finite")
}

/// The sparse-spike P over uniform binary Q: column `(e^{−m}, 1 − e^{−m})`
/// at ranks `j = m²`, `(1/2, 1/2)` elsewhere. Explicit for `j <= columns`,
/// uniform afterwards.
pub fn sparse_spike_raw(columns: usize) -> RawMatrix {
    let half = vec![rat(1, 2), rat(1, 2)];
    let prefix: Vec<Vec<Rational>> = (1..=columns)
        .map(|j| {
            let m = (j as f64).sqrt().round() as usize;
            if m * m == j {
                let p = spike_probability(m as u32);
                let rest = Rational::from_integer(1.into()) - &p;
                vec![p, rest]
            } else {
                half.clone()
            }
        })
        .collect();
    RawMatrix::from_columns(&prefix, &[half])
}

pub fn sparse_spike(columns: usize) -> (QMatrix, PMatrix) {
    let q = uniform_binary();
    let p = PMatrix::paired(&sparse_spike_raw(columns), &q).expect("fixture is shape-matched");
    (q, p)
}

/// Constant probability column over uniform binary Q.
pub fn constant_binary_p(p0: Rational) -> (QMatrix, PMatrix) {
    let q = uniform_binary();
    let p1 = Rational::from_integer(1.into()) - &p0;
    let raw = RawMatrix::from_columns(&[], &[vec![p0, p1]]);
    let p = PMatrix::paired(&raw, &q).expect("fixture is shape-matched");
    (q, p)
}

/// Digit-uniform Moran specs with known dimension: `(name, matrix, spec, dimension)`.
pub fn digit_uniform_specs() -> Vec<(&'static str, QMatrix, MoranSpec, f64)> {
    vec![
        ("cantor_ternary", uniform_ternary(), cantor_spec(), 2f64.ln() / 3f64.ln()),
        (
            "binary_alternating",
            uniform_binary(),
            MoranSpec { allowed_prefix: vec![], allowed_period: vec![DigitSet::All, DigitSet::only(vec![0])] },
            0.5,
        ),
        ("quinary_even", QMatrix::s_adic(5), MoranSpec::constant(vec![0, 2, 4]), 3f64.ln() / 5f64.ln()),
    ]
}
