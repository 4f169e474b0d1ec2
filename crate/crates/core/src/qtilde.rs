//! Q̃-numeration systems: stochastic column matrices, digit words and the
//! cylinder intervals they address.
//!
//! A matrix is described by a finite prefix of columns followed by a
//! periodic tail, so `column(j)` is defined for every rank `j >= 1`.
//! Points that are cylinder endpoints follow the left-closed convention:
//! `x` belongs to the cylinder whose left endpoint it is.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, is_unit_interval_point, parse_rational, Rational};

/// One column of a stochastic matrix: the relative lengths of the `n_j`
/// subintervals at rank `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbColumn {
    entries: Vec<Rational>,
}

/// Entry range accepted by a column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EntryRule {
    /// Interior of the unit interval, used for Q.
    Open,
    /// Closed unit interval, used for probability matrices.
    Closed,
}

impl ProbColumn {
    fn build(entries: Vec<Rational>, column: usize, rule: EntryRule) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::TooFewDigits { column, len: entries.len() });
        }
        for (index, e) in entries.iter().enumerate() {
            let ok = match rule {
                EntryRule::Open => e.is_positive() && e < &Rational::one(),
                EntryRule::Closed => !e.is_negative() && e <= &Rational::one(),
            };
            if !ok {
                return Err(Error::NonPositiveEntry { column, index, value: format_rational(e) });
            }
        }
        let sum: Rational = entries.iter().sum();
        if !sum.is_one() {
            return Err(Error::ColumnNotStochastic { column, sum: format_rational(&sum) });
        }
        Ok(Self { entries })
    }

    /// A column with every entry in (0, 1) summing to exactly 1.
    pub fn strict(entries: Vec<Rational>) -> Result<Self> {
        Self::build(entries, 0, EntryRule::Open)
    }

    /// A probability column: entries in [0, 1], zeros allowed.
    pub fn probability(entries: Vec<Rational>) -> Result<Self> {
        Self::build(entries, 0, EntryRule::Closed)
    }

    /// The uniform column with `n` entries `1/n`.
    pub fn uniform(n: usize) -> Self {
        assert!(n >= 2, "a column needs at least two digits");
        let e = Rational::new(1.into(), (n as i64).into());
        Self { entries: vec![e; n] }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &Rational {
        &self.entries[i]
    }

    /// `Σ_{i<digit} q_i`, the offset of subinterval `digit` inside its parent.
    pub fn offset(&self, digit: usize) -> Rational {
        self.entries[..digit].iter().sum()
    }

    pub fn min_entry(&self) -> &Rational {
        self.entries.iter().min().expect("column is nonempty")
    }

    /// Smallest digit attaining the minimal entry.
    pub fn argmin(&self) -> usize {
        let m = self.min_entry();
        self.entries.iter().position(|e| e == m).expect("minimum is attained")
    }

    pub fn is_uniform(&self) -> bool {
        self.entries.windows(2).all(|w| w[0] == w[1])
    }
}

/// Anything that yields a probability column for every rank `j >= 1`.
pub trait ColumnSource {
    fn column(&self, j: usize) -> &ProbColumn;

    /// Columns that together determine every rank: prefix then one period.
    fn distinct_columns(&self) -> Vec<&ProbColumn>;

    /// Number of ranks after which the columns repeat with period [`Self::period_len`].
    fn prefix_len(&self) -> usize;

    fn period_len(&self) -> usize;

    fn digits(&self, j: usize) -> usize {
        self.column(j).len()
    }
}

/// The raw finite-description used by the interchange format: a column
/// prefix plus a nonempty periodic tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnTable {
    prefix: Vec<ProbColumn>,
    period: Vec<ProbColumn>,
}

impl ColumnTable {
    fn build(raw: &RawMatrix, rule: EntryRule) -> Result<Self> {
        if raw.period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        let mut cols = Vec::with_capacity(raw.prefix.len() + raw.period.len());
        for (idx, column) in raw.prefix.iter().chain(raw.period.iter()).enumerate() {
            let entries = column
                .iter()
                .map(|s| parse_rational(s))
                .collect::<Result<Vec<_>>>()?;
            let col = ProbColumn::build(entries, idx + 1, rule)?;
            cols.push(col);
        }
        let period = cols.split_off(raw.prefix.len());
        Ok(Self { prefix: cols, period })
    }

    fn column(&self, j: usize) -> &ProbColumn {
        assert!(j >= 1, "ranks start at 1");
        let m = self.prefix.len();
        if j <= m {
            &self.prefix[j - 1]
        } else {
            &self.period[(j - m - 1) % self.period.len()]
        }
    }

    fn to_raw(&self) -> RawMatrix {
        let conv = |c: &ProbColumn| c.entries.iter().map(format_rational).collect();
        RawMatrix {
            prefix: self.prefix.iter().map(conv).collect(),
            period: self.period.iter().map(conv).collect(),
        }
    }
}

/// Interchange form: `{"prefix": [["1/2","1/2"], ...], "period": [["1/3","1/3","1/3"]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawMatrix {
    #[serde(default)]
    pub prefix: Vec<Vec<String>>,
    pub period: Vec<Vec<String>>,
}

impl RawMatrix {
    pub fn from_columns(prefix: &[Vec<Rational>], period: &[Vec<Rational>]) -> Self {
        let conv = |c: &Vec<Rational>| c.iter().map(format_rational).collect();
        Self {
            prefix: prefix.iter().map(conv).collect(),
            period: period.iter().map(conv).collect(),
        }
    }
}

/// A validated Q̃ matrix: every entry in (0, 1), every column summing to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    table: ColumnTable,
    q_min: Rational,
}

/// Validates raw columns into a [`QMatrix`].
pub fn validate_matrix(raw: &RawMatrix) -> Result<QMatrix> {
    let table = ColumnTable::build(raw, EntryRule::Open)?;
    let q_min = table
        .prefix
        .iter()
        .chain(table.period.iter())
        .map(|c| c.min_entry().clone())
        .min()
        .expect("period is nonempty");
    Ok(QMatrix { table, q_min })
}

impl QMatrix {
    pub fn from_raw(raw: &RawMatrix) -> Result<Self> {
        validate_matrix(raw)
    }

    pub fn from_columns(prefix: Vec<ProbColumn>, period: Vec<ProbColumn>) -> Result<Self> {
        let tmp = ColumnTable { prefix, period };
        validate_matrix(&tmp.to_raw())
    }

    /// The s-adic system: every column uniform with `s` digits.
    pub fn s_adic(s: usize) -> Self {
        Self::from_columns(Vec::new(), vec![ProbColumn::uniform(s)]).expect("uniform column is valid")
    }

    pub fn to_raw(&self) -> RawMatrix {
        self.table.to_raw()
    }

    pub fn q_min(&self) -> &Rational {
        &self.q_min
    }
}

/// Minimum entry over prefix and period; the infimum over all ranks.
pub fn q_min(q: &QMatrix) -> Rational {
    q.q_min.clone()
}

macro_rules! column_source_for {
    ($t:ty) => {
        impl ColumnSource for $t {
            fn column(&self, j: usize) -> &ProbColumn {
                self.table.column(j)
            }
            fn distinct_columns(&self) -> Vec<&ProbColumn> {
                self.table.prefix.iter().chain(self.table.period.iter()).collect()
            }
            fn prefix_len(&self) -> usize {
                self.table.prefix.len()
            }
            fn period_len(&self) -> usize {
                self.table.period.len()
            }
        }
    };
}

column_source_for!(QMatrix);
column_source_for!(PMatrix);

/// Digit probabilities of ξ. Same shape as the paired Q; zero entries allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PMatrix {
    table: ColumnTable,
}

impl PMatrix {
    /// Validates `raw` as a probability matrix with the digit counts of `q`.
    pub fn paired(raw: &RawMatrix, q: &QMatrix) -> Result<Self> {
        let table = ColumnTable::build(raw, EntryRule::Closed)?;
        let p = Self { table };
        check_shapes(q, &p)?;
        Ok(p)
    }

    /// P = Q, the identity transform.
    pub fn identity(q: &QMatrix) -> Self {
        Self { table: q.table.clone() }
    }

    pub fn to_raw(&self) -> RawMatrix {
        self.table.to_raw()
    }
}

/// Ranks `1..=horizon` cover every distinct (Q column, P column) pair.
pub fn joint_horizon(a: &impl ColumnSource, b: &impl ColumnSource) -> usize {
    let lcm = a.period_len().lcm(&b.period_len());
    a.prefix_len().max(b.prefix_len()) + lcm
}

fn check_shapes(q: &QMatrix, p: &PMatrix) -> Result<()> {
    for j in 1..=joint_horizon(q, p) {
        let (qd, pd) = (q.digits(j), p.digits(j));
        if qd != pd {
            return Err(Error::ShapeMismatch { column: j, p_digits: pd, q_digits: qd });
        }
    }
    Ok(())
}

/// A finite digit prefix `a_1 … a_k`; the empty word addresses `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DigitWord(pub Vec<usize>);

impl DigitWord {
    pub fn new(digits: Vec<usize>) -> Self {
        Self(digits)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn digits(&self) -> &[usize] {
        &self.0
    }

    pub fn extended(&self, digit: usize) -> Self {
        let mut d = self.0.clone();
        d.push(digit);
        Self(d)
    }

    /// Checks each digit against `n_j` of `m`.
    pub fn check(&self, m: &impl ColumnSource) -> Result<()> {
        for (idx, &digit) in self.0.iter().enumerate() {
            let digits = m.digits(idx + 1);
            if digit >= digits {
                return Err(Error::DigitOutOfRange { position: idx + 1, digit, digits });
            }
        }
        Ok(())
    }
}

impl fmt::Display for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]")
    }
}

/// Half-open interval `[left, right)` with exact endpoints; `left == right`
/// denotes a single point.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "crate::rational::serde_rational")]
    pub left: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub right: Rational,
}

impl Interval {
    pub fn length(&self) -> Rational {
        &self.right - &self.left
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.left <= x && x < &self.right
    }

    pub fn is_point(&self) -> bool {
        self.left == self.right
    }
}

/// The interval of all points whose first `k` digits form `word`.
///
/// Under a Q matrix `left < right` always holds. Images under a P matrix with
/// zero entries may collapse to a point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cylinder {
    pub word: DigitWord,
    #[serde(with = "crate::rational::serde_rational")]
    pub left: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub right: Rational,
}

impl Cylinder {
    pub fn length(&self) -> Rational {
        &self.right - &self.left
    }

    pub fn interval(&self) -> Interval {
        Interval { left: self.left.clone(), right: self.right.clone() }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.left <= x && x < &self.right
    }

    pub fn is_degenerate(&self) -> bool {
        self.left == self.right
    }

    /// One-digit refinement, computed incrementally from this cylinder.
    pub fn child(&self, m: &impl ColumnSource, digit: usize) -> Cylinder {
        let col = m.column(self.word.len() + 1);
        let len = self.length();
        let left = &self.left + col.offset(digit) * &len;
        let right = &left + col.entry(digit) * &len;
        Cylinder { word: self.word.extended(digit), left, right }
    }

    pub fn unit() -> Cylinder {
        Cylinder { word: DigitWord::empty(), left: Rational::zero(), right: Rational::one() }
    }
}

/// Cylinder of `word`: `left = Σ_j offset_j(a_j) · Π_{l<j} q_{a_l l}` and
/// `right = left + Π_j q_{a_j j}`.
pub fn cylinder(m: &impl ColumnSource, word: &DigitWord) -> Result<Cylinder> {
    word.check(m)?;
    let mut left = Rational::zero();
    let mut len = Rational::one();
    for (idx, &a) in word.digits().iter().enumerate() {
        let col = m.column(idx + 1);
        left += col.offset(a) * &len;
        len *= col.entry(a);
    }
    let right = &left + &len;
    Ok(Cylinder { word: word.clone(), left, right })
}

/// The rank-`k` digit word of `x`, i.e. the unique `w` with `x ∈ [left(w), right(w))`.
pub fn expand(q: &QMatrix, x: &Rational, k: usize) -> Result<DigitWord> {
    if !is_unit_interval_point(x) {
        return Err(Error::OutOfUnitInterval(format_rational(x)));
    }
    Ok(DigitWord(ExpansionDigits::new(q, x.clone()).take(k).collect()))
}

/// Lazy digit stream of a point; the relative position inside the current
/// cylinder is rescaled exactly at every step.
pub struct ExpansionDigits<'a> {
    q: &'a QMatrix,
    rank: usize,
    position: Rational,
}

impl<'a> ExpansionDigits<'a> {
    /// `x` must lie in `[0, 1)`.
    pub fn new(q: &'a QMatrix, x: Rational) -> Self {
        debug_assert!(is_unit_interval_point(&x));
        Self { q, rank: 0, position: x }
    }
}

impl Iterator for ExpansionDigits<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        self.rank += 1;
        let col = self.q.column(self.rank);
        let mut offset = Rational::zero();
        let last = col.len() - 1;
        for (digit, width) in col.entries().iter().enumerate() {
            let end = &offset + width;
            if digit == last || self.position < end {
                self.position = (&self.position - &offset) / width;
                return Some(digit);
            }
            offset = end;
        }
        unreachable!("columns sum to one")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn raw(prefix: &[&[&str]], period: &[&[&str]]) -> RawMatrix {
        let conv = |cols: &[&[&str]]| cols.iter().map(|c| c.iter().map(|s| s.to_string()).collect()).collect();
        RawMatrix { prefix: conv(prefix), period: conv(period) }
    }

    #[test]
    fn validate_uniform_binary() {
        let q = validate_matrix(&raw(&[], &[&["1/2", "1/2"]])).unwrap();
        assert_eq!(q_min(&q), rat(1, 2));
    }

    #[test]
    fn validate_rejects_bad_columns() {
        let e = validate_matrix(&raw(&[], &[&["1/3", "1/3", "1/4"]])).unwrap_err();
        assert!(matches!(e, Error::ColumnNotStochastic { ref sum, .. } if sum == "11/12"));
        let e = validate_matrix(&raw(&[], &[&["0", "1"]])).unwrap_err();
        assert!(matches!(e, Error::NonPositiveEntry { index: 0, .. }));
        assert_eq!(validate_matrix(&raw(&[&["1/2", "1/2"]], &[])).unwrap_err(), Error::EmptyPeriod);
        assert!(matches!(validate_matrix(&raw(&[], &[&["1"]])).unwrap_err(), Error::TooFewDigits { .. }));
    }

    #[test]
    fn q_min_examples() {
        assert_eq!(q_min(&QMatrix::s_adic(2)), rat(1, 2));
        assert_eq!(q_min(&QMatrix::s_adic(3)), rat(1, 3));
        let mixed = validate_matrix(&raw(&[&["1/4", "3/4"]], &[&["1/2", "1/2"]])).unwrap();
        assert_eq!(q_min(&mixed), rat(1, 4));
    }

    #[test]
    fn column_accessor_cycles_period() {
        let q = validate_matrix(&raw(&[&["1/4", "3/4"]], &[&["1/2", "1/2"], &["1/3", "1/3", "1/3"]])).unwrap();
        assert_eq!(q.digits(1), 2);
        assert_eq!(q.column(1).entry(0), &rat(1, 4));
        assert_eq!(q.digits(2), 2);
        assert_eq!(q.digits(3), 3);
        assert_eq!(q.digits(4), 2);
        assert_eq!(q.digits(5), 3);
    }

    #[test]
    fn cylinder_examples() {
        let c = cylinder(&QMatrix::s_adic(3), &DigitWord::new(vec![0, 2])).unwrap();
        assert_eq!((c.left.clone(), c.right.clone()), (rat(2, 9), rat(3, 9)));
        assert_eq!(c.length(), rat(1, 9));

        let c = cylinder(&QMatrix::s_adic(2), &DigitWord::new(vec![1])).unwrap();
        assert_eq!((c.left, c.right), (rat(1, 2), rat(1, 1)));

        let mixed = validate_matrix(&raw(&[&["1/4", "3/4"]], &[&["1/2", "1/2"]])).unwrap();
        let c = cylinder(&mixed, &DigitWord::new(vec![1, 0])).unwrap();
        assert_eq!((c.left.clone(), c.right.clone()), (rat(1, 4), rat(5, 8)));
        assert_eq!(c.length(), rat(3, 8));

        let e = cylinder(&QMatrix::s_adic(2), &DigitWord::new(vec![0, 2])).unwrap_err();
        assert_eq!(e, Error::DigitOutOfRange { position: 2, digit: 2, digits: 2 });
    }

    #[test]
    fn expand_examples() {
        let w = expand(&QMatrix::s_adic(2), &rat(0, 1), 3).unwrap();
        assert_eq!(w.digits(), &[0, 0, 0]);
        let w = expand(&QMatrix::s_adic(3), &rat(1, 4), 4).unwrap();
        assert_eq!(w.digits(), &[0, 2, 0, 2]);
        let mixed = validate_matrix(&raw(&[&["1/4", "3/4"]], &[&["1/2", "1/2"]])).unwrap();
        assert_eq!(expand(&mixed, &rat(1, 2), 2).unwrap().digits(), &[1, 0]);
        assert!(matches!(expand(&mixed, &rat(1, 1), 2), Err(Error::OutOfUnitInterval(_))));
        assert!(matches!(expand(&mixed, &rat(-1, 3), 2), Err(Error::OutOfUnitInterval(_))));
    }

    #[test]
    fn endpoints_are_left_closed() {
        let q = QMatrix::s_adic(2);
        assert_eq!(expand(&q, &rat(1, 2), 2).unwrap().digits(), &[1, 0]);
        assert_eq!(expand(&q, &rat(1, 4), 3).unwrap().digits(), &[0, 1, 0]);
    }

    #[test]
    fn paired_p_matrix_shapes() {
        let q = validate_matrix(&raw(&[], &[&["1/2", "1/2"], &["1/3", "1/3", "1/3"]])).unwrap();
        let bad = PMatrix::paired(&raw(&[], &[&["1/3", "1/3", "1/3"], &["1/2", "1/2"]]), &q);
        assert!(matches!(bad, Err(Error::ShapeMismatch { column: 1, p_digits: 3, q_digits: 2 })));
        let bad = PMatrix::paired(&raw(&[], &[&["1/2", "1/2"]]), &q);
        assert!(matches!(bad, Err(Error::ShapeMismatch { column: 2, .. })));
        let ok = PMatrix::paired(&raw(&[&["0", "1"]], &[&["1/3", "2/3", "0"], &["1/2", "1/2"]]), &q).unwrap();
        assert_eq!(ok.column(1).entry(1), &rat(1, 1));
    }

    #[test]
    fn raw_round_trip() {
        let r = raw(&[&["1/4", "3/4"]], &[&["1/2", "1/2"]]);
        let q = validate_matrix(&r).unwrap();
        assert_eq!(q.to_raw(), r);
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(text, r#"{"prefix":[["1/4","3/4"]],"period":[["1/2","1/2"]]}"#);
    }
}
