use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the workbench can report, from matrix validation up to scenario I/O.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("column {column}: entries sum to {sum}, not 1")]
    ColumnNotStochastic { column: usize, sum: String },
    #[error("column {column}: entry {index} = {value} is outside the admissible range")]
    NonPositiveEntry {
        column: usize,
        index: usize,
        value: String,
    },
    #[error("column {column} has {len} entries, at least 2 are required")]
    TooFewDigits { column: usize, len: usize },
    #[error("the periodic tail must contain at least one column")]
    EmptyPeriod,
    #[error("digit {digit} at position {position} is out of range for a column with {digits} digits")]
    DigitOutOfRange {
        position: usize,
        digit: usize,
        digits: usize,
    },
    #[error("point {0} is outside [0, 1)")]
    OutOfUnitInterval(String),
    #[error("column {column}: P has {p_digits} digits but Q has {q_digits}")]
    ShapeMismatch {
        column: usize,
        p_digits: usize,
        q_digits: usize,
    },
    #[error("image width did not drop to {tol} within {max_rank} digits")]
    ToleranceNotReached { tol: f64, max_rank: usize },
    #[error("cylinder has zero measure under P")]
    ZeroMeasureCylinder,
    #[error("the digit word must be nonempty")]
    EmptyWord,
    #[error("partial sums of b_j vanish; the entropy ratio is undefined")]
    DegenerateDenominator,
    #[error("enumeration of {requested} cylinders exceeds the budget of {budget}")]
    BudgetExceeded { requested: String, budget: u64 },
    #[error("{got} scales supplied, at least {needed} are required")]
    TooFewScales { got: usize, needed: usize },
    #[error("column {column} is not digit-uniform")]
    NonUniformColumns { column: usize },
    #[error("finest ball diameter {finest} cannot separate points {gap} apart")]
    GridTooCoarse { finest: String, gap: String },
    #[error("uncentered premeasure {uncentered} fell below centered {centered}")]
    OrderingViolated { centered: f64, uncentered: f64 },
    #[error("invalid digit specification: {0}")]
    InvalidSpec(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
