//! Numerical dimension machinery for digit-restricted sets: cylinder
//! enumeration, grid box counts, cylinder-family counts, a closed-form
//! oracle for digit-uniform matrices, and finite-scale packing premeasures.

mod boxcount;
mod enumerate;
mod family;
mod moran;
mod packing;

pub use boxcount::{
    box_counts, box_dimension, dim_estimate, matched_base, scale_ladder, DimensionEstimate, GridScale, Method,
    ScaleSample, MIN_SCALES,
};
pub use enumerate::{enumerate_cylinders, Budget, DEFAULT_MAX_RANK, RANK_BUDGET_ENV};
pub use family::{family_dim, family_samples, moran_dim_oracle, MoranOracle};
pub use moran::{DigitSet, MoranSpec};
pub use packing::{
    packing_premeasure, premeasure_ordering_check, separation_levels, Ball, PackingMode, PackingResult,
    MAX_RADIUS_LEVELS,
};
