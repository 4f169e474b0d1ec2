//! `dimlab`: a desk-scale workbench for Q̃-expansions, distribution functions
//! of random variables with independent Q̃-digits, and packing-dimension
//! estimates of digit-restricted sets and their images.
//!
//! Layers, bottom up:
//!
//! - [`qtilde`]: exact matrices, digit words, cylinders and expansions.
//! - [`measure`]: μ_ξ, F_ξ and local dimension ratios.
//! - [`criteria`]: entropy ratio, the sparse set `T`, `B` and the preservation verdict.
//! - [`dimension`]: enumeration, box counts, family dimension, oracle and packing premeasures.
//! - [`harness`]: scenario documents, runs and reports, driven by the `dimlab` binary.

pub mod criteria;
pub mod dimension;
pub mod error;
pub mod fixtures;
pub mod harness;
pub mod limsup;
pub mod measure;
pub mod qtilde;
pub mod rational;

pub use error::{Error, Result};
pub use limsup::LimsupEstimator;
pub use qtilde::{ColumnSource, Cylinder, DigitWord, PMatrix, QMatrix};
pub use rational::Rational;
