//! Executable kappa-metric and stratification theory for the Sorgenfrey
//! line, the double arrow space and the Niemytzki plane.

pub mod basic;
pub mod chain;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod numeric;
pub mod refute;
pub mod roset;
pub mod sampler;
pub mod scenario;
pub mod space;
pub mod stratification;

pub use basic::BasicOpenSet;
pub use error::{Error, Result};
pub use numeric::{Mode, Rational, Scalar};
pub use space::{Point, SpaceId};
pub use chain::{decreasing_chain_interior, increasing_union_limit, DecreasingChain, ParamBasic, ParamExpr};
pub use roset::{validate_regular_open, RegularOpenSet};
pub use stratification::{
    approximation_to_stratification, stratification_to_approximation, Approximation, FamilyLabel, QGrid, Stratification,
};
