//! Exact Shapley values of variables in Boolean functions, computed through
//! polynomial-time reductions to (fixed-size) model counting under
//! OR-substitutions.
//!
//! The crate is organised around one abstract engine and three concrete
//! representations that plug into it:
//!
//! * [`boolfunc`]: expression trees, valuations, substitutions and the
//!   DIMACS / s-expression readers.
//! * [`brute`]: exhaustive enumeration oracles used as ground truth.
//! * [`reductions`]: the count ⇄ fixed-size count ⇄ Shapley reductions,
//!   written against abstract oracles, plus the exact linear solver.
//! * [`circuit`]: deterministic and decomposable circuits with parsing,
//!   validation, linear-time counting and OR-substitution.
//! * [`lineage`]: Boolean conjunctive queries, lineage, stretching and the
//!   hierarchical dichotomy.
//!
//! Numeric kernels are generic over [`scalar::Field`]; the aliases below pin
//! the exact instantiations used everywhere else.

pub mod boolfunc;
pub mod brute;
pub mod circuit;
pub mod error;
pub mod generate;
pub mod lineage;
pub mod poly;
pub mod reductions;
pub mod scalar;

pub use error::{Error, Result};

/// Exact rational scalar used for Shapley values and linear systems.
pub type Rational = num_rational::BigRational;

/// Arbitrary-precision model count.
pub type Count = num_bigint::BigUint;

/// Shapley vector over exact rationals.
pub type ShapleyValues = reductions::ShapleyVector<Rational>;

/// Coefficient table `c_k = k!(n-k-1)!/n!` over exact rationals.
pub type Coefficients = reductions::CoefficientTable<Rational>;

/// Generating polynomial with arbitrary-precision coefficients.
pub type CountPoly = poly::Poly<Count>;

pub use boolfunc::{BoolFunc, Expr, Valuation, VarId};
pub use circuit::Circuit;
pub use reductions::KCounts;
