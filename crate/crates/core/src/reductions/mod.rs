//! Reductions between Shapley value computation, fixed-size model counting
//! and model counting, written against abstract oracles.
//!
//! Each driver only talks to its oracle through [`SubstitutedQuery`]: "this
//! function under this OR- (or AND-) substitution". The driver never looks
//! inside the oracle, so the same code runs against brute force, the circuit
//! engine and the lineage engine.

mod coefficients;
mod count;
mod enumeration;
mod kcounts;
mod linalg;
mod oracle;
mod shapley;

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::scalar::Field;

pub use coefficients::CoefficientTable;
pub use count::{count_from_shapley_oracle, group_coverage_weight, kcounts_from_shapley_oracle};
pub use enumeration::EnumerationOracle;
pub use kcounts::{kcounts_from_count_oracle, kcounts_from_count_oracle_and, KCountsViaCounts};
pub use linalg::{solve_linear_system, VandermondeSystem};
pub use oracle::{
    CallCounter, CountOracle, KCountOracle, ShapleyOracle, Substitutable, SubstitutedQuery,
    SubstitutionClass,
};
pub use shapley::{
    shapley_from_kcount_oracle, shapley_from_kcounts, shapley_value_from_kcount_oracle,
};

/// `(#_0 F, …, #_n F)`: number of models setting exactly `k` variables to 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KCounts(Vec<BigUint>);

impl KCounts {
    pub fn new(counts: Vec<BigUint>) -> Self {
        KCounts(counts)
    }

    pub fn from_u64(counts: &[u64]) -> Self {
        KCounts(counts.iter().map(|&c| BigUint::from(c)).collect())
    }

    /// Number of variables, i.e. `len - 1`.
    pub fn num_vars(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    /// `#_k F`, zero outside `0..=n`.
    pub fn get(&self, k: usize) -> BigUint {
        self.0.get(k).cloned().unwrap_or_else(BigUint::zero)
    }

    pub fn as_slice(&self) -> &[BigUint] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<BigUint> {
        self.0
    }

    /// `#F = Σ_k #_k F`.
    pub fn total(&self) -> BigUint {
        self.0.iter().sum()
    }
}

impl fmt::Display for KCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// `(Shap(F, X_1), …, Shap(F, X_n))`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapleyVector<T>(Vec<T>);

impl<T: Field> ShapleyVector<T> {
    pub fn new(values: Vec<T>) -> Self {
        ShapleyVector(values)
    }

    pub fn zeros(n: usize) -> Self {
        ShapleyVector(vec![T::zero(); n])
    }

    pub fn values(&self) -> &[T] {
        &self.0
    }

    pub fn get(&self, i: usize) -> &T {
        &self.0[i]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> T {
        self.0.iter().cloned().fold(T::zero(), |a, b| a + b)
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }
}
