use num_bigint::{BigInt, BigUint};
use num_traits::Signed;

use super::linalg::VandermondeSystem;
use super::oracle::{
    CountOracle, KCountOracle, Substitutable, SubstitutedQuery, SubstitutionClass,
};
use crate::boolfunc::SubstKind;
use crate::error::{Error, Result};
use crate::scalar::Field;
use crate::{KCounts, Rational};

/// `2^ell - 1`: the number of nonempty valuations of an `ell`-ary disjunction.
pub(crate) fn node(ell: usize) -> BigInt {
    (BigInt::from(1) << ell) - 1
}

pub(crate) fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for j in 0..k {
        acc = acc * BigUint::from(n - j) / BigUint::from(j + 1);
    }
    acc
}

/// Turns a recovered rational vector into k-counts over `n` variables,
/// rejecting anything no function could have produced.
pub(crate) fn to_kcounts(solution: Vec<Rational>, n: usize, what: &str) -> Result<KCounts> {
    let mut counts = Vec::with_capacity(solution.len());
    for (k, s) in solution.into_iter().enumerate() {
        let v = s.to_exact_integer().ok_or_else(|| {
            Error::inconsistent(format!("{what}: recovered #_{k} = {s} is not an integer"))
        })?;
        if v.is_negative() {
            return Err(Error::inconsistent(format!(
                "{what}: recovered #_{k} = {v} is negative"
            )));
        }
        let v = v.to_biguint().expect("nonnegative");
        if v > binomial(n, k) {
            return Err(Error::inconsistent(format!(
                "{what}: recovered #_{k} = {v} exceeds C({n},{k})"
            )));
        }
        counts.push(v);
    }
    Ok(KCounts::new(counts))
}

fn query_counts<F, O>(f: &F, kind: SubstKind, oracle: &mut O) -> Result<Vec<Rational>>
where
    F: SubstitutionClass + ?Sized,
    O: CountOracle<F> + ?Sized,
{
    let n = f.num_vars();
    (1..=n + 1)
        .map(|ell| {
            let q = SubstitutedQuery::uniform(f, kind, ell);
            oracle.count(&q).map(|c| Rational::from_biguint(&c))
        })
        .collect()
}

/// `#_{0..n} F` from `n + 1` model counts of `F^(ell)`, the OR-substitution
/// of uniform arity `ell = 1..n+1`, through
/// `#F^(ell) = Σ_k (2^ell - 1)^k #_k F`.
pub fn kcounts_from_count_oracle<F, O>(f: &F, oracle: &mut O) -> Result<KCounts>
where
    F: SubstitutionClass + ?Sized,
    O: CountOracle<F> + ?Sized,
{
    let n = f.num_vars();
    let rhs = query_counts(f, SubstKind::Or, oracle)?;
    let nodes = (1..=n + 1).map(node).collect();
    let solution = VandermondeSystem::new(nodes, rhs).solve()?;
    to_kcounts(solution, n, "count oracle")
}

/// Same with AND-substitutions: `#F^(ell) = Σ_k (2^ell - 1)^{n-k} #_k F`, a
/// Vandermonde system in the reversed unknowns `#_n F, …, #_0 F`.
pub fn kcounts_from_count_oracle_and<F, O>(f: &F, oracle: &mut O) -> Result<KCounts>
where
    F: SubstitutionClass + ?Sized,
    O: CountOracle<F> + ?Sized,
{
    let n = f.num_vars();
    let rhs = query_counts(f, SubstKind::And, oracle)?;
    let nodes = (1..=n + 1).map(node).collect();
    let mut solution = VandermondeSystem::new(nodes, rhs).solve()?;
    solution.reverse();
    to_kcounts(solution, n, "count oracle (AND)")
}

/// A k-count oracle built from a count oracle: materializes the queried
/// function and runs [`kcounts_from_count_oracle`] on it.
#[derive(Clone, Debug, Default)]
pub struct KCountsViaCounts<O> {
    pub inner: O,
}

impl<O> KCountsViaCounts<O> {
    pub fn new(inner: O) -> Self {
        KCountsViaCounts { inner }
    }
}

impl<F, O> KCountOracle<F> for KCountsViaCounts<O>
where
    F: Substitutable,
    O: CountOracle<F>,
{
    fn kcounts(&mut self, query: &SubstitutedQuery<'_, F>) -> Result<KCounts> {
        let g = query.base.substituted(query.kind, &query.arities)?;
        kcounts_from_count_oracle(&g, &mut self.inner)
    }
}
