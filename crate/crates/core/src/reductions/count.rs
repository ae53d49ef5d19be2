use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::kcounts::binomial;
use super::linalg::solve_linear_system;
use super::oracle::{ShapleyOracle, SubstitutedQuery, SubstitutionClass};
use crate::boolfunc::SubstKind;
use crate::error::{Error, Result};
use crate::scalar::Field;
use crate::{KCounts, Rational};

/// Probability that, in a uniformly random order of the variables of
/// `F^(ell,i)` (`X_i` kept as one variable `Z_i`, each of the other `n − 1`
/// variables expanded to `ell` disjuncts), the groups having a member before
/// `Z_i` are exactly one fixed set of `k` groups:
///
/// `w(ell, k) = Σ_{s=0}^{k} (−1)^{k−s} C(k,s) / (1 + (n−1−s)·ell)`.
///
/// `Shap(F^(ell,i), Z_i) = Σ_k w(ell, k)·(#_k F[X_i:=1] − #_k F[X_i:=0])`.
pub fn group_coverage_weight(n: usize, ell: usize, k: usize) -> Rational {
    let mut acc = Rational::zero();
    for s in 0..=k {
        let c = BigInt::from(binomial(k, s));
        let term = Rational::new(c, BigInt::from(1 + (n - 1 - s) * ell));
        if (k - s) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// `#_{0..n} F` from `n·n` Shapley queries `Shap(F^(ell,i), Z_i)`,
/// `ell = 1..n`, `i = 1..n`.
///
/// Per `i` the answers determine `Δ_k = #_k F[X_i:=1] − #_k F[X_i:=0]` for
/// `k < n`. Summed over `i`, `Σ_i Δ_k = (k+1)#_{k+1}F − (n−k)#_k F`, which
/// climbs from `#_0 F = F[0]` to the full vector.
pub fn kcounts_from_shapley_oracle<F, O>(f: &F, oracle: &mut O) -> Result<KCounts>
where
    F: SubstitutionClass + ?Sized,
    O: ShapleyOracle<F> + ?Sized,
{
    let n = f.num_vars();
    let base = if f.eval_all_zeros() {
        BigUint::from(1u32)
    } else {
        BigUint::zero()
    };
    if n == 0 {
        return Ok(KCounts::new(vec![base]));
    }

    let matrix: Vec<Vec<Rational>> = (1..=n)
        .map(|ell| (0..n).map(|k| group_coverage_weight(n, ell, k)).collect())
        .collect();

    let mut sums = vec![BigInt::zero(); n];
    for i in 0..n {
        let mut rhs = Vec::with_capacity(n);
        for ell in 1..=n {
            let mut arities = vec![ell; n];
            arities[i] = 1;
            let q = SubstitutedQuery::new(f, SubstKind::Or, arities);
            let z = q.group_start(i);
            rhs.push(oracle.shapley(&q, z)?);
        }
        let deltas = solve_linear_system(&matrix, &rhs)?;
        for (k, d) in deltas.into_iter().enumerate() {
            let d = d.to_exact_integer().ok_or_else(|| {
                Error::inconsistent(format!(
                    "recovered cofactor difference for x{} at size {k} is {d}, not an integer",
                    i + 1
                ))
            })?;
            if d.abs() > BigInt::from(binomial(n - 1, k)) {
                return Err(Error::inconsistent(format!(
                    "recovered cofactor difference for x{} at size {k} is {d}, out of range",
                    i + 1
                )));
            }
            sums[k] += d;
        }
    }

    let mut counts = vec![base];
    for (k, sum) in sums.into_iter().enumerate() {
        let prev = BigInt::from(counts[k].clone());
        let numer = sum + BigInt::from(n - k) * prev;
        let (next, rem) = numer.div_rem(&BigInt::from(k + 1));
        if !rem.is_zero() || next.is_negative() || next > BigInt::from(binomial(n, k + 1)) {
            return Err(Error::inconsistent(format!(
                "recovered #_{} = {numer}/{} is not a valid count",
                k + 1,
                k + 1
            )));
        }
        counts.push(next.to_biguint().expect("nonnegative"));
    }
    Ok(KCounts::new(counts))
}

/// `#F` through [`kcounts_from_shapley_oracle`].
pub fn count_from_shapley_oracle<F, O>(f: &F, oracle: &mut O) -> Result<BigUint>
where
    F: SubstitutionClass + ?Sized,
    O: ShapleyOracle<F> + ?Sized,
{
    Ok(kcounts_from_shapley_oracle(f, oracle)?.total())
}
