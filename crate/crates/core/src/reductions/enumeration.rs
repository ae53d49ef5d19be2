use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use super::coefficients::CoefficientTable;
use super::oracle::{CountOracle, KCountOracle, ShapleyOracle, SubstitutedQuery};
use crate::boolfunc::{BoolFunc, SubstKind, VarId};
use crate::brute::{brute_count, brute_kcounts, brute_shapley_subsets, truth_table, Bounds};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::{KCounts, Rational};

/// Brute-force oracle for formulas under OR/AND-substitution.
///
/// Small substituted functions are built and enumerated directly. Larger
/// ones are never built: the oracle enumerates the `2^n` valuations of the
/// base function and weighs each by the size-generating polynomials of the
/// substituted groups, so the enumeration bound applies to `n`, not `Σ m_i`.
#[derive(Clone, Debug)]
pub struct EnumerationOracle {
    pub bounds: Bounds,
    /// Largest `Σ m_i` for which the substituted function is materialized.
    pub materialize_limit: usize,
}

impl Default for EnumerationOracle {
    fn default() -> Self {
        EnumerationOracle {
            bounds: Bounds::default(),
            materialize_limit: 16,
        }
    }
}

impl EnumerationOracle {
    pub fn new(bounds: Bounds) -> Self {
        EnumerationOracle {
            bounds,
            ..EnumerationOracle::default()
        }
    }

    /// Always takes the lifted route.
    pub fn lifted(bounds: Bounds) -> Self {
        EnumerationOracle {
            bounds,
            materialize_limit: 0,
        }
    }

    fn materialize(&self, q: &SubstitutedQuery<'_, BoolFunc>) -> Result<Option<BoolFunc>> {
        check_arity(q)?;
        if q.num_new_vars() <= self.materialize_limit {
            Ok(Some(q.base.uniform_substitute(&q.arities, q.kind)?.0))
        } else {
            Ok(None)
        }
    }

    /// `Σ_k #_k G t^k` for the substituted `G`, optionally with one new
    /// variable of group `pin.0` fixed to `pin.1` (and removed).
    fn lifted_poly(
        &self,
        q: &SubstitutedQuery<'_, BoolFunc>,
        pin: Option<(VarId, bool)>,
    ) -> Result<Poly<BigUint>> {
        let n = q.base.num_vars();
        let table = truth_table(q.base, &self.bounds)?;

        // variables with the same (free arity, forced value) behave alike
        let mut keys: Vec<(usize, Option<bool>)> = Vec::new();
        let mut class_masks: Vec<u64> = Vec::new();
        let mut class_of = vec![0usize; n];
        for i in 0..n {
            let key = match pin {
                Some((src, value)) if src == i => (q.arities[i] - 1, Some(value)),
                _ => (q.arities[i], None),
            };
            let c = keys.iter().position(|k| *k == key).unwrap_or_else(|| {
                keys.push(key);
                class_masks.push(0);
                keys.len() - 1
            });
            class_masks[c] |= 1 << i;
            class_of[i] = c;
        }

        let mut histogram: HashMap<Vec<u32>, u64> = HashMap::new();
        for (mask, &value) in table.iter().enumerate() {
            if value {
                let tuple = class_masks
                    .iter()
                    .map(|cm| (mask as u64 & cm).count_ones())
                    .collect();
                *histogram.entry(tuple).or_insert(0) += 1;
            }
        }

        let pairs: Vec<(Poly<BigUint>, Poly<BigUint>)> = keys
            .iter()
            .map(|&(m, forced)| group_polys(q.kind, m, forced))
            .collect();
        let sizes: Vec<u32> = class_masks.iter().map(|m| m.count_ones()).collect();
        let mut powers: HashMap<(usize, bool, u32), Poly<BigUint>> = HashMap::new();
        let mut power = |c: usize, truth: bool, e: u32| -> Poly<BigUint> {
            powers
                .entry((c, truth, e))
                .or_insert_with(|| {
                    let base = if truth { &pairs[c].0 } else { &pairs[c].1 };
                    (0..e).fold(Poly::one(), |acc, _| &acc * base)
                })
                .clone()
        };

        let mut total = Poly::zero();
        for (tuple, count) in histogram {
            let mut term = Poly::from_coeffs(vec![BigUint::from(count)]);
            for (c, &a) in tuple.iter().enumerate() {
                term = &term * &power(c, true, a);
                term = &term * &power(c, false, sizes[c] - a);
            }
            total = &total + &term;
        }
        Ok(total)
    }
}

fn check_arity(q: &SubstitutedQuery<'_, BoolFunc>) -> Result<()> {
    if q.arities.len() != q.base.num_vars() {
        return Err(Error::input(format!(
            "{} arities for a function over {} variables",
            q.arities.len(),
            q.base.num_vars()
        )));
    }
    Ok(())
}

/// Size-generating polynomials of one group of `m` free new variables when
/// the source variable reads true and false. `forced` is the value of one
/// extra pinned member of the group.
fn group_polys(kind: SubstKind, m: usize, forced: Option<bool>) -> (Poly<BigUint>, Poly<BigUint>) {
    let all = Poly::one_plus_t_pow(m);
    match (kind, forced) {
        (SubstKind::Or, Some(true)) => (all, Poly::zero()),
        (SubstKind::Or, _) => (all.sub(&Poly::one()), Poly::one()),
        (SubstKind::And, Some(false)) => (Poly::zero(), all),
        (SubstKind::And, _) => {
            let top = Poly::monomial(m);
            (top.clone(), all.sub(&top))
        }
    }
}

impl CountOracle<BoolFunc> for EnumerationOracle {
    fn count(&mut self, q: &SubstitutedQuery<'_, BoolFunc>) -> Result<BigUint> {
        match self.materialize(q)? {
            Some(g) => brute_count(&g, &self.bounds),
            None => Ok(self.lifted_poly(q, None)?.sum()),
        }
    }
}

impl KCountOracle<BoolFunc> for EnumerationOracle {
    fn kcounts(&mut self, q: &SubstitutedQuery<'_, BoolFunc>) -> Result<KCounts> {
        match self.materialize(q)? {
            Some(g) => brute_kcounts(&g, &self.bounds),
            None => {
                let p = self.lifted_poly(q, None)?;
                Ok(KCounts::new(p.padded(q.num_new_vars() + 1)))
            }
        }
    }
}

impl ShapleyOracle<BoolFunc> for EnumerationOracle {
    fn shapley(&mut self, q: &SubstitutedQuery<'_, BoolFunc>, var: VarId) -> Result<Rational> {
        let total = q.num_new_vars();
        if var >= total {
            return Err(Error::input(format!(
                "variable {var} out of range for {total} substituted variables"
            )));
        }
        if let Some(g) = self.materialize(q)? {
            return Ok(brute_shapley_subsets(&g, &self.bounds)?.get(var).clone());
        }
        let source = {
            let mut acc = 0;
            let mut src = 0;
            for (i, &m) in q.arities.iter().enumerate() {
                if var < acc + m {
                    src = i;
                    break;
                }
                acc += m;
            }
            src
        };
        let one = self.lifted_poly(q, Some((source, true)))?;
        let zero = self.lifted_poly(q, Some((source, false)))?;
        let coeffs = CoefficientTable::<Rational>::new(total);
        let mut value = Rational::zero();
        for k in 0..total {
            let d = BigInt::from(one.coeff(k)) - BigInt::from(zero.coeff(k));
            if !d.is_zero() {
                value += coeffs.get(k) * Rational::from_integer(d);
            }
        }
        Ok(value)
    }
}
