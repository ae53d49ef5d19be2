//! Exhaustive enumeration oracles. Everything else in the crate is checked
//! against these.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::boolfunc::BoolFunc;
use crate::error::{Error, Result};
use crate::reductions::{CoefficientTable, KCounts, ShapleyVector};
use crate::{Rational, ShapleyValues};

/// Enumeration limits. Exceeding one is a refusal, never a truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Largest `n` for `2^n` valuation enumeration.
    pub max_count_vars: usize,
    /// Largest `n` for `n!` permutation enumeration.
    pub max_permutation_vars: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_count_vars: 24,
            max_permutation_vars: 10,
        }
    }
}

impl Bounds {
    pub fn with_max_vars(max_count_vars: usize) -> Self {
        Bounds {
            max_count_vars,
            ..Bounds::default()
        }
    }
}

/// `F[T]` for every `T ⊆ [n]`, indexed by bit mask.
pub fn truth_table(f: &BoolFunc, bounds: &Bounds) -> Result<Vec<bool>> {
    let n = f.num_vars();
    // hard cap keeps the mask arithmetic in range whatever the configuration
    if n > bounds.max_count_vars || n > 40 {
        return Err(Error::refusal(format!(
            "enumeration over {n} variables exceeds the bound of {} (--max-vars)",
            bounds.max_count_vars.min(40)
        )));
    }
    Ok((0..1u64 << n).map(|m| f.expr().eval_mask(m)).collect())
}

pub fn brute_count(f: &BoolFunc, bounds: &Bounds) -> Result<BigUint> {
    let table = truth_table(f, bounds)?;
    Ok(BigUint::from(table.iter().filter(|b| **b).count()))
}

pub fn brute_kcounts(f: &BoolFunc, bounds: &Bounds) -> Result<KCounts> {
    let table = truth_table(f, bounds)?;
    Ok(kcounts_of_table(&table, f.num_vars()))
}

pub(crate) fn kcounts_of_table(table: &[bool], n: usize) -> KCounts {
    let mut counts = vec![0u64; n + 1];
    for (mask, &b) in table.iter().enumerate() {
        if b {
            counts[mask.count_ones() as usize] += 1;
        }
    }
    KCounts::new(counts.into_iter().map(BigUint::from).collect())
}

/// Shapley values as the average marginal contribution over all `n!` orders.
pub fn brute_shapley_permutations(f: &BoolFunc, bounds: &Bounds) -> Result<ShapleyValues> {
    let n = f.num_vars();
    if n > bounds.max_permutation_vars {
        return Err(Error::refusal(format!(
            "permutation enumeration over {n} variables exceeds the bound of {}",
            bounds.max_permutation_vars
        )));
    }
    let table = truth_table(f, bounds)?;
    let mut totals = vec![0i64; n];
    let mut order: Vec<usize> = (0..n).collect();
    let mut visit = |order: &[usize]| {
        let mut mask = 0usize;
        let mut prev = table[0] as i64;
        for &v in order {
            mask |= 1 << v;
            let cur = table[mask] as i64;
            totals[v] += cur - prev;
            prev = cur;
        }
    };
    // Heap's algorithm, iterative
    visit(&order);
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                order.swap(0, i);
            } else {
                order.swap(c[i], i);
            }
            visit(&order);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    let factorial: BigInt = (1..=n).map(BigInt::from).product();
    Ok(ShapleyVector::new(
        totals
            .into_iter()
            .map(|t| Rational::new(BigInt::from(t), factorial.clone()))
            .collect(),
    ))
}

/// Shapley values through the coefficient form
/// `Σ_k c_k (#_k F[X_i:=1] − #_k F[X_i:=0])`, cofactor counts by enumeration.
pub fn brute_shapley_subsets(f: &BoolFunc, bounds: &Bounds) -> Result<ShapleyValues> {
    let n = f.num_vars();
    let table = truth_table(f, bounds)?;
    let coeffs = CoefficientTable::<Rational>::new(n);
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let bit = 1usize << i;
        let mut diffs = vec![0i64; n];
        for mask in 0..table.len() {
            if mask & bit == 0 {
                let k = mask.count_ones() as usize;
                diffs[k] += table[mask | bit] as i64 - table[mask] as i64;
            }
        }
        let mut value = Rational::zero();
        for (k, d) in diffs.into_iter().enumerate() {
            if d != 0 {
                value += coeffs.get(k) * Rational::from_integer(BigInt::from(d));
            }
        }
        values.push(value);
    }
    Ok(ShapleyVector::new(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfunc::{parse_formula, Expr};

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p.into(), q.into())
    }

    fn ex1() -> BoolFunc {
        parse_formula("(and x1 (or x2 (not x3)))").unwrap()
    }

    fn counts(v: &[u32]) -> KCounts {
        KCounts::new(v.iter().map(|&x| BigUint::from(x)).collect())
    }

    #[test]
    fn counting_examples() {
        let b = Bounds::default();
        assert_eq!(brute_count(&ex1(), &b).unwrap(), BigUint::from(3u32));
        assert_eq!(
            brute_count(&BoolFunc::constant(false, 3), &b).unwrap(),
            BigUint::zero()
        );
        let pp = parse_formula("(or (and x1 x3) (and x2 x4))").unwrap();
        assert_eq!(brute_count(&pp, &b).unwrap(), BigUint::from(7u32));
    }

    #[test]
    fn kcount_examples() {
        let b = Bounds::default();
        assert_eq!(brute_kcounts(&ex1(), &b).unwrap(), counts(&[0, 1, 1, 1]));
        assert_eq!(
            brute_kcounts(&BoolFunc::constant(true, 2), &b).unwrap(),
            counts(&[1, 2, 1])
        );
        let f = parse_formula("(and (or x1 x2) x3)").unwrap();
        assert_eq!(brute_kcounts(&f, &b).unwrap(), counts(&[0, 0, 2, 1]));
    }

    #[test]
    fn permutation_examples() {
        let b = Bounds::default();
        let s = brute_shapley_permutations(&ex1(), &b).unwrap();
        assert_eq!(s.values(), &[r(5, 6), r(2, 6), r(-1, 6)]);
        let x1 = BoolFunc::new(Expr::var(0), 1).unwrap();
        assert_eq!(
            brute_shapley_permutations(&x1, &b).unwrap().values(),
            &[r(1, 1)]
        );
        let and2 = parse_formula("(and x1 x2)").unwrap();
        assert_eq!(
            brute_shapley_permutations(&and2, &b).unwrap().values(),
            &[r(1, 2), r(1, 2)]
        );
    }

    #[test]
    fn subset_examples() {
        let b = Bounds::default();
        assert_eq!(
            brute_shapley_subsets(&ex1(), &b).unwrap().values()[0],
            r(5, 6)
        );
        let one = BoolFunc::constant(true, 3);
        assert!(brute_shapley_subsets(&one, &b)
            .unwrap()
            .values()
            .iter()
            .all(Zero::is_zero));
        let or2 = parse_formula("(or x1 x2)").unwrap();
        assert_eq!(
            brute_shapley_subsets(&or2, &b).unwrap().values(),
            &[r(1, 2), r(1, 2)]
        );
    }

    #[test]
    fn bounds_refuse() {
        let b = Bounds {
            max_count_vars: 3,
            max_permutation_vars: 2,
        };
        let f = BoolFunc::constant(true, 4);
        assert!(matches!(brute_count(&f, &b), Err(Error::Refusal(_))));
        let g = BoolFunc::constant(true, 3);
        assert!(matches!(
            brute_shapley_permutations(&g, &b),
            Err(Error::Refusal(_))
        ));
        assert!(brute_shapley_subsets(&g, &b).is_ok());
    }

    #[test]
    fn zero_variables() {
        let b = Bounds::default();
        let f = BoolFunc::constant(true, 0);
        assert_eq!(brute_count(&f, &b).unwrap(), BigUint::from(1u32));
        assert!(brute_shapley_permutations(&f, &b)
            .unwrap()
            .values()
            .is_empty());
    }
}
