use super::coefficients::CoefficientTable;
use super::oracle::{KCountOracle, SubstitutedQuery, SubstitutionClass};
use super::ShapleyVector;
use crate::boolfunc::{SubstKind, VarId};
use crate::error::{Error, Result};
use crate::scalar::Field;
use crate::{KCounts, Rational, ShapleyValues};

/// Shapley values from `n + 1` k-count queries: one for `F~` (every variable
/// renamed to a single fresh one) and one per `i` for `F~'` (`X_i` replaced
/// by the empty disjunction).
pub fn shapley_from_kcount_oracle<F, O>(f: &F, oracle: &mut O) -> Result<ShapleyValues>
where
    F: SubstitutionClass + ?Sized,
    O: KCountOracle<F> + ?Sized,
{
    let n = f.num_vars();
    let full = oracle.kcounts(&SubstitutedQuery::uniform(f, SubstKind::Or, 1))?;
    let mut without = Vec::with_capacity(n);
    for i in 0..n {
        let mut arities = vec![1; n];
        arities[i] = 0;
        without.push(oracle.kcounts(&SubstitutedQuery::new(f, SubstKind::Or, arities))?);
    }
    shapley_from_kcounts(&full, &without)
}

/// `Shap(F, X_i)` alone, from two k-count queries.
pub fn shapley_value_from_kcount_oracle<F, O>(f: &F, oracle: &mut O, i: VarId) -> Result<Rational>
where
    F: SubstitutionClass + ?Sized,
    O: KCountOracle<F> + ?Sized,
{
    let n = f.num_vars();
    if i >= n {
        return Err(Error::input(format!(
            "x{} out of range for {n} variables",
            i + 1
        )));
    }
    let full = oracle.kcounts(&SubstitutedQuery::uniform(f, SubstKind::Or, 1))?;
    let mut arities = vec![1; n];
    arities[i] = 0;
    let without = oracle.kcounts(&SubstitutedQuery::new(f, SubstKind::Or, arities))?;
    check_lengths(&full, n)?;
    single_value(&full, &without, &CoefficientTable::new(n), i)
}

fn check_lengths(full: &KCounts, n: usize) -> Result<()> {
    if full.as_slice().len() != n + 1 {
        return Err(Error::inconsistent(format!(
            "k-count vector of length {} for a function over {n} variables",
            full.as_slice().len()
        )));
    }
    Ok(())
}

fn single_value(
    full: &KCounts,
    without: &KCounts,
    coeffs: &CoefficientTable<Rational>,
    i: usize,
) -> Result<Rational> {
    let n = full.as_slice().len() - 1;
    if without.as_slice().len() != n {
        return Err(Error::inconsistent(format!(
            "cofactor k-counts for x{} have length {}, expected {n}",
            i + 1,
            without.as_slice().len()
        )));
    }
    let mut value = Rational::from_i64(0);
    for k in 0..n {
        let d = Rational::from_biguint(&full.get(k + 1))
            - Rational::from_biguint(&without.get(k + 1))
            - Rational::from_biguint(&without.get(k));
        value += coeffs.get(k) * d;
    }
    Ok(value)
}

/// `Shap(F, X_i) = Σ_{k<n} c_k (#_{k+1}F − #_{k+1}F' − #_k F')` where `F'` is
/// `F[X_i := 0]` over the remaining `n − 1` variables.
pub fn shapley_from_kcounts(full: &KCounts, without: &[KCounts]) -> Result<ShapleyValues> {
    let n = without.len();
    check_lengths(full, n)?;
    let coeffs = CoefficientTable::<Rational>::new(n);
    let values = without
        .iter()
        .enumerate()
        .map(|(i, w)| single_value(full, w, &coeffs, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(ShapleyVector::new(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfunc::parse_formula;
    use crate::brute::{brute_kcounts, brute_shapley_permutations, Bounds};
    use crate::reductions::{CallCounter, EnumerationOracle, KCountsViaCounts};
    use crate::BoolFunc;
    use proptest::prelude::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p.into(), q.into())
    }

    #[test]
    fn examples() {
        let mut o = EnumerationOracle::default();
        let f = parse_formula("(and x1 (or x2 (not x3)))").unwrap();
        assert_eq!(
            shapley_from_kcount_oracle(&f, &mut o).unwrap().values(),
            &[r(5, 6), r(2, 6), r(-1, 6)]
        );
        let zero = BoolFunc::constant(false, 3);
        assert_eq!(
            shapley_from_kcount_oracle(&zero, &mut o).unwrap().values(),
            &[r(0, 1), r(0, 1), r(0, 1)]
        );
        let or3 = parse_formula("(or x1 x2 x3)").unwrap();
        assert_eq!(
            shapley_from_kcount_oracle(&or3, &mut o).unwrap().values(),
            &[r(1, 3), r(1, 3), r(1, 3)]
        );
    }

    #[test]
    fn cofactor_identity() {
        // #_{k+1}F = #_k F[X_i:=1] + #_{k+1} F[X_i:=0]
        let b = Bounds::default();
        let f = parse_formula("(or (and x1 x3) (and x2 (not x4)) x5)").unwrap();
        let full = brute_kcounts(&f, &b).unwrap();
        for i in 0..5 {
            let one = brute_kcounts(&f.restrict(i, true).unwrap(), &b).unwrap();
            let zero = brute_kcounts(&f.restrict(i, false).unwrap(), &b).unwrap();
            for k in 0..5 {
                assert_eq!(full.get(k + 1), one.get(k) + zero.get(k + 1));
            }
        }
    }

    #[test]
    fn makes_n_plus_one_calls() {
        let f = parse_formula("(or x1 (and x2 x3))").unwrap();
        let mut o = CallCounter::new(EnumerationOracle::default());
        shapley_from_kcount_oracle(&f, &mut o).unwrap();
        assert_eq!(o.calls, 4);
    }

    #[test]
    fn length_mismatch_is_reported() {
        let full = KCounts::from_u64(&[0, 1]);
        let without = vec![KCounts::from_u64(&[0, 1])];
        assert!(matches!(
            shapley_from_kcounts(&full, &without),
            Err(Error::OracleInconsistency(_))
        ));
    }

    proptest! {
        #[test]
        fn matches_permutation_oracle(f in crate::generate::arb_boolfunc(6)) {
            let b = Bounds::default();
            let mut direct = EnumerationOracle::default();
            let expected = brute_shapley_permutations(&f, &b).unwrap();
            prop_assert_eq!(&shapley_from_kcount_oracle(&f, &mut direct).unwrap(), &expected);
            // the full chain through a count oracle
            let mut chained = KCountsViaCounts::new(EnumerationOracle::default());
            prop_assert_eq!(&shapley_from_kcount_oracle(&f, &mut chained).unwrap(), &expected);
        }
    }
}
