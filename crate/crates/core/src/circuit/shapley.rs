use num_bigint::BigUint;

use super::count::{model_count_dd, size_polynomial_count};
use super::subst::or_substitute_circuit_all;
use super::Circuit;
use crate::boolfunc::{SubstKind, VarId};
use crate::error::{Error, Result};
use crate::reductions::{
    kcounts_from_count_oracle, shapley_from_kcount_oracle, shapley_value_from_kcount_oracle,
    CountOracle, KCountOracle, ShapleyOracle, Substitutable, SubstitutedQuery, SubstitutionClass,
};
use crate::{KCounts, Rational, ShapleyValues};

impl SubstitutionClass for Circuit {
    fn num_vars(&self) -> usize {
        Circuit::num_vars(self)
    }

    fn eval_all_zeros(&self) -> bool {
        self.eval_mask(0)
    }
}

impl Substitutable for Circuit {
    fn substituted(&self, kind: SubstKind, arities: &[usize]) -> Result<Self> {
        match kind {
            SubstKind::Or => Ok(or_substitute_circuit_all(self, arities)?.0),
            SubstKind::And => Err(Error::refusal(
                "circuits are only closed under OR-substitution",
            )),
        }
    }
}

/// How k-counts of a circuit are obtained.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum KCountMethod {
    /// `n + 1` model counts of OR-substituted circuits and a Vandermonde
    /// solve.
    #[default]
    Reduction,
    /// Size-generating polynomials propagated through the gates.
    Polynomial,
}

/// The circuit engine as an oracle: substitutes, then counts.
#[derive(Clone, Copy, Debug, Default)]
pub struct CircuitOracle {
    pub method: KCountMethod,
}

impl CircuitOracle {
    pub fn new(method: KCountMethod) -> Self {
        CircuitOracle { method }
    }
}

impl CountOracle<Circuit> for CircuitOracle {
    fn count(&mut self, q: &SubstitutedQuery<'_, Circuit>) -> Result<BigUint> {
        model_count_dd(&q.base.substituted(q.kind, &q.arities)?)
    }
}

impl KCountOracle<Circuit> for CircuitOracle {
    fn kcounts(&mut self, q: &SubstitutedQuery<'_, Circuit>) -> Result<KCounts> {
        let g = q.base.substituted(q.kind, &q.arities)?;
        kcounts_circuit(&g, self.method)
    }
}

impl ShapleyOracle<Circuit> for CircuitOracle {
    fn shapley(&mut self, q: &SubstitutedQuery<'_, Circuit>, var: VarId) -> Result<Rational> {
        let g = q.base.substituted(q.kind, &q.arities)?;
        shapley_value_from_kcount_oracle(&g, self, var)
    }
}

pub fn kcounts_circuit(c: &Circuit, method: KCountMethod) -> Result<KCounts> {
    match method {
        KCountMethod::Reduction => {
            let mut o = CircuitOracle::new(method);
            kcounts_from_count_oracle(c, &mut o)
        }
        KCountMethod::Polynomial => size_polynomial_count(c),
    }
}

/// Shapley values of all variables of a deterministic and decomposable
/// leaf-NNF circuit, through `n + 1` k-count queries on substituted circuits.
pub fn shapley_circuit(c: &Circuit, method: KCountMethod) -> Result<ShapleyValues> {
    let mut o = CircuitOracle::new(method);
    shapley_from_kcount_oracle(c, &mut o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brute::{brute_kcounts, brute_shapley_permutations, Bounds};
    use crate::circuit::tests::{example_circuit, mux_circuit};
    use crate::circuit::Gate;
    use crate::reductions::{count_from_shapley_oracle, CallCounter};

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p.into(), q.into())
    }

    #[test]
    fn kcount_examples_both_methods() {
        let one = Circuit::new(vec![Gate::Const(true)], 0, 2).unwrap();
        for m in [KCountMethod::Reduction, KCountMethod::Polynomial] {
            assert_eq!(
                kcounts_circuit(&example_circuit(), m).unwrap(),
                KCounts::from_u64(&[0, 1, 1, 1])
            );
            assert_eq!(
                kcounts_circuit(&one, m).unwrap(),
                KCounts::from_u64(&[1, 2, 1])
            );
            assert_eq!(
                kcounts_circuit(&mux_circuit(), m).unwrap(),
                KCounts::from_u64(&[0, 1, 2, 1])
            );
        }
    }

    #[test]
    fn shapley_examples() {
        for m in [KCountMethod::Reduction, KCountMethod::Polynomial] {
            assert_eq!(
                shapley_circuit(&example_circuit(), m).unwrap().values(),
                &[r(5, 6), r(2, 6), r(-1, 6)]
            );
            let zero = Circuit::new(vec![Gate::Const(false)], 0, 3).unwrap();
            assert_eq!(
                shapley_circuit(&zero, m).unwrap().values(),
                &vec![r(0, 1); 3][..]
            );
            let mux = mux_circuit();
            let b = Bounds::default();
            assert_eq!(
                shapley_circuit(&mux, m).unwrap(),
                brute_shapley_permutations(&mux.to_boolfunc().unwrap(), &b).unwrap()
            );
            assert_eq!(
                kcounts_circuit(&mux, m).unwrap(),
                brute_kcounts(&mux.to_boolfunc().unwrap(), &b).unwrap()
            );
        }
    }

    #[test]
    fn count_from_circuit_shapley_oracle() {
        let mut o = CallCounter::new(CircuitOracle::new(KCountMethod::Polynomial));
        assert_eq!(
            count_from_shapley_oracle(&example_circuit(), &mut o).unwrap(),
            BigUint::from(3u32)
        );
        assert_eq!(o.calls, 9);
    }

    #[test]
    fn and_substitution_refused() {
        let mut o = CircuitOracle::default();
        let c = example_circuit();
        let q = SubstitutedQuery::uniform(&c, SubstKind::And, 2);
        assert!(matches!(o.count(&q), Err(Error::Refusal(_))));
    }
}
