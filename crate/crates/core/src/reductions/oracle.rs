use num_bigint::BigUint;

use crate::boolfunc::{SubstKind, VarId};
use crate::error::Result;
use crate::{KCounts, Rational};

/// What a reduction needs to know about a function of the class without
/// looking inside it.
pub trait SubstitutionClass {
    fn num_vars(&self) -> usize;

    /// `F[0]`.
    fn eval_all_zeros(&self) -> bool;
}

impl SubstitutionClass for crate::BoolFunc {
    fn num_vars(&self) -> usize {
        crate::BoolFunc::num_vars(self)
    }

    fn eval_all_zeros(&self) -> bool {
        crate::BoolFunc::eval_all_zeros(self)
    }
}

/// Classes whose members can be rewritten under a uniform substitution.
pub trait Substitutable: SubstitutionClass + Sized {
    fn substituted(&self, kind: SubstKind, arities: &[usize]) -> Result<Self>;
}

impl Substitutable for crate::BoolFunc {
    fn substituted(&self, kind: SubstKind, arities: &[usize]) -> Result<Self> {
        Ok(self.uniform_substitute(arities, kind)?.0)
    }
}

/// `base[X_i := Z_i^1 ∘ … ∘ Z_i^{m_i}]` with `∘` the connective of `kind`.
///
/// New variables are numbered group by group: the group of `X_i` starts at
/// `Σ_{p<i} m_p`.
#[derive(Clone, Debug)]
pub struct SubstitutedQuery<'a, F: ?Sized> {
    pub base: &'a F,
    pub kind: SubstKind,
    pub arities: Vec<usize>,
}

impl<'a, F: SubstitutionClass + ?Sized> SubstitutedQuery<'a, F> {
    pub fn new(base: &'a F, kind: SubstKind, arities: Vec<usize>) -> Self {
        SubstitutedQuery {
            base,
            kind,
            arities,
        }
    }

    /// Every arity equal to `ell`.
    pub fn uniform(base: &'a F, kind: SubstKind, ell: usize) -> Self {
        let n = base.num_vars();
        SubstitutedQuery::new(base, kind, vec![ell; n])
    }

    pub fn num_new_vars(&self) -> usize {
        self.arities.iter().sum()
    }

    pub fn group_start(&self, source: VarId) -> VarId {
        self.arities[..source].iter().sum()
    }
}

/// `#` of a substituted function.
pub trait CountOracle<F: ?Sized> {
    fn count(&mut self, query: &SubstitutedQuery<'_, F>) -> Result<BigUint>;
}

/// `#_{0..N}` of a substituted function.
pub trait KCountOracle<F: ?Sized> {
    fn kcounts(&mut self, query: &SubstitutedQuery<'_, F>) -> Result<KCounts>;
}

/// `Shap(G, Z)` for a substituted function `G` and one of its new variables.
pub trait ShapleyOracle<F: ?Sized> {
    fn shapley(&mut self, query: &SubstitutedQuery<'_, F>, var: VarId) -> Result<Rational>;
}

impl<F: ?Sized, O> CountOracle<F> for O
where
    O: FnMut(&SubstitutedQuery<'_, F>) -> Result<BigUint>,
{
    fn count(&mut self, query: &SubstitutedQuery<'_, F>) -> Result<BigUint> {
        self(query)
    }
}

/// Counts the calls made to the wrapped oracle.
#[derive(Clone, Debug, Default)]
pub struct CallCounter<O> {
    pub inner: O,
    pub calls: usize,
}

impl<O> CallCounter<O> {
    pub fn new(inner: O) -> Self {
        CallCounter { inner, calls: 0 }
    }
}

impl<F: ?Sized, O: CountOracle<F>> CountOracle<F> for CallCounter<O> {
    fn count(&mut self, query: &SubstitutedQuery<'_, F>) -> Result<BigUint> {
        self.calls += 1;
        self.inner.count(query)
    }
}

impl<F: ?Sized, O: KCountOracle<F>> KCountOracle<F> for CallCounter<O> {
    fn kcounts(&mut self, query: &SubstitutedQuery<'_, F>) -> Result<KCounts> {
        self.calls += 1;
        self.inner.kcounts(query)
    }
}

impl<F: ?Sized, O: ShapleyOracle<F>> ShapleyOracle<F> for CallCounter<O> {
    fn shapley(&mut self, query: &SubstitutedQuery<'_, F>, var: VarId) -> Result<Rational> {
        self.calls += 1;
        self.inner.shapley(query, var)
    }
}
