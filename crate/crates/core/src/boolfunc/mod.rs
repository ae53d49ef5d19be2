//! Boolean functions as expression trees over densely numbered variables.

mod dimacs;
mod dnf;
mod subst;
mod text;

use std::fmt;

use crate::error::{Error, Result};

pub use dimacs::{parse_dimacs, DimacsKind};
pub use dnf::{clause_set, dnf_distribute, dnf_distribute_bounded, from_clause_set, ClauseSet};
pub use subst::{Renaming, SubstKind, Substitution, VariableMap};
pub use text::{parse_formula, parse_sexpr, to_text};

/// Dense variable index `0..n`.
pub type VarId = usize;

/// A variable with an optional human-readable label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub id: VarId,
    pub label: Option<String>,
}

/// Expression node. `And`/`Or` carry at least two children once validated by
/// [`BoolFunc::new`]; the smart constructors [`Expr::and`] and [`Expr::or`]
/// collapse the degenerate cases.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(bool),
    Var(VarId),
    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
}

impl Expr {
    pub fn var(id: VarId) -> Self {
        Expr::Var(id)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: Expr) -> Self {
        Expr::Not(Box::new(e))
    }

    /// Conjunction; the empty conjunction is `1`, a singleton is its child.
    pub fn and(mut children: Vec<Expr>) -> Self {
        match children.len() {
            0 => Expr::Const(true),
            1 => children.pop().unwrap(),
            _ => Expr::And(children),
        }
    }

    /// Disjunction; the empty disjunction is `0`, a singleton is its child.
    pub fn or(mut children: Vec<Expr>) -> Self {
        match children.len() {
            0 => Expr::Const(false),
            1 => children.pop().unwrap(),
            _ => Expr::Or(children),
        }
    }

    pub fn eval_with(&self, value_of: &impl Fn(VarId) -> bool) -> bool {
        match self {
            Expr::Const(b) => *b,
            Expr::Var(v) => value_of(*v),
            Expr::Not(e) => !e.eval_with(value_of),
            Expr::And(cs) => cs.iter().all(|c| c.eval_with(value_of)),
            Expr::Or(cs) => cs.iter().any(|c| c.eval_with(value_of)),
        }
    }

    /// Evaluates with bit `i` of `mask` as the value of variable `i`.
    pub fn eval_mask(&self, mask: u64) -> bool {
        self.eval_with(&|v| (mask >> v) & 1 == 1)
    }

    /// Largest variable id, if any variable occurs.
    pub fn max_var(&self) -> Option<VarId> {
        match self {
            Expr::Const(_) => None,
            Expr::Var(v) => Some(*v),
            Expr::Not(e) => e.max_var(),
            Expr::And(cs) | Expr::Or(cs) => cs.iter().filter_map(Expr::max_var).max(),
        }
    }

    pub fn visit_vars(&self, f: &mut impl FnMut(VarId)) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(v) => f(*v),
            Expr::Not(e) => e.visit_vars(f),
            Expr::And(cs) | Expr::Or(cs) => cs.iter().for_each(|c| c.visit_vars(f)),
        }
    }

    /// Occurrences of variables and constants plus connectors, with n-ary
    /// connectors counted as `children - 1` binary ones.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Not(e) => 1 + e.size(),
            Expr::And(cs) | Expr::Or(cs) => {
                cs.len().saturating_sub(1) + cs.iter().map(Expr::size).sum::<usize>()
            }
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        match self {
            Expr::Const(_) => Ok(()),
            Expr::Var(v) if *v < n => Ok(()),
            Expr::Var(v) => Err(Error::input(format!(
                "variable x{} out of range for {n} variables",
                v + 1
            ))),
            Expr::Not(e) => e.check(n),
            Expr::And(cs) | Expr::Or(cs) => {
                if cs.len() < 2 {
                    return Err(Error::input("and/or nodes need at least two children"));
                }
                cs.iter().try_for_each(|c| c.check(n))
            }
        }
    }
}

/// A Boolean function over `num_vars` variables.
///
/// Variables that do not occur in the expression still count: the function
/// `0` over three variables differs from `0` over none when counting models.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolFunc {
    expr: Expr,
    num_vars: usize,
    labels: Option<Vec<String>>,
}

impl BoolFunc {
    pub fn new(expr: Expr, num_vars: usize) -> Result<Self> {
        expr.check(num_vars)?;
        Ok(BoolFunc {
            expr,
            num_vars,
            labels: None,
        })
    }

    /// Builds a function whose variable count is the largest occurring id + 1.
    pub fn from_expr(expr: Expr) -> Result<Self> {
        let n = expr.max_var().map_or(0, |v| v + 1);
        Self::new(expr, n)
    }

    pub fn constant(value: bool, num_vars: usize) -> Self {
        BoolFunc {
            expr: Expr::Const(value),
            num_vars,
            labels: None,
        }
    }

    /// Attaches unique labels, one per variable.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.num_vars {
            return Err(Error::input(format!(
                "{} labels for {} variables",
                labels.len(),
                self.num_vars
            )));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(Error::input(format!("duplicate variable label {dup:?}")));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn variable(&self, id: VarId) -> Variable {
        Variable {
            id,
            label: self.labels.as_ref().map(|l| l[id].clone()),
        }
    }

    pub fn size(&self) -> usize {
        self.expr.size()
    }

    pub fn evaluate(&self, theta: &Valuation) -> Result<bool> {
        if theta.len() != self.num_vars {
            return Err(Error::input(format!(
                "valuation over {} variables for a function over {}",
                theta.len(),
                self.num_vars
            )));
        }
        Ok(self.expr.eval_with(&|v| theta.get(v)))
    }

    /// `F[1]`.
    pub fn eval_all_ones(&self) -> bool {
        self.expr.eval_with(&|_| true)
    }

    /// `F[0]`.
    pub fn eval_all_zeros(&self) -> bool {
        self.expr.eval_with(&|_| false)
    }

    /// The cofactor `F[X_var := value]` over the remaining `n - 1` variables
    /// (ids above `var` shift down by one).
    pub fn restrict(&self, var: VarId, value: bool) -> Result<BoolFunc> {
        let mut sigma = Substitution::new(0);
        sigma.set(var, Expr::Const(value))?;
        Ok(self.apply_substitution(&sigma)?.0)
    }
}

/// A total assignment of `n` variables; equivalently the set `T` of variables
/// mapped to 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Valuation {
    bits: Vec<bool>,
}

impl Valuation {
    pub fn new(bits: Vec<bool>) -> Self {
        Valuation { bits }
    }

    pub fn zeros(n: usize) -> Self {
        Valuation {
            bits: vec![false; n],
        }
    }

    /// The valuation mapping exactly `ones` to 1.
    pub fn from_set(n: usize, ones: &[VarId]) -> Result<Self> {
        let mut bits = vec![false; n];
        for &v in ones {
            *bits
                .get_mut(v)
                .ok_or_else(|| Error::input(format!("variable {v} out of range")))? = true;
        }
        Ok(Valuation { bits })
    }

    pub fn from_mask(n: usize, mask: u64) -> Self {
        Valuation {
            bits: (0..n).map(|i| (mask >> i) & 1 == 1).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, v: VarId) -> bool {
        self.bits[v]
    }

    pub fn set(&mut self, v: VarId, value: bool) {
        self.bits[v] = value;
    }

    /// `|θ|`, the number of variables set to 1.
    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn ones(&self) -> Vec<VarId> {
        (0..self.bits.len()).filter(|&i| self.bits[i]).collect()
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.ones().iter().map(|v| format!("x{}", v + 1)).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

/// A bijection on `0..n`, read as an order in which variables join.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    order: Vec<VarId>,
}

impl Permutation {
    pub fn new(order: Vec<VarId>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &v in &order {
            match seen.get_mut(v) {
                Some(s) if !*s => *s = true,
                _ => return Err(Error::input(format!("{order:?} is not a permutation"))),
            }
        }
        Ok(Permutation { order })
    }

    pub fn order(&self) -> &[VarId] {
        &self.order
    }

    /// `Π^{<i}`: the variables placed before `var`.
    pub fn prefix_before(&self, var: VarId) -> &[VarId] {
        let pos = self
            .order
            .iter()
            .position(|&v| v == var)
            .expect("variable in permutation");
        &self.order[..pos]
    }
}
