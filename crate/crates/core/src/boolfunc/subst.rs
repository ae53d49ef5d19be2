use std::collections::BTreeMap;
use std::ops::Range;

use super::{BoolFunc, Expr, VarId};
use crate::error::{Error, Result};

/// A substitution `σ` on the variables of a function over `n` variables.
///
/// Replacement expressions live in a joint id space: ids `0..n` are the
/// original variables, ids `n..n + num_fresh` are the fresh ones. Replacements
/// may only mention fresh ids; unmapped originals map to themselves.
#[derive(Clone, Debug, Default)]
pub struct Substitution {
    replacements: BTreeMap<VarId, Expr>,
    num_fresh: usize,
}

impl Substitution {
    pub fn new(num_fresh: usize) -> Self {
        Substitution {
            replacements: BTreeMap::new(),
            num_fresh,
        }
    }

    pub fn num_fresh(&self) -> usize {
        self.num_fresh
    }

    pub fn set(&mut self, var: VarId, replacement: Expr) -> Result<()> {
        if self.replacements.insert(var, replacement).is_some() {
            return Err(Error::input(format!("x{} substituted twice", var + 1)));
        }
        Ok(())
    }

    pub fn get(&self, var: VarId) -> Option<&Expr> {
        self.replacements.get(&var)
    }
}

/// Where the variables of `F[σ]` came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Renaming {
    /// Old id → new id, `None` for substituted-away variables.
    pub kept: Vec<Option<VarId>>,
    /// Fresh index `j` (joint id `n + j`) → new id.
    pub fresh: Vec<VarId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubstKind {
    Or,
    And,
}

/// Variable map of a uniform OR/AND-substitution: the fresh variables of
/// source variable `i` are the contiguous block `groups[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableMap {
    sources: Vec<VarId>,
    groups: Vec<Range<VarId>>,
}

impl VariableMap {
    pub fn from_arities(arities: &[usize]) -> Self {
        let mut sources = Vec::new();
        let mut groups = Vec::with_capacity(arities.len());
        for (i, &m) in arities.iter().enumerate() {
            let start = sources.len();
            sources.extend(std::iter::repeat(i).take(m));
            groups.push(start..sources.len());
        }
        VariableMap { sources, groups }
    }

    /// Source variable of new variable `z`.
    pub fn source(&self, z: VarId) -> VarId {
        self.sources[z]
    }

    /// New variables replacing source variable `x`.
    pub fn group(&self, x: VarId) -> Range<VarId> {
        self.groups[x].clone()
    }

    pub fn num_new(&self) -> usize {
        self.sources.len()
    }

    pub fn num_sources(&self) -> usize {
        self.groups.len()
    }
}

impl BoolFunc {
    /// `F[σ]`, re-densified: surviving originals keep their relative order and
    /// come first, fresh variables follow in fresh-index order.
    pub fn apply_substitution(&self, sigma: &Substitution) -> Result<(BoolFunc, Renaming)> {
        let n = self.num_vars();
        let total = n + sigma.num_fresh;
        for (&var, repl) in &sigma.replacements {
            if var >= n {
                return Err(Error::input(format!(
                    "substitution for x{} but the function has {n} variables",
                    var + 1
                )));
            }
            let mut bad = None;
            repl.visit_vars(&mut |v| {
                if v < n || v >= total {
                    bad.get_or_insert(v);
                }
            });
            if let Some(v) = bad {
                return Err(Error::input(if v < n {
                    format!(
                        "replacement for x{} reuses original variable x{}",
                        var + 1,
                        v + 1
                    )
                } else {
                    format!("replacement for x{} uses undeclared fresh id {v}", var + 1)
                }));
            }
        }

        let mut kept = vec![None; n];
        let mut next = 0;
        for (old, slot) in kept.iter_mut().enumerate() {
            if !sigma.replacements.contains_key(&old) {
                *slot = Some(next);
                next += 1;
            }
        }
        let fresh: Vec<VarId> = (next..next + sigma.num_fresh).collect();
        let rename = |v: VarId| -> VarId {
            if v < n {
                kept[v].expect("kept variable")
            } else {
                fresh[v - n]
            }
        };
        let expr = substitute(self.expr(), sigma, &rename);
        let out = BoolFunc::new(expr, next + sigma.num_fresh)?;
        Ok((out, Renaming { kept, fresh }))
    }

    /// `F[X_i := Z_i^1 ∨ … ∨ Z_i^{m_i}]` for all `i`; `m_i = 0` maps `X_i` to 0.
    pub fn or_substitute(&self, arities: &[usize]) -> Result<(BoolFunc, VariableMap)> {
        self.uniform_substitute(arities, SubstKind::Or)
    }

    /// `F[X_i := Z_i^1 ∧ … ∧ Z_i^{m_i}]` for all `i`; `m_i = 0` maps `X_i` to 1.
    pub fn and_substitute(&self, arities: &[usize]) -> Result<(BoolFunc, VariableMap)> {
        self.uniform_substitute(arities, SubstKind::And)
    }

    pub fn uniform_substitute(
        &self,
        arities: &[usize],
        kind: SubstKind,
    ) -> Result<(BoolFunc, VariableMap)> {
        let n = self.num_vars();
        if arities.len() != n {
            return Err(Error::input(format!(
                "{} arities for a function over {n} variables",
                arities.len()
            )));
        }
        let map = VariableMap::from_arities(arities);
        let mut sigma = Substitution::new(map.num_new());
        for i in 0..n {
            let lits: Vec<Expr> = map.group(i).map(|z| Expr::Var(n + z)).collect();
            let repl = match kind {
                SubstKind::Or => Expr::or(lits),
                SubstKind::And => Expr::and(lits),
            };
            sigma.set(i, repl)?;
        }
        let (f, _) = self.apply_substitution(&sigma)?;
        Ok((f, map))
    }
}

fn substitute(expr: &Expr, sigma: &Substitution, rename: &impl Fn(VarId) -> VarId) -> Expr {
    match expr {
        Expr::Const(b) => Expr::Const(*b),
        Expr::Var(v) => match sigma.get(*v) {
            Some(repl) => rename_all(repl, rename),
            None => Expr::Var(rename(*v)),
        },
        Expr::Not(e) => Expr::not(substitute(e, sigma, rename)),
        Expr::And(cs) => Expr::And(splice(cs, sigma, rename, true)),
        Expr::Or(cs) => Expr::Or(splice(cs, sigma, rename, false)),
    }
}

/// Substitutes children, flattening replacements of the same connective
/// directly into the parent, e.g. `X1 ∧ (X2 ∨ ¬X3)` under `X2 := Z1 ∨ Z2`
/// becomes `X1 ∧ (Z1 ∨ Z2 ∨ ¬X3)`.
fn splice(
    children: &[Expr],
    sigma: &Substitution,
    rename: &impl Fn(VarId) -> VarId,
    is_and: bool,
) -> Vec<Expr> {
    let mut out = Vec::with_capacity(children.len());
    for c in children {
        let replaced_var = matches!(c, Expr::Var(v) if sigma.get(*v).is_some());
        let s = substitute(c, sigma, rename);
        match s {
            Expr::And(gs) if replaced_var && is_and => out.extend(gs),
            Expr::Or(gs) if replaced_var && !is_and => out.extend(gs),
            other => out.push(other),
        }
    }
    out
}

fn rename_all(expr: &Expr, rename: &impl Fn(VarId) -> VarId) -> Expr {
    match expr {
        Expr::Const(b) => Expr::Const(*b),
        Expr::Var(v) => Expr::Var(rename(*v)),
        Expr::Not(e) => Expr::not(rename_all(e, rename)),
        Expr::And(cs) => Expr::And(cs.iter().map(|c| rename_all(c, rename)).collect()),
        Expr::Or(cs) => Expr::Or(cs.iter().map(|c| rename_all(c, rename)).collect()),
    }
}
