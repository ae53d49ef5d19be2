//! Disjunctive normal forms: distributing OR-substituted clauses and
//! comparing positive DNFs as clause sets.

use std::collections::BTreeSet;

use super::{BoolFunc, Expr, VarId};
use crate::error::{Error, Result};

/// A positive DNF as a set of clauses, each a sorted, duplicate-free list of
/// variables. `{}` is the constant 0 and `{[]}` the constant 1.
pub type ClauseSet = BTreeSet<Vec<VarId>>;

/// A literal inside a distributed clause: variable and polarity.
type Lit = (VarId, bool);

/// Distributes `∧` over `∨` in a disjunction of conjunctions of disjunctions
/// of literals, the shape of a DNF clause after OR-substitution.
pub fn dnf_distribute(f: &BoolFunc) -> Result<BoolFunc> {
    dnf_distribute_bounded(f, usize::MAX)
}

/// [`dnf_distribute`] refusing to build more than `max_clauses` clauses.
pub fn dnf_distribute_bounded(f: &BoolFunc, max_clauses: usize) -> Result<BoolFunc> {
    let clauses = distribute(f.expr(), max_clauses)?;
    let expr = Expr::or(
        clauses
            .into_iter()
            .map(|c| Expr::and(c.into_iter().map(lit_expr).collect()))
            .collect(),
    );
    BoolFunc::new(expr, f.num_vars())
}

fn lit_expr((v, positive): Lit) -> Expr {
    if positive {
        Expr::Var(v)
    } else {
        Expr::not(Expr::Var(v))
    }
}

fn distribute(top: &Expr, max_clauses: usize) -> Result<BTreeSet<Vec<Lit>>> {
    let items: &[Expr] = match top {
        Expr::Or(cs) => cs,
        other => std::slice::from_ref(other),
    };
    let mut out = BTreeSet::new();
    for item in items {
        let conjuncts: &[Expr] = match item {
            Expr::And(cs) => cs,
            other => std::slice::from_ref(other),
        };
        let mut partial: Vec<Vec<Lit>> = vec![Vec::new()];
        for conjunct in conjuncts {
            if *conjunct == Expr::Const(true) {
                continue;
            }
            let options = disjunction_literals(conjunct)?;
            let mut next = Vec::with_capacity(partial.len() * options.len());
            for p in &partial {
                for &lit in &options {
                    let mut c = p.clone();
                    c.push(lit);
                    next.push(c);
                }
            }
            if out.len() + next.len() > max_clauses {
                return Err(Error::refusal(format!(
                    "distribution exceeds the clause bound {max_clauses}"
                )));
            }
            partial = next;
        }
        for mut c in partial {
            c.sort_unstable();
            c.dedup();
            out.insert(c);
        }
        if out.len() > max_clauses {
            return Err(Error::refusal(format!(
                "distribution exceeds the clause bound {max_clauses}"
            )));
        }
    }
    Ok(out)
}

/// Literal options of one conjunct; the constant 0 has none.
fn disjunction_literals(e: &Expr) -> Result<Vec<Lit>> {
    match e {
        Expr::Var(v) => Ok(vec![(*v, true)]),
        Expr::Not(inner) => match inner.as_ref() {
            Expr::Var(v) => Ok(vec![(*v, false)]),
            _ => Err(Error::input("negation must apply to a variable")),
        },
        Expr::Const(false) => Ok(Vec::new()),
        Expr::Or(cs) => {
            let mut lits = Vec::with_capacity(cs.len());
            for c in cs {
                match c {
                    Expr::Const(false) => {}
                    other => lits.extend(disjunction_literals(other).and_then(|l| {
                        if l.len() == 1 {
                            Ok(l)
                        } else {
                            Err(Error::input("nested disjunction must hold literals"))
                        }
                    })?),
                }
            }
            Ok(lits)
        }
        _ => Err(Error::input(
            "expected a disjunction of conjunctions of disjunctions of literals",
        )),
    }
}

/// Reads a positive DNF (an `Or` of `And`s of variables, or any degenerate
/// form of it) as a clause set.
pub fn clause_set(f: &BoolFunc) -> Result<ClauseSet> {
    match f.expr() {
        Expr::Const(true) => return Ok(BTreeSet::from([Vec::new()])),
        Expr::Const(false) => return Ok(BTreeSet::new()),
        _ => {}
    }
    let clauses = distribute(f.expr(), usize::MAX)?;
    clauses
        .into_iter()
        .map(|c| {
            c.into_iter()
                .map(|(v, pos)| {
                    pos.then_some(v)
                        .ok_or_else(|| Error::input("clause set needs a positive DNF"))
                })
                .collect()
        })
        .collect()
}

/// Builds `⋁_c ⋀_{v∈c} v` over `num_vars` variables.
pub fn from_clause_set(num_vars: usize, clauses: &ClauseSet) -> Result<BoolFunc> {
    if clauses.iter().any(Vec::is_empty) {
        return Ok(BoolFunc::constant(true, num_vars));
    }
    let expr = Expr::or(
        clauses
            .iter()
            .map(|c| Expr::and(c.iter().map(|&v| Expr::Var(v)).collect()))
            .collect(),
    );
    BoolFunc::new(expr, num_vars)
}
