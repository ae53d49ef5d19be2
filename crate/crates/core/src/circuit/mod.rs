//! Boolean circuits, with counting and Shapley values for the deterministic
//! and decomposable ones.

mod count;
mod nnf;
mod random;
mod shapley;
mod subst;
mod validate;

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::boolfunc::{BoolFunc, Expr, VarId};
use crate::error::{Error, Result};

pub use count::{model_count_dd, propagate_constants, size_polynomial, size_polynomial_count};
pub use nnf::{parse_nnf, write_nnf};
pub use random::random_dd_circuit;
pub use shapley::{kcounts_circuit, shapley_circuit, CircuitOracle, KCountMethod};
pub use subst::{or_substitute_circuit, or_substitute_circuit_all, GROWTH_CONSTANT};
pub use validate::{
    check_decomposable, check_deterministic_exhaustive, validate, ValidationReport,
    DEFAULT_DETERMINISM_BOUND,
};

pub type GateId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    Const(bool),
    Var(VarId),
    Not(GateId),
    And(Vec<GateId>),
    Or(Vec<GateId>),
}

impl Gate {
    pub fn inputs(&self) -> &[GateId] {
        match self {
            Gate::Const(_) | Gate::Var(_) => &[],
            Gate::Not(g) => std::slice::from_ref(g),
            Gate::And(gs) | Gate::Or(gs) => gs,
        }
    }

    fn remap(&self, map: &[GateId]) -> Gate {
        match self {
            Gate::Const(b) => Gate::Const(*b),
            Gate::Var(v) => Gate::Var(*v),
            Gate::Not(g) => Gate::Not(map[*g]),
            Gate::And(gs) => Gate::And(gs.iter().map(|g| map[*g]).collect()),
            Gate::Or(gs) => Gate::Or(gs.iter().map(|g| map[*g]).collect()),
        }
    }
}

/// What is known about determinism of the ∨-gates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Determinism {
    Unchecked,
    /// Built by a construction that is deterministic by design.
    Certified,
    /// Checked on every valuation.
    Verified,
    /// Too many variables to check; taken on trust.
    Assumed,
    /// A valuation making two inputs of one ∨-gate true.
    Refuted {
        gate: GateId,
        witness: Vec<VarId>,
    },
}

impl Determinism {
    pub fn is_refuted(&self) -> bool {
        matches!(self, Determinism::Refuted { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Determinism::Unchecked => "unchecked",
            Determinism::Certified => "certified",
            Determinism::Verified => "verified",
            Determinism::Assumed => "assumed",
            Determinism::Refuted { .. } => "refuted",
        }
    }
}

/// A DAG of gates in topological order: every input of gate `g` has an
/// index below `g`, and the output is the last gate. Gates not reachable
/// from the output are dropped on construction.
#[derive(Clone, Debug)]
pub struct Circuit {
    gates: Vec<Gate>,
    num_vars: usize,
    scopes: Vec<FixedBitSet>,
    determinism: Determinism,
}

impl PartialEq for Circuit {
    fn eq(&self, other: &Self) -> bool {
        self.gates == other.gates && self.num_vars == other.num_vars
    }
}

impl Circuit {
    pub fn new(gates: Vec<Gate>, output: GateId, num_vars: usize) -> Result<Self> {
        if output >= gates.len() {
            return Err(Error::input(format!(
                "output gate {output} out of range for {} gates",
                gates.len()
            )));
        }
        for (id, gate) in gates.iter().enumerate() {
            match gate {
                Gate::Var(v) if *v >= num_vars => {
                    return Err(Error::input(format!(
                        "gate {id} reads x{} but the circuit has {num_vars} variables",
                        v + 1
                    )))
                }
                Gate::And(gs) | Gate::Or(gs) if gs.len() < 2 => {
                    return Err(Error::input(format!(
                        "gate {id} has {} inputs, connectives need at least 2",
                        gs.len()
                    )))
                }
                _ => {}
            }
            if let Some(&bad) = gate.inputs().iter().find(|&&g| g >= id) {
                return Err(Error::input(format!(
                    "gate {id} reads gate {bad}: inputs must come earlier (cycle or forward reference)"
                )));
            }
        }

        // keep only what the output reaches, preserving order
        let mut live = vec![false; gates.len()];
        live[output] = true;
        for id in (0..=output).rev() {
            if live[id] {
                for &g in gates[id].inputs() {
                    live[g] = true;
                }
            }
        }
        let mut map = vec![usize::MAX; gates.len()];
        let mut kept = Vec::new();
        for (id, gate) in gates.iter().enumerate().take(output + 1) {
            if live[id] {
                map[id] = kept.len();
                kept.push(gate.remap(&map));
            }
        }

        let scopes = compute_scopes(&kept, num_vars);
        Ok(Circuit {
            gates: kept,
            num_vars,
            scopes,
            determinism: Determinism::Unchecked,
        })
    }

    /// A formula as a tree-shaped circuit. Determinism is not checked.
    pub fn from_boolfunc(f: &BoolFunc) -> Result<Self> {
        let mut b = CircuitBuilder::new();
        let out = b.expr(f.expr());
        b.finish(out, f.num_vars())
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate(&self, id: GateId) -> &Gate {
        &self.gates[id]
    }

    pub fn output(&self) -> GateId {
        self.gates.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// `|G|`, the number of gates.
    pub fn size(&self) -> usize {
        self.gates.len()
    }

    pub fn num_edges(&self) -> usize {
        self.gates.iter().map(|g| g.inputs().len()).sum()
    }

    /// Variables below gate `id`.
    pub fn scope(&self, id: GateId) -> &FixedBitSet {
        &self.scopes[id]
    }

    pub fn determinism(&self) -> &Determinism {
        &self.determinism
    }

    pub fn with_determinism(mut self, d: Determinism) -> Self {
        self.determinism = d;
        self
    }

    pub fn set_determinism(&mut self, d: Determinism) {
        self.determinism = d;
    }

    /// Negation only directly above variables.
    pub fn is_leaf_nnf(&self) -> bool {
        self.gates
            .iter()
            .all(|g| !matches!(g, Gate::Not(c) if !matches!(self.gates[*c], Gate::Var(_))))
    }

    /// Literal gates of variable `v`: `Var(v)` and `Not(Var(v))`.
    pub fn occurrences(&self, v: VarId) -> usize {
        self.gates
            .iter()
            .filter(|g| match g {
                Gate::Var(x) => *x == v,
                Gate::Not(c) => self.gates[*c] == Gate::Var(v),
                _ => false,
            })
            .count()
    }

    /// Value of every gate under the valuation given by `value_of`.
    pub fn eval_gates(&self, value_of: impl Fn(VarId) -> bool) -> Vec<bool> {
        let mut vals: Vec<bool> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let v = match g {
                Gate::Const(b) => *b,
                Gate::Var(x) => value_of(*x),
                Gate::Not(c) => !vals[*c],
                Gate::And(cs) => cs.iter().all(|c| vals[*c]),
                Gate::Or(cs) => cs.iter().any(|c| vals[*c]),
            };
            vals.push(v);
        }
        vals
    }

    pub fn eval_mask(&self, mask: u64) -> bool {
        *self
            .eval_gates(|v| mask >> v & 1 == 1)
            .last()
            .expect("nonempty circuit")
    }

    /// The function computed, unfolded into a tree.
    pub fn to_boolfunc(&self) -> Result<BoolFunc> {
        let mut exprs: Vec<Expr> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let e = match g {
                Gate::Const(b) => Expr::Const(*b),
                Gate::Var(v) => Expr::Var(*v),
                Gate::Not(c) => Expr::not(exprs[*c].clone()),
                Gate::And(cs) => Expr::And(cs.iter().map(|c| exprs[*c].clone()).collect()),
                Gate::Or(cs) => Expr::Or(cs.iter().map(|c| exprs[*c].clone()).collect()),
            };
            exprs.push(e);
        }
        BoolFunc::new(exprs.pop().expect("nonempty circuit"), self.num_vars)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (id, g) in self.gates.iter().enumerate() {
            writeln!(f, "{id}: {g:?}")?;
        }
        Ok(())
    }
}

fn compute_scopes(gates: &[Gate], n: usize) -> Vec<FixedBitSet> {
    let mut scopes: Vec<FixedBitSet> = Vec::with_capacity(gates.len());
    for g in gates {
        let mut s = FixedBitSet::with_capacity(n);
        match g {
            Gate::Var(v) => s.insert(*v),
            _ => {
                for &c in g.inputs() {
                    s.union_with(&scopes[c]);
                }
            }
        }
        scopes.push(s);
    }
    scopes
}

/// Incremental construction with one shared gate per variable literal.
#[derive(Clone, Debug, Default)]
pub struct CircuitBuilder {
    gates: Vec<Gate>,
    vars: std::collections::HashMap<VarId, GateId>,
    negs: std::collections::HashMap<VarId, GateId>,
    consts: [Option<GateId>; 2],
}

impl CircuitBuilder {
    pub fn new() -> Self {
        CircuitBuilder::default()
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> GateId {
        self.gates.push(gate);
        self.gates.len() - 1
    }

    pub fn constant(&mut self, value: bool) -> GateId {
        let slot = value as usize;
        if let Some(g) = self.consts[slot] {
            return g;
        }
        let g = self.push(Gate::Const(value));
        self.consts[slot] = Some(g);
        g
    }

    pub fn var(&mut self, v: VarId) -> GateId {
        if let Some(&g) = self.vars.get(&v) {
            return g;
        }
        let g = self.push(Gate::Var(v));
        self.vars.insert(v, g);
        g
    }

    pub fn neg_var(&mut self, v: VarId) -> GateId {
        if let Some(&g) = self.negs.get(&v) {
            return g;
        }
        let x = self.var(v);
        let g = self.push(Gate::Not(x));
        self.negs.insert(v, g);
        g
    }

    pub fn literal(&mut self, v: VarId, positive: bool) -> GateId {
        if positive {
            self.var(v)
        } else {
            self.neg_var(v)
        }
    }

    pub fn not(&mut self, g: GateId) -> GateId {
        match self.gates[g] {
            Gate::Var(v) => self.neg_var(v),
            _ => self.push(Gate::Not(g)),
        }
    }

    /// Conjunction; no inputs gives 1, one input is returned as is.
    pub fn and(&mut self, inputs: Vec<GateId>) -> GateId {
        match inputs.len() {
            0 => self.constant(true),
            1 => inputs[0],
            _ => self.push(Gate::And(inputs)),
        }
    }

    /// Disjunction; no inputs gives 0, one input is returned as is.
    pub fn or(&mut self, inputs: Vec<GateId>) -> GateId {
        match inputs.len() {
            0 => self.constant(false),
            1 => inputs[0],
            _ => self.push(Gate::Or(inputs)),
        }
    }

    pub fn expr(&mut self, e: &Expr) -> GateId {
        match e {
            Expr::Const(b) => self.constant(*b),
            Expr::Var(v) => self.var(*v),
            Expr::Not(c) => {
                let g = self.expr(c);
                self.not(g)
            }
            Expr::And(cs) => {
                let gs = cs.iter().map(|c| self.expr(c)).collect();
                self.and(gs)
            }
            Expr::Or(cs) => {
                let gs = cs.iter().map(|c| self.expr(c)).collect();
                self.or(gs)
            }
        }
    }

    pub fn finish(self, output: GateId, num_vars: usize) -> Result<Circuit> {
        Circuit::new(self.gates, output, num_vars)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// `X1 ∧ (X2 ∨ (¬X2 ∧ ¬X3))`, a d-D encoding of `X1 ∧ (X2 ∨ ¬X3)`.
    pub(crate) fn example_circuit() -> Circuit {
        let mut b = CircuitBuilder::new();
        let x1 = b.var(0);
        let x2 = b.var(1);
        let n2 = b.neg_var(1);
        let n3 = b.neg_var(2);
        let inner = b.and(vec![n2, n3]);
        let or = b.or(vec![x2, inner]);
        let out = b.and(vec![x1, or]);
        b.finish(out, 3).unwrap()
    }

    /// `(¬X1 ∧ X2) ∨ (X1 ∧ X3)`.
    pub(crate) fn mux_circuit() -> Circuit {
        let mut b = CircuitBuilder::new();
        let n1 = b.neg_var(0);
        let x2 = b.var(1);
        let x1 = b.var(0);
        let x3 = b.var(2);
        let l = b.and(vec![n1, x2]);
        let r = b.and(vec![x1, x3]);
        let out = b.or(vec![l, r]);
        b.finish(out, 3).unwrap()
    }

    #[test]
    fn scopes_and_shape() {
        let c = example_circuit();
        assert_eq!(c.size(), 8);
        assert_eq!(
            c.scope(c.output()).ones().collect::<Vec<_>>(),
            vec![0, 1, 2]
        );
        assert!(c.is_leaf_nnf());
        assert_eq!(c.occurrences(1), 2);
    }

    #[test]
    fn unreachable_gates_are_dropped() {
        let c = Circuit::new(
            vec![
                Gate::Var(0),
                Gate::Var(1),
                Gate::Var(2),
                Gate::And(vec![0, 2]),
            ],
            3,
            3,
        )
        .unwrap();
        assert_eq!(
            c.gates(),
            &[Gate::Var(0), Gate::Var(2), Gate::And(vec![0, 1])]
        );
    }

    #[test]
    fn malformed_circuits_rejected() {
        assert!(Circuit::new(vec![Gate::Var(3)], 0, 3).is_err());
        assert!(Circuit::new(vec![Gate::Var(0), Gate::And(vec![0])], 1, 1).is_err());
        assert!(Circuit::new(vec![Gate::Not(0)], 0, 1).is_err());
        assert!(Circuit::new(vec![Gate::Var(0), Gate::Not(2), Gate::Not(1)], 2, 1).is_err());
    }

    #[test]
    fn unfolding_agrees_with_evaluation() {
        for c in [example_circuit(), mux_circuit()] {
            let f = c.to_boolfunc().unwrap();
            for m in 0..8 {
                assert_eq!(c.eval_mask(m), f.expr().eval_mask(m));
            }
        }
        let f = crate::boolfunc::parse_formula("(and x1 (or x2 (not x3)))").unwrap();
        let c = example_circuit();
        for m in 0..8 {
            assert_eq!(c.eval_mask(m), f.expr().eval_mask(m));
        }
    }

    #[test]
    fn builder_degenerate_connectives() {
        let mut b = CircuitBuilder::new();
        let t = b.and(vec![]);
        assert_eq!(b.or(vec![t]), t);
        let f = b.or(vec![]);
        let c = b.finish(f, 0).unwrap();
        assert_eq!(c.gates(), &[Gate::Const(false)]);
    }
}
