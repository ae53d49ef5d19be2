use super::{Circuit, Determinism, Gate, GateId};

pub const DEFAULT_DETERMINISM_BOUND: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub decomposable: bool,
    /// ∧-gates with two inputs sharing a variable.
    pub violations: Vec<GateId>,
    pub deterministic: Determinism,
    pub leaf_nnf: bool,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn is_dd(&self) -> bool {
        self.decomposable && !self.deterministic.is_refuted()
    }
}

/// ∧-gates whose inputs have overlapping scopes.
pub fn check_decomposable(c: &Circuit) -> Vec<GateId> {
    let mut bad = Vec::new();
    for (id, g) in c.gates().iter().enumerate() {
        if let Gate::And(cs) = g {
            let mut seen = fixedbitset::FixedBitSet::with_capacity(c.num_vars());
            let mut ok = true;
            for &ch in cs {
                if !seen.is_disjoint(c.scope(ch)) {
                    ok = false;
                    break;
                }
                seen.union_with(c.scope(ch));
            }
            if !ok {
                bad.push(id);
            }
        }
    }
    bad
}

/// Checks every ∨-gate on every valuation when `n <= bound`; otherwise
/// returns [`Determinism::Assumed`].
pub fn check_deterministic_exhaustive(c: &Circuit, bound: usize) -> Determinism {
    let n = c.num_vars();
    if n > bound || n >= 64 {
        return Determinism::Assumed;
    }
    let ors: Vec<(GateId, &Vec<GateId>)> = c
        .gates()
        .iter()
        .enumerate()
        .filter_map(|(id, g)| match g {
            Gate::Or(cs) => Some((id, cs)),
            _ => None,
        })
        .collect();
    if ors.is_empty() {
        return Determinism::Verified;
    }
    for mask in 0..1u64 << n {
        let vals = c.eval_gates(|v| mask >> v & 1 == 1);
        for (id, cs) in &ors {
            if cs.iter().filter(|ch| vals[**ch]).count() > 1 {
                return Determinism::Refuted {
                    gate: *id,
                    witness: (0..n).filter(|v| mask >> v & 1 == 1).collect(),
                };
            }
        }
    }
    Determinism::Verified
}

/// Full check. A certified circuit keeps its certificate.
pub fn validate(c: &Circuit, bound: usize) -> ValidationReport {
    let violations = check_decomposable(c);
    let mut notes = Vec::new();
    let deterministic = match c.determinism() {
        Determinism::Certified => Determinism::Certified,
        _ => {
            let d = check_deterministic_exhaustive(c, bound);
            if d == Determinism::Assumed {
                notes.push(format!(
                    "{} variables exceed the exhaustive bound {bound}; determinism assumed",
                    c.num_vars()
                ));
            }
            d
        }
    };
    let leaf_nnf = c.is_leaf_nnf();
    if !leaf_nnf {
        notes.push("negation above a non-variable gate; OR-substitution unavailable".into());
    }
    ValidationReport {
        decomposable: violations.is_empty(),
        violations,
        deterministic,
        leaf_nnf,
        notes,
    }
}
