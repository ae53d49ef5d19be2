use rand::seq::SliceRandom;
use rand::Rng;

use super::{Circuit, CircuitBuilder, Determinism, GateId};
use crate::boolfunc::VarId;

/// A random leaf-NNF circuit over `n` variables that is deterministic and
/// decomposable by construction: ∧-gates split the variable set, ∨-gates
/// branch on a variable (`(x ∧ G1) ∨ (¬x ∧ G2)`). At most `max_gates` gates.
pub fn random_dd_circuit(rng: &mut impl Rng, n: usize, max_gates: usize) -> Circuit {
    let max_gates = max_gates.max(1);
    let mut depth = 5;
    loop {
        let mut b = CircuitBuilder::new();
        let mut vars: Vec<VarId> = (0..n).collect();
        vars.shuffle(rng);
        let out = build(rng, &mut b, &vars, depth);
        let c = b.finish(out, n).expect("generated circuit is well formed");
        if c.size() <= max_gates {
            return c.with_determinism(Determinism::Certified);
        }
        depth = depth.saturating_sub(1);
    }
}

fn build(rng: &mut impl Rng, b: &mut CircuitBuilder, vars: &[VarId], depth: usize) -> GateId {
    if vars.is_empty() {
        return b.constant(rng.gen_bool(0.7));
    }
    let leaf = depth == 0 || vars.len() == 1 || rng.gen_bool(0.15);
    if leaf {
        if rng.gen_bool(0.05) {
            return b.constant(rng.gen());
        }
        let v = *vars.choose(rng).expect("nonempty");
        return b.literal(v, rng.gen_bool(0.6));
    }
    if rng.gen_bool(0.5) {
        let cut = rng.gen_range(1..vars.len());
        let left = build(rng, b, &vars[..cut], depth - 1);
        let right = build(rng, b, &vars[cut..], depth - 1);
        b.and(vec![left, right])
    } else {
        let x = vars[0];
        let rest = &vars[1..];
        let hi_vars = sample(rng, rest);
        let hi = build(rng, b, &hi_vars, depth - 1);
        let lo_vars = sample(rng, rest);
        let lo = build(rng, b, &lo_vars, depth - 1);
        let px = b.var(x);
        let nx = b.neg_var(x);
        let l = b.and(vec![px, hi]);
        let r = b.and(vec![nx, lo]);
        b.or(vec![l, r])
    }
}

fn sample(rng: &mut impl Rng, vars: &[VarId]) -> Vec<VarId> {
    let mut v: Vec<VarId> = vars.iter().copied().filter(|_| rng.gen_bool(0.8)).collect();
    v.shuffle(rng);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{check_decomposable, check_deterministic_exhaustive};
    use crate::generate::rng;

    #[test]
    fn generated_circuits_are_dd() {
        for seed in 0..50 {
            let c = random_dd_circuit(&mut rng(seed), 8, 30);
            assert!(c.size() <= 30);
            assert!(c.is_leaf_nnf());
            assert!(check_decomposable(&c).is_empty(), "seed {seed}");
            assert_eq!(
                check_deterministic_exhaustive(&c, 20),
                Determinism::Verified
            );
        }
    }
}
