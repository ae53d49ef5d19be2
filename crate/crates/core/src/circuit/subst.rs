use super::{Circuit, CircuitBuilder, Determinism, Gate, GateId};
use crate::boolfunc::{VarId, VariableMap};
use crate::error::{Error, Result};

/// `c` in `|G'| <= |G| + c·k·max(ell, 1)`, `k` the number of occurrences of
/// the substituted variable.
pub const GROWTH_CONSTANT: usize = 5;

/// `G[X := Z_1 ∨ … ∨ Z_ell]`. The result is numbered group by group as in
/// [`VariableMap`]: variables before `X` keep their id, `Z_1..Z_ell` take
/// `X`'s place, later variables shift by `ell - 1`.
pub fn or_substitute_circuit(
    c: &Circuit,
    var: VarId,
    ell: usize,
) -> Result<(Circuit, VariableMap)> {
    if var >= c.num_vars() {
        return Err(Error::input(format!(
            "x{} out of range for a circuit over {} variables",
            var + 1,
            c.num_vars()
        )));
    }
    let mut arities = vec![1; c.num_vars()];
    arities[var] = ell;
    or_substitute_circuit_all(c, &arities)
}

/// OR-substitution of every variable at once.
///
/// A positive occurrence of `X` becomes the chain
/// `Z_1 ∨ (¬Z_1 ∧ (Z_2 ∨ (¬Z_2 ∧ … Z_m)))`, whose disjuncts exclude each
/// other; `¬X` becomes `¬Z_1 ∧ … ∧ ¬Z_m`. Arity 0 gives the constants 0
/// and 1. Both gadgets are built once per variable and shared.
pub fn or_substitute_circuit_all(c: &Circuit, arities: &[usize]) -> Result<(Circuit, VariableMap)> {
    let n = c.num_vars();
    if arities.len() != n {
        return Err(Error::input(format!(
            "{} arities for a circuit over {n} variables",
            arities.len()
        )));
    }
    for (id, g) in c.gates().iter().enumerate() {
        if let Gate::Not(ch) = g {
            if !matches!(c.gate(*ch), Gate::Var(_)) && c.scope(*ch).ones().any(|v| arities[v] != 1)
            {
                return Err(Error::input(format!(
                    "gate {id} negates a non-variable gate above a substituted variable; \
                     substitution needs negation only on variables"
                )));
            }
        }
    }

    let map = VariableMap::from_arities(arities);
    let mut b = CircuitBuilder::new();
    let mut pos: Vec<Option<GateId>> = vec![None; n];
    let mut neg: Vec<Option<GateId>> = vec![None; n];
    let mut new_id: Vec<GateId> = Vec::with_capacity(c.size());

    for g in c.gates() {
        let id = match g {
            Gate::Const(x) => b.constant(*x),
            Gate::Var(v) => positive(&mut b, &map, &mut pos, *v),
            Gate::Not(ch) => match c.gate(*ch) {
                Gate::Var(v) => negative(&mut b, &map, &mut neg, *v),
                _ => {
                    let inner = new_id[*ch];
                    b.push(Gate::Not(inner))
                }
            },
            Gate::And(cs) => b.push(Gate::And(cs.iter().map(|ch| new_id[*ch]).collect())),
            Gate::Or(cs) => b.push(Gate::Or(cs.iter().map(|ch| new_id[*ch]).collect())),
        };
        new_id.push(id);
    }
    let out = new_id[c.output()];
    let determinism = match c.determinism() {
        Determinism::Certified | Determinism::Verified => Determinism::Certified,
        Determinism::Refuted { .. } => Determinism::Unchecked,
        other => other.clone(),
    };
    let circuit = b.finish(out, map.num_new())?.with_determinism(determinism);
    Ok((circuit, map))
}

fn positive(
    b: &mut CircuitBuilder,
    map: &VariableMap,
    cache: &mut [Option<GateId>],
    v: VarId,
) -> GateId {
    if let Some(g) = cache[v] {
        return g;
    }
    let zs: Vec<VarId> = map.group(v).collect();
    let g = match zs.split_last() {
        None => b.constant(false),
        Some((&last, rest)) => {
            let mut acc = b.var(last);
            for &z in rest.iter().rev() {
                let nz = b.neg_var(z);
                let tail = b.and(vec![nz, acc]);
                let head = b.var(z);
                acc = b.or(vec![head, tail]);
            }
            acc
        }
    };
    cache[v] = Some(g);
    g
}

fn negative(
    b: &mut CircuitBuilder,
    map: &VariableMap,
    cache: &mut [Option<GateId>],
    v: VarId,
) -> GateId {
    if let Some(g) = cache[v] {
        return g;
    }
    let lits = map.group(v).map(|z| b.neg_var(z)).collect();
    let g = b.and(lits);
    cache[v] = Some(g);
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfunc::{parse_formula, BoolFunc};
    use crate::brute::{brute_count, Bounds};
    use crate::circuit::tests::{example_circuit, mux_circuit};
    use crate::circuit::{check_decomposable, check_deterministic_exhaustive, model_count_dd};
    use num_bigint::BigUint;

    fn equivalent(a: &Circuit, f: &BoolFunc) -> bool {
        a.num_vars() == f.num_vars()
            && (0..1u64 << f.num_vars()).all(|m| a.eval_mask(m) == f.expr().eval_mask(m))
    }

    #[test]
    fn single_variable_chain() {
        let x = Circuit::new(vec![Gate::Var(0)], 0, 1).unwrap();
        let (g, _) = or_substitute_circuit(&x, 0, 2).unwrap();
        assert_eq!(g.num_vars(), 2);
        assert_eq!(model_count_dd(&g).unwrap(), BigUint::from(3u32));
        let want = parse_formula("(or x1 (and (not x1) x2))").unwrap();
        assert!(equivalent(&g, &want));
    }

    #[test]
    fn arity_one_is_isomorphic() {
        for c in [example_circuit(), mux_circuit()] {
            let (g, _) = or_substitute_circuit(&c, 1, 1).unwrap();
            assert_eq!(g.gates(), c.gates());
        }
    }

    #[test]
    fn mux_example() {
        let (g, map) = or_substitute_circuit(&mux_circuit(), 0, 2).unwrap();
        assert_eq!(map.group(0), 0..2);
        assert_eq!(g.num_vars(), 4);
        // Z-part empty: X2 set, X3 free (2); Z-part nonempty: 3 ways, X3 set, X2 free (6)
        assert_eq!(model_count_dd(&g).unwrap(), BigUint::from(8u32));
        let f = parse_formula("(or (and (not (or x1 x2)) x3) (and (or x1 x2) x4))").unwrap();
        assert_eq!(
            brute_count(&f, &Bounds::default()).unwrap(),
            BigUint::from(8u32)
        );
        assert!(equivalent(&g, &f));
        assert!(check_decomposable(&g).is_empty());
        assert_eq!(
            check_deterministic_exhaustive(&g, 20),
            Determinism::Verified
        );
    }

    #[test]
    fn arity_zero_gives_constants() {
        let (g, _) = or_substitute_circuit(&mux_circuit(), 0, 0).unwrap();
        // (1 ∧ X2) ∨ (0 ∧ X3)
        assert_eq!(g.num_vars(), 2);
        assert!(g.gates().contains(&Gate::Const(true)));
        assert!(g.gates().contains(&Gate::Const(false)));
        assert_eq!(model_count_dd(&g).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn matches_formula_substitution() {
        let c = example_circuit();
        let f = c.to_boolfunc().unwrap();
        for arities in [vec![2, 3, 1], vec![0, 2, 2], vec![3, 0, 3]] {
            let (g, _) = or_substitute_circuit_all(&c, &arities).unwrap();
            let (h, _) = f.or_substitute(&arities).unwrap();
            assert!(equivalent(&g, &h), "{arities:?}");
        }
    }

    #[test]
    fn growth_bound() {
        let c = mux_circuit();
        for ell in 0..6 {
            let (g, _) = or_substitute_circuit(&c, 0, ell).unwrap();
            let k = c.occurrences(0);
            assert!(g.size() <= c.size() + GROWTH_CONSTANT * k * ell.max(1));
        }
    }

    #[test]
    fn rejects_negated_compound_on_substituted_path() {
        let c = Circuit::new(
            vec![
                Gate::Var(0),
                Gate::Var(1),
                Gate::And(vec![0, 1]),
                Gate::Not(2),
            ],
            3,
            2,
        )
        .unwrap();
        assert!(matches!(
            or_substitute_circuit(&c, 0, 2),
            Err(Error::Input(_))
        ));
        assert!(or_substitute_circuit(&c, 0, 1).is_ok());
    }
}
