use num_bigint::BigUint;
use num_traits::One;

use super::validate::check_decomposable;
use super::{Circuit, CircuitBuilder, Gate, GateId};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::KCounts;

fn check_dd(c: &Circuit) -> Result<()> {
    if let Some(g) = check_decomposable(c).first() {
        return Err(Error::refusal(format!(
            "gate {g} is not decomposable; counting needs a decomposable circuit"
        )));
    }
    if c.determinism().is_refuted() {
        return Err(Error::refusal(
            "circuit is not deterministic; counting needs a deterministic circuit",
        ));
    }
    Ok(())
}

/// Bottom-up, each gate counted over its own scope; `2^gap` factors account
/// for variables missing from a child.
pub fn model_count_dd(c: &Circuit) -> Result<BigUint> {
    check_dd(c)?;
    let width = |g: GateId| c.scope(g).count_ones(..);
    let mut counts: Vec<BigUint> = Vec::with_capacity(c.size());
    for (id, g) in c.gates().iter().enumerate() {
        let v = match g {
            Gate::Const(b) => BigUint::from(*b as u32),
            Gate::Var(_) => BigUint::one(),
            Gate::Not(ch) => (BigUint::one() << width(*ch)) - &counts[*ch],
            Gate::And(cs) => cs.iter().map(|ch| &counts[*ch]).product(),
            Gate::Or(cs) => cs
                .iter()
                .map(|ch| &counts[*ch] << (width(id) - width(*ch)))
                .sum(),
        };
        counts.push(v);
    }
    let out = c.output();
    Ok(counts.swap_remove(out) << (c.num_vars() - width(out)))
}

/// `Σ_k #_k G t^k` over all `n` variables.
pub fn size_polynomial(c: &Circuit) -> Result<Poly<BigUint>> {
    check_dd(c)?;
    let width = |g: GateId| c.scope(g).count_ones(..);
    let mut polys: Vec<Poly<BigUint>> = Vec::with_capacity(c.size());
    for (id, g) in c.gates().iter().enumerate() {
        let p = match g {
            Gate::Const(true) => Poly::one(),
            Gate::Const(false) => Poly::zero(),
            Gate::Var(_) => Poly::monomial(1),
            Gate::Not(ch) => Poly::one_plus_t_pow(width(*ch)).sub(&polys[*ch]),
            Gate::And(cs) => cs.iter().fold(Poly::one(), |acc, ch| &acc * &polys[*ch]),
            Gate::Or(cs) => cs.iter().fold(Poly::zero(), |acc, ch| {
                let smooth = &polys[*ch] * &Poly::one_plus_t_pow(width(id) - width(*ch));
                &acc + &smooth
            }),
        };
        polys.push(p);
    }
    let out = c.output();
    Ok(&polys[out] * &Poly::one_plus_t_pow(c.num_vars() - width(out)))
}

/// `#_{0..n} G` from [`size_polynomial`].
pub fn size_polynomial_count(c: &Circuit) -> Result<KCounts> {
    Ok(KCounts::new(size_polynomial(c)?.padded(c.num_vars() + 1)))
}

/// Folds constant gates away. Keeps decomposability and determinism; the
/// result has no constant gate unless it is a constant.
pub fn propagate_constants(c: &Circuit) -> Circuit {
    enum Val {
        Const(bool),
        Gate(GateId),
    }
    let mut b = CircuitBuilder::new();
    let mut vals: Vec<Val> = Vec::with_capacity(c.size());
    for g in c.gates() {
        let v = match g {
            Gate::Const(x) => Val::Const(*x),
            Gate::Var(x) => Val::Gate(b.var(*x)),
            Gate::Not(ch) => match vals[*ch] {
                Val::Const(x) => Val::Const(!x),
                Val::Gate(h) => Val::Gate(b.not(h)),
            },
            Gate::And(cs) | Gate::Or(cs) => {
                let is_and = matches!(g, Gate::And(_));
                let mut kept = Vec::new();
                let mut absorbed = false;
                for ch in cs {
                    match vals[*ch] {
                        Val::Const(x) if x == is_and => {}
                        Val::Const(_) => absorbed = true,
                        Val::Gate(h) => kept.push(h),
                    }
                }
                if absorbed {
                    Val::Const(!is_and)
                } else if kept.is_empty() {
                    Val::Const(is_and)
                } else if is_and {
                    Val::Gate(b.and(kept))
                } else {
                    Val::Gate(b.or(kept))
                }
            }
        };
        vals.push(v);
    }
    let out = match vals.pop().expect("nonempty circuit") {
        Val::Const(x) => b.constant(x),
        Val::Gate(h) => h,
    };
    b.finish(out, c.num_vars())
        .expect("folding keeps the circuit well formed")
        .with_determinism(c.determinism().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfunc::parse_formula;
    use crate::brute::{brute_count, brute_kcounts, Bounds};
    use crate::circuit::tests::{example_circuit, mux_circuit};

    #[test]
    fn examples() {
        assert_eq!(model_count_dd(&mux_circuit()).unwrap(), BigUint::from(4u32));
        assert_eq!(
            model_count_dd(&example_circuit()).unwrap(),
            BigUint::from(3u32)
        );
        let one = Circuit::new(vec![Gate::Const(true)], 0, 3).unwrap();
        assert_eq!(model_count_dd(&one).unwrap(), BigUint::from(8u32));
    }

    #[test]
    fn polynomial_examples() {
        assert_eq!(
            size_polynomial_count(&example_circuit()).unwrap(),
            KCounts::from_u64(&[0, 1, 1, 1])
        );
        let one = Circuit::new(vec![Gate::Const(true)], 0, 2).unwrap();
        assert_eq!(
            size_polynomial_count(&one).unwrap(),
            KCounts::from_u64(&[1, 2, 1])
        );
        assert_eq!(
            size_polynomial_count(&mux_circuit()).unwrap(),
            KCounts::from_u64(&[0, 1, 2, 1])
        );
    }

    #[test]
    fn general_negation_is_complement_in_scope() {
        // ¬(X1 ∧ X2) over 3 variables
        let c = Circuit::new(
            vec![
                Gate::Var(0),
                Gate::Var(1),
                Gate::And(vec![0, 1]),
                Gate::Not(2),
            ],
            3,
            3,
        )
        .unwrap();
        let f = parse_formula("p sexpr 3\n(not (and x1 x2))").unwrap();
        let b = Bounds::default();
        assert_eq!(model_count_dd(&c).unwrap(), brute_count(&f, &b).unwrap());
        assert_eq!(
            size_polynomial_count(&c).unwrap(),
            brute_kcounts(&f, &b).unwrap()
        );
    }

    #[test]
    fn refuses_non_dd() {
        let c = Circuit::new(
            vec![Gate::Var(0), Gate::Var(0), Gate::And(vec![0, 1])],
            2,
            1,
        )
        .unwrap();
        assert!(matches!(model_count_dd(&c), Err(Error::Refusal(_))));
        let c = Circuit::new(vec![Gate::Var(0), Gate::Var(1), Gate::Or(vec![0, 1])], 2, 2)
            .unwrap()
            .with_determinism(crate::circuit::Determinism::Refuted {
                gate: 2,
                witness: vec![0, 1],
            });
        assert!(matches!(size_polynomial(&c), Err(Error::Refusal(_))));
    }

    #[test]
    fn constant_propagation_preserves_function() {
        let c = Circuit::new(
            vec![
                Gate::Var(0),
                Gate::Const(false),
                Gate::Const(true),
                Gate::And(vec![0, 2]),
                Gate::Var(1),
                Gate::And(vec![1, 4]),
                Gate::Or(vec![3, 5]),
            ],
            6,
            2,
        )
        .unwrap();
        let p = propagate_constants(&c);
        assert_eq!(p.gates(), &[Gate::Var(0)]);
        for m in 0..4 {
            assert_eq!(p.eval_mask(m), c.eval_mask(m));
        }
        assert_eq!(model_count_dd(&p).unwrap(), model_count_dd(&c).unwrap());
    }
}
