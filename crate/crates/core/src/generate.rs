//! Seeded random instances for tests, benchmarks and the CLI.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boolfunc::{BoolFunc, Expr};

pub type InstanceRng = ChaCha8Rng;

pub fn rng(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random expression tree of depth at most `depth` over `n` variables.
pub fn random_formula(rng: &mut impl Rng, n: usize, depth: usize) -> BoolFunc {
    let expr = random_expr(rng, n, depth);
    BoolFunc::new(expr, n).expect("generated variables are in range")
}

fn random_expr(rng: &mut impl Rng, n: usize, depth: usize) -> Expr {
    if n == 0 {
        return Expr::Const(rng.gen());
    }
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..10) {
            0 => Expr::Const(rng.gen()),
            1..=3 => Expr::not(Expr::var(rng.gen_range(0..n))),
            _ => Expr::var(rng.gen_range(0..n)),
        };
    }
    match rng.gen_range(0..5) {
        0 => Expr::not(random_expr(rng, n, depth - 1)),
        k => {
            let arity = rng.gen_range(2..=3);
            let children = (0..arity).map(|_| random_expr(rng, n, depth - 1)).collect();
            if k % 2 == 0 {
                Expr::And(children)
            } else {
                Expr::Or(children)
            }
        }
    }
}

/// A DNF with `clauses` clauses of `1..=width` distinct literals each;
/// `negated` is the probability of a negative literal.
pub fn random_dnf(
    rng: &mut impl Rng,
    n: usize,
    clauses: usize,
    width: usize,
    negated: f64,
) -> BoolFunc {
    let terms = (0..clauses)
        .map(|_| Expr::and(random_clause(rng, n, width, negated)))
        .collect();
    BoolFunc::new(Expr::or(terms), n).expect("generated variables are in range")
}

/// A CNF with the same clause shape as [`random_dnf`].
pub fn random_cnf(
    rng: &mut impl Rng,
    n: usize,
    clauses: usize,
    width: usize,
    negated: f64,
) -> BoolFunc {
    let terms = (0..clauses)
        .map(|_| Expr::or(random_clause(rng, n, width, negated)))
        .collect();
    BoolFunc::new(Expr::and(terms), n).expect("generated variables are in range")
}

fn random_clause(rng: &mut impl Rng, n: usize, width: usize, negated: f64) -> Vec<Expr> {
    if n == 0 {
        return vec![Expr::Const(rng.gen())];
    }
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(rng);
    let w = rng.gen_range(1..=width.clamp(1, n));
    ids[..w]
        .iter()
        .map(|&v| {
            if rng.gen_bool(negated) {
                Expr::not(Expr::var(v))
            } else {
                Expr::var(v)
            }
        })
        .collect()
}

/// Random formulas over `0..=max_n` variables for property tests.
#[cfg(test)]
pub(crate) fn arb_boolfunc(max_n: usize) -> impl proptest::strategy::Strategy<Value = BoolFunc> {
    use proptest::prelude::*;
    (0..=max_n, any::<u64>(), 0..3u8).prop_map(|(n, seed, shape)| {
        let mut r = rng(seed);
        match shape {
            0 => random_formula(&mut r, n, 4),
            1 => random_dnf(&mut r, n, 1 + n, 3, 0.3),
            _ => random_cnf(&mut r, n, 1 + n, 3, 0.3),
        }
    })
}
