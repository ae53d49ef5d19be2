use num_bigint::BigUint;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

use boolshap::boolfunc::{dnf_distribute, parse_dimacs, parse_formula, to_text};
use boolshap::brute::{
    brute_count, brute_kcounts, brute_shapley_permutations, brute_shapley_subsets, Bounds,
};
use boolshap::generate::{random_cnf, random_dnf, random_formula, rng};
use boolshap::{BoolFunc, Rational};

fn any_function(seed: u64, max_n: usize) -> BoolFunc {
    let mut r = rng(seed);
    let n = r.gen_range(1..=max_n);
    match r.gen_range(0..3) {
        0 => random_formula(&mut r, n, 4),
        1 => {
            let c = r.gen_range(1..=5);
            random_dnf(&mut r, n, c, 3, 0.3)
        }
        _ => {
            let c = r.gen_range(1..=5);
            random_cnf(&mut r, n, c, 3, 0.3)
        }
    }
}

fn pow(base: u64, e: usize) -> BigUint {
    (0..e).fold(BigUint::one(), |acc, _| acc * base)
}

fn same_function(a: &BoolFunc, b: &BoolFunc) -> bool {
    a.num_vars() == b.num_vars()
        && (0..1u64 << a.num_vars()).all(|m| a.expr().eval_mask(m) == b.expr().eval_mask(m))
}

#[test]
fn text_and_dimacs_agree() {
    let s = parse_formula("p sexpr 3\n(and (or x1 x2) (or (not x1) x3))").unwrap();
    let cnf = parse_dimacs("c same function\np cnf 3 2\n1 2 0\n-1 3 0\n").unwrap();
    assert!(same_function(&s, &cnf));
    let back = parse_formula(&to_text(&s)).unwrap();
    assert!(same_function(&s, &back));
    let dnf = parse_formula("p dnf 2 2\n1 0\n2 0\n").unwrap();
    assert_eq!(
        brute_count(&dnf, &Bounds::default()).unwrap(),
        BigUint::from(3u32)
    );
}

#[test]
fn constant_functions() {
    let b = Bounds::default();
    let one = BoolFunc::constant(true, 2);
    assert_eq!(
        brute_kcounts(&one, &b).unwrap().as_slice(),
        [1u32, 2, 1].map(BigUint::from)
    );
    let zero = BoolFunc::constant(false, 3);
    assert!(brute_shapley_subsets(&zero, &b)
        .unwrap()
        .values()
        .iter()
        .all(Zero::is_zero));
}

#[test]
fn bounds_are_refusals() {
    let f = parse_formula("p sexpr 12\n(and x1 x12)").unwrap();
    assert!(brute_count(&f, &Bounds::with_max_vars(11)).is_err());
    assert!(brute_shapley_permutations(&f, &Bounds::default()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn permutation_and_subset_formulas_agree(seed in any::<u64>()) {
        let f = any_function(seed, 7);
        let b = Bounds::default();
        prop_assert_eq!(brute_shapley_permutations(&f, &b).unwrap(), brute_shapley_subsets(&f, &b).unwrap());
    }

    #[test]
    fn efficiency(seed in any::<u64>()) {
        let f = any_function(seed, 8);
        let sum = brute_shapley_subsets(&f, &Bounds::default()).unwrap().sum();
        let want = f.eval_all_ones() as i64 - f.eval_all_zeros() as i64;
        prop_assert_eq!(sum, Rational::from_integer(want.into()));
    }

    #[test]
    fn substituted_counts(seed in any::<u64>(), ell in 0usize..=4) {
        let f = any_function(seed, 5);
        let n = f.num_vars();
        let b = Bounds::default();
        let k = brute_kcounts(&f, &b).unwrap();
        let node = (1u64 << ell) - 1;
        let (or, _) = f.or_substitute(&vec![ell; n]).unwrap();
        let want: BigUint = (0..=n).map(|j| pow(node, j) * k.get(j)).sum();
        prop_assert_eq!(brute_count(&or, &b).unwrap(), want);
        let (and, _) = f.and_substitute(&vec![ell; n]).unwrap();
        let want: BigUint = (0..=n).map(|j| pow(node, n - j) * k.get(j)).sum();
        prop_assert_eq!(brute_count(&and, &b).unwrap(), want);
    }

    #[test]
    fn cofactor_identities(seed in any::<u64>()) {
        let f = any_function(seed, 8);
        let n = f.num_vars();
        let b = Bounds::default();
        let k = brute_kcounts(&f, &b).unwrap();
        let ones: Vec<_> = (0..n).map(|i| brute_kcounts(&f.restrict(i, true).unwrap(), &b).unwrap()).collect();
        let zeros: Vec<_> = (0..n).map(|i| brute_kcounts(&f.restrict(i, false).unwrap(), &b).unwrap()).collect();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(k.get(j + 1), ones[i].get(j) + zeros[i].get(j + 1));
            }
        }
        for j in 0..n {
            let s1: BigUint = ones.iter().map(|c| c.get(j)).sum();
            prop_assert_eq!(s1, k.get(j + 1) * BigUint::from(j + 1));
            let s0: BigUint = zeros.iter().map(|c| c.get(j)).sum();
            prop_assert_eq!(s0, k.get(j) * BigUint::from(n - j));
        }
    }

    #[test]
    fn distribution_preserves_the_function(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=6);
        let clauses = r.gen_range(1..=5);
        let dnf = random_dnf(&mut r, n, clauses, 3, 0.0);
        let arities: Vec<usize> = (0..n).map(|_| r.gen_range(0..=2)).collect();
        let (f, _) = dnf.or_substitute(&arities).unwrap();
        let g = dnf_distribute(&f).unwrap();
        prop_assert!(same_function(&f, &g));
    }
}
