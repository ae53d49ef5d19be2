use num_bigint::BigInt;
use proptest::prelude::*;
use rand::Rng;

use boolshap::boolfunc::parse_formula;
use boolshap::brute::{brute_count, brute_kcounts, brute_shapley_permutations, Bounds};
use boolshap::generate::{random_formula, rng};
use boolshap::reductions::{
    count_from_shapley_oracle, kcounts_from_count_oracle, kcounts_from_count_oracle_and,
    shapley_from_kcount_oracle, shapley_value_from_kcount_oracle, CallCounter, EnumerationOracle,
    VandermondeSystem,
};
use boolshap::{Coefficients, Error, Rational};

fn q(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}

#[test]
fn vandermonde_for_the_three_variable_example() {
    let sys = VandermondeSystem::new(
        [1, 3, 7, 15].map(BigInt::from).to_vec(),
        [3, 39, 399, 3615].map(|v| q(v, 1)).to_vec(),
    );
    assert_eq!(sys.solve().unwrap(), [0, 1, 1, 1].map(|v| q(v, 1)));
    let dup = VandermondeSystem::new([1, 1].map(BigInt::from).to_vec(), vec![q(1, 1), q(2, 1)]);
    assert!(matches!(dup.solve(), Err(Error::Input(_))));
}

#[test]
fn coefficient_identities() {
    for n in 1..=64 {
        let c = Coefficients::new(n);
        assert_eq!(c.get(0) * Rational::from_integer(n.into()), q(1, 1));
        for k in 0..n {
            assert_eq!(c.get(k), c.get(n - 1 - k));
            if k + 1 < n {
                assert_eq!(
                    c.get(k) * Rational::from_integer((k + 1).into()),
                    c.get(k + 1) * Rational::from_integer((n - k - 1).into())
                );
            }
        }
    }
}

#[test]
fn single_value_matches_full_vector() {
    let f = parse_formula("(and x1 (or x2 (not x3)))").unwrap();
    let mut o = CallCounter::new(EnumerationOracle::default());
    let want = [q(5, 6), q(1, 3), q(-1, 6)];
    for (i, w) in want.iter().enumerate() {
        assert_eq!(&shapley_value_from_kcount_oracle(&f, &mut o, i).unwrap(), w);
    }
    assert_eq!(o.calls, 6);
    assert!(shapley_value_from_kcount_oracle(&f, &mut o, 3).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oracle_equivalence(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=7);
        let f = random_formula(&mut r, n, 4);
        let b = Bounds::default();
        let mut o = CallCounter::new(EnumerationOracle::new(b));
        let k = brute_kcounts(&f, &b).unwrap();
        prop_assert_eq!(kcounts_from_count_oracle(&f, &mut o).unwrap(), k.clone());
        prop_assert_eq!(o.calls, n + 1);
        prop_assert_eq!(kcounts_from_count_oracle_and(&f, &mut o).unwrap(), k);
        o.calls = 0;
        prop_assert_eq!(shapley_from_kcount_oracle(&f, &mut o).unwrap(), brute_shapley_permutations(&f, &b).unwrap());
        prop_assert_eq!(o.calls, n + 1);
        o.calls = 0;
        prop_assert_eq!(count_from_shapley_oracle(&f, &mut o).unwrap(), brute_count(&f, &b).unwrap());
        prop_assert_eq!(o.calls, n * n);
    }

    #[test]
    fn lifted_and_materialized_oracles_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=5);
        let f = random_formula(&mut r, n, 4);
        let b = Bounds::default();
        let a = count_from_shapley_oracle(&f, &mut EnumerationOracle::new(b)).unwrap();
        let l = count_from_shapley_oracle(&f, &mut EnumerationOracle::lifted(b)).unwrap();
        prop_assert_eq!(a, l);
    }
}
