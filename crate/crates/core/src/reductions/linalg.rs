use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::scalar::Field;

/// Solves the square system `A x = b` by Gaussian elimination with partial
/// pivoting (largest absolute value in the column).
///
/// Over an exact field the solution is verified by substituting it back;
/// any residual is an internal error. Inexact fields skip the check.
pub fn solve_linear_system<T: Field>(matrix: &[Vec<T>], rhs: &[T]) -> Result<Vec<T>> {
    let n = rhs.len();
    if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
        return Err(Error::input(format!(
            "expected a {n}x{n} system, got {} rows",
            matrix.len()
        )));
    }
    let mut a: Vec<Vec<T>> = matrix.to_vec();
    let mut b: Vec<T> = rhs.to_vec();

    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .max_by(|&r, &s| {
                a[r][col]
                    .abs()
                    .partial_cmp(&a[s][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .ok_or_else(|| Error::internal(format!("singular system (column {col})")))?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone() / a[col][col].clone();
            for c in col..n {
                let delta = factor.clone() * a[col][c].clone();
                a[r][c] = a[r][c].clone() - delta;
            }
            let delta = factor * b[col].clone();
            b[r] = b[r].clone() - delta;
        }
    }

    let mut x = vec![T::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc = acc - a[r][c].clone() * x[c].clone();
        }
        x[r] = acc / a[r][r].clone();
    }

    if T::EXACT {
        for (row, expected) in matrix.iter().zip(rhs) {
            let got = row
                .iter()
                .zip(&x)
                .fold(T::zero(), |acc, (a, x)| acc + a.clone() * x.clone());
            if &got != expected {
                return Err(Error::internal("back-substitution residual is not zero"));
            }
        }
    }
    Ok(x)
}

/// `V s = rhs` with `V[j][k] = nodes[j]^k`.
#[derive(Clone, Debug)]
pub struct VandermondeSystem<T> {
    pub nodes: Vec<BigInt>,
    pub rhs: Vec<T>,
}

impl<T: Field> VandermondeSystem<T> {
    pub fn new(nodes: Vec<BigInt>, rhs: Vec<T>) -> Self {
        VandermondeSystem { nodes, rhs }
    }

    pub fn matrix(&self) -> Vec<Vec<T>> {
        let n = self.nodes.len();
        self.nodes
            .iter()
            .map(|x| {
                let x = T::from_bigint(x);
                let mut row = Vec::with_capacity(n);
                let mut p = T::one();
                for _ in 0..n {
                    row.push(p.clone());
                    p = p * x.clone();
                }
                row
            })
            .collect()
    }

    pub fn solve(&self) -> Result<Vec<T>> {
        if self.nodes.len() != self.rhs.len() {
            return Err(Error::input(format!(
                "{} nodes for {} right-hand sides",
                self.nodes.len(),
                self.rhs.len()
            )));
        }
        let mut sorted = self.nodes.clone();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::input(format!("duplicate Vandermonde node {}", w[0])));
        }
        solve_linear_system(&self.matrix(), &self.rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use proptest::prelude::*;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    #[test]
    fn worked_example_system() {
        // #F^(l) for F = X1 ∧ (X2 ∨ ¬X3), l = 1..4, nodes 2^l - 1
        let sys = VandermondeSystem::new(
            vec![1, 3, 7, 15].into_iter().map(BigInt::from).collect(),
            vec![q(3), q(39), q(399), q(3615)],
        );
        assert_eq!(sys.solve().unwrap(), vec![q(0), q(1), q(1), q(1)]);
    }

    #[test]
    fn identity_case() {
        let sys = VandermondeSystem::new(vec![BigInt::from(1)], vec![q(17)]);
        assert_eq!(sys.solve().unwrap(), vec![q(17)]);
    }

    #[test]
    fn duplicate_nodes_rejected() {
        let sys = VandermondeSystem::new(vec![BigInt::from(3), BigInt::from(3)], vec![q(1), q(2)]);
        assert!(matches!(sys.solve(), Err(Error::Input(_))));
    }

    #[test]
    fn singular_matrix_reported() {
        let m = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert!(matches!(
            solve_linear_system(&m, &[q(1), q(2)]),
            Err(Error::Internal(_))
        ));
    }

    #[test]
    fn float_instantiation() {
        let sys = VandermondeSystem::<f64>::new(
            vec![1, 3, 7, 15].into_iter().map(BigInt::from).collect(),
            vec![3.0, 39.0, 399.0, 3615.0],
        );
        let x = sys.solve().unwrap();
        for (got, want) in x.iter().zip([0.0, 1.0, 1.0, 1.0]) {
            assert!((got - want).abs() < 1e-9);
        }
    }

    proptest! {
        #[test]
        fn exact_solution_reproduces_rhs(
            nodes in prop::collection::btree_set(-20i64..20, 1..7),
            seed in prop::collection::vec(-50i64..50, 7),
        ) {
            let nodes: Vec<BigInt> = nodes.into_iter().map(BigInt::from).collect();
            let rhs: Vec<Rational> = seed[..nodes.len()].iter().map(|&v| q(v)).collect();
            let sys = VandermondeSystem::new(nodes, rhs.clone());
            let x = sys.solve().unwrap();
            let m = sys.matrix();
            for (row, b) in m.iter().zip(&rhs) {
                let got = row.iter().zip(&x).fold(q(0), |acc, (a, x)| acc + a * x);
                prop_assert_eq!(&got, b);
            }
        }
    }
}
