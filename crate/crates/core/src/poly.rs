//! Dense univariate polynomials, used as size-generating functions
//! `sum_k #_k t^k`.

use std::ops::{Add, Mul};

use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T> Poly<T>
where
    T: Clone + Zero + One + PartialEq,
{
    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly {
            coeffs: vec![T::one()],
        }
    }

    /// The monomial `t^degree`.
    pub fn monomial(degree: usize) -> Self {
        let mut coeffs = vec![T::zero(); degree + 1];
        coeffs[degree] = T::one();
        Poly { coeffs }
    }

    /// `(1 + t)^exp`, coefficients are binomials.
    pub fn one_plus_t_pow(exp: usize) -> Self {
        let mut coeffs = vec![T::one()];
        for _ in 0..exp {
            let mut next = vec![T::zero(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i] = next[i].clone() + c.clone();
                next[i + 1] = next[i + 1].clone() + c.clone();
            }
            coeffs = next;
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `t^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficients `0..len`, zero-padded.
    pub fn padded(&self, len: usize) -> Vec<T> {
        (0..len).map(|k| self.coeff(k)).collect()
    }

    /// Value at `t = 1`.
    pub fn sum(&self) -> T {
        self.coeffs
            .iter()
            .cloned()
            .fold(T::zero(), |acc, c| acc + c)
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }
}

impl<T> Poly<T>
where
    T: Clone + Zero + One + PartialEq + std::ops::Sub<Output = T>,
{
    /// `self - other`. For unsigned coefficient types the caller must ensure
    /// that `other <= self` coefficient-wise.
    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k) - other.coeff(k)).collect();
        Poly::from_coeffs(coeffs)
    }
}

impl<T> Add for &Poly<T>
where
    T: Clone + Zero + One + PartialEq,
{
    type Output = Poly<T>;

    fn add(self, other: &Poly<T>) -> Poly<T> {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Poly::from_coeffs(coeffs)
    }
}

impl<T> Mul for &Poly<T>
where
    T: Clone + Zero + One + PartialEq,
{
    type Output = Poly<T>;

    fn mul(self, other: &Poly<T>) -> Poly<T> {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::from_coeffs(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn p(c: &[u32]) -> Poly<BigUint> {
        Poly::from_coeffs(c.iter().map(|&x| BigUint::from(x)).collect())
    }

    #[test]
    fn binomial_powers() {
        assert_eq!(Poly::<BigUint>::one_plus_t_pow(3), p(&[1, 3, 3, 1]));
        assert_eq!(Poly::<BigUint>::one_plus_t_pow(0), p(&[1]));
    }

    #[test]
    fn arithmetic() {
        let a = p(&[1, 1]);
        assert_eq!(&a * &a, p(&[1, 2, 1]));
        assert_eq!(&a + &p(&[0, 0, 5]), p(&[1, 1, 5]));
        assert_eq!(p(&[1, 2, 1]).sub(&p(&[1])), p(&[0, 2, 1]));
        assert_eq!(p(&[1, 2, 1]).sum(), BigUint::from(4u32));
        assert!(p(&[0, 0]).is_zero());
        assert_eq!((&p(&[]) * &a), Poly::zero());
    }

    #[test]
    fn generic_over_floats() {
        let a: Poly<f64> = Poly::one_plus_t_pow(4);
        assert_eq!(a.coeffs(), &[1.0, 4.0, 6.0, 4.0, 1.0]);
    }
}
