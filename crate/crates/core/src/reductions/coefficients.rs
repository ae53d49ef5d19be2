use crate::scalar::Field;

/// The weights `c_k = k!(n-k-1)!/n!`, `k = 0..n`, of the coefficient form of
/// the Shapley value. `c_k` is the probability that a fixed variable is
/// preceded by one particular `k`-subset of the others in a uniformly random
/// order.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientTable<T> {
    n: usize,
    c: Vec<T>,
}

impl<T: Field> CoefficientTable<T> {
    /// Built by the ratio recurrence `c_0 = 1/n`, `c_{k+1} = c_k (k+1)/(n-k-1)`.
    /// Empty for `n = 0`.
    pub fn new(n: usize) -> Self {
        let mut c = Vec::with_capacity(n);
        if n > 0 {
            c.push(T::one() / T::from_i64(n as i64));
            for k in 0..n - 1 {
                let next =
                    c[k].clone() * T::from_i64(k as i64 + 1) / T::from_i64((n - k - 1) as i64);
                c.push(next);
            }
        }
        CoefficientTable { n, c }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, k: usize) -> T {
        self.c[k].clone()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.c
    }
}
