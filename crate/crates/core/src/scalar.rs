//! Scalar abstraction for the numeric kernels.
//!
//! The reductions only ever need a field: build values from integers, do
//! `+ - * /`, and find out whether a computed value is an exact integer. The
//! exact instantiation is [`crate::Rational`]; the float impls exist for
//! quick experiments with conditioning and are never used to report results.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

pub trait Field: Clone + Debug + PartialOrd + Num + Signed {
    /// `true` when arithmetic is exact (no rounding).
    const EXACT: bool;

    fn from_bigint(value: &BigInt) -> Self;

    fn from_i64(value: i64) -> Self {
        Self::from_bigint(&BigInt::from(value))
    }

    fn from_biguint(value: &num_bigint::BigUint) -> Self {
        Self::from_bigint(&BigInt::from(value.clone()))
    }

    /// The value as an integer, if it is one. Inexact fields use a relative
    /// tolerance.
    fn to_exact_integer(&self) -> Option<BigInt>;
}

impl Field for BigRational {
    const EXACT: bool = true;

    fn from_bigint(value: &BigInt) -> Self {
        BigRational::from_integer(value.clone())
    }

    fn to_exact_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.to_integer())
    }
}

macro_rules! float_field {
    ($t:ty, $tol:expr) => {
        impl Field for $t {
            const EXACT: bool = false;

            fn from_bigint(value: &BigInt) -> Self {
                value.to_f64().map(|v| v as $t).unwrap_or(<$t>::INFINITY)
            }

            fn to_exact_integer(&self) -> Option<BigInt> {
                if !self.is_finite() {
                    return None;
                }
                let rounded = self.round();
                let scale = self.abs().max(1.0);
                if (self - rounded).abs() <= $tol * scale {
                    BigInt::from_f64(rounded as f64)
                } else {
                    None
                }
            }
        }
    };
}

float_field!(f64, 1e-7);
float_field!(f32, 1e-3);

/// Renders an exact rational as `p/q` in lowest terms with `q > 0`, also for
/// integers (`3/1`, `0/1`).
pub fn format_rational(value: &BigRational) -> String {
    // BigRational is kept reduced with a positive denominator.
    let value = if value.is_zero() {
        BigRational::zero()
    } else {
        value.clone()
    };
    format!("{}/{}", value.numer(), value.denom())
}

/// Parses `p/q` or `p`.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            (!q.is_zero()).then(|| BigRational::new(p, q))
        }
        None => text.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_integrality() {
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(half.to_exact_integer(), None);
        let six = BigRational::new(12.into(), 2.into());
        assert_eq!(six.to_exact_integer(), Some(BigInt::from(6)));
    }

    #[test]
    fn float_integrality_uses_tolerance() {
        assert_eq!((3.0000000001f64).to_exact_integer(), Some(BigInt::from(3)));
        assert_eq!((3.25f64).to_exact_integer(), None);
        assert_eq!(f64::NAN.to_exact_integer(), None);
    }

    #[test]
    fn rational_formatting() {
        let v = BigRational::new((-2).into(), 12.into());
        assert_eq!(format_rational(&v), "-1/6");
        assert_eq!(format_rational(&BigRational::zero()), "0/1");
        assert_eq!(parse_rational("-2/12"), Some(v));
        assert_eq!(
            parse_rational("4"),
            Some(BigRational::from_integer(4.into()))
        );
        assert_eq!(parse_rational("1/0"), None);
    }
}
