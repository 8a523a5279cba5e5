//! Scalar abstractions.
//!
//! Linear algebra, polynomials and the exterior algebra are written against
//! [`Field`], which `f64` satisfies. Everything that makes combinatorial
//! decisions (signs, incidences, face lattices) additionally needs exact
//! comparisons and is written against [`ExactField`].

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

use crate::error::{Error, Result};

/// A field with exact-enough zero tests for the algebra in this crate.
pub trait Field: Num + Clone + Debug + FromPrimitive + std::ops::Neg<Output = Self> {
    fn from_int(i: i64) -> Self {
        Self::from_i64(i).expect("integer is representable")
    }
}

impl<T> Field for T where T: Num + Clone + Debug + FromPrimitive + std::ops::Neg<Output = T> {}

/// An ordered field with exact arithmetic.
pub trait ExactField: Field + Signed + Ord + Hash + Display + ToPrimitive + Send + Sync + 'static {
    /// Parse `p`, `-p` or `p/q`.
    fn parse_rational(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::invalid(format!("malformed rational `{s}`"));
        let (num, den) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let p: i64 = num.parse().map_err(|_| bad())?;
        let q: i64 = den.parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(Error::invalid(format!("zero denominator in `{s}`")));
        }
        Ok(Self::from_int(p) / Self::from_int(q))
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Reduced numerator and positive denominator.
    fn to_big(&self) -> (BigInt, BigInt);

    fn from_big(numer: BigInt, denom: BigInt) -> Self;
}

impl ExactField for BigRational {
    fn parse_rational(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::invalid(format!("malformed rational `{s}`"));
        let (num, den) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let p: BigInt = num.parse().map_err(|_| bad())?;
        let q: BigInt = den.parse().map_err(|_| bad())?;
        if q == BigInt::from(0) {
            return Err(Error::invalid(format!("zero denominator in `{s}`")));
        }
        Ok(BigRational::new(p, q))
    }

    fn to_big(&self) -> (BigInt, BigInt) {
        (self.numer().clone(), self.denom().clone())
    }

    fn from_big(numer: BigInt, denom: BigInt) -> Self {
        BigRational::new(numer, denom)
    }
}

macro_rules! small_ratio {
    ($t:ty) => {
        impl ExactField for Ratio<$t> {
            fn to_big(&self) -> (BigInt, BigInt) {
                (BigInt::from(*self.numer()), BigInt::from(*self.denom()))
            }

            fn from_big(numer: BigInt, denom: BigInt) -> Self {
                let r = BigRational::new(numer, denom);
                let fit = |x: &BigInt| <$t>::try_from(x.clone()).expect("value fits the scalar type");
                Ratio::new(fit(r.numer()), fit(r.denom()))
            }
        }
    };
}

small_ratio!(i64);
small_ratio!(i128);

/// `p/q` rendering used by every JSON format (integers print without `/1`).
pub fn fmt_rational<S: ExactField>(x: &S) -> String {
    x.to_string()
}

pub fn int<S: Field>(i: i64) -> S {
    S::from_int(i)
}

pub fn factorial<S: Field>(k: u32) -> S {
    (1..=k as i64).fold(S::one(), |acc, i| acc * S::from_int(i))
}

pub fn dot<S: Field>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    #[test]
    fn parse_and_print() {
        let x = Q::parse_rational("-3/6").unwrap();
        assert_eq!(fmt_rational(&x), "-1/2");
        assert_eq!(fmt_rational(&Q::parse_rational("4").unwrap()), "4");
        assert!(Q::parse_rational("1/0").is_err());
        assert!(Q::parse_rational("a").is_err());
        let y = Ratio::<i64>::parse_rational("2/4").unwrap();
        assert_eq!(y, Ratio::new(1, 2));
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial::<Q>(5), int(120));
        assert_eq!(factorial::<f64>(0), 1.0);
    }
}
