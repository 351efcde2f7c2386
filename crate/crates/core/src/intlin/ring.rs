//! Scalar rings for exact linear algebra.
//!
//! Every computation in the crate is generic over a Euclidean domain. Two
//! implementations ship: the integers ([`BigInt`]) and the rationals
//! ([`BigRational`]), the latter standing in for finite-dimensional vector
//! spaces over Q.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

/// A Euclidean domain with a canonical choice of associates.
pub trait Ring:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Eq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    const NAME: &'static str;

    fn from_i64(n: i64) -> Self;

    /// Euclidean size. Zero exactly for the zero element.
    fn size(&self) -> BigUint;

    /// Division with remainder: `self = q * d + r` with `r == 0` or
    /// `size(r) < size(d)`. `d` must be nonzero.
    fn div_rem_euclid(&self, d: &Self) -> (Self, Self);

    fn unit_inverse(&self) -> Option<Self>;

    fn is_unit(&self) -> bool {
        self.unit_inverse().is_some()
    }

    /// Returns `(n, u)` with `u` a unit and `n = u * self` the canonical associate.
    fn normalize(&self) -> (Self, Self);

    fn divides(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem_euclid(self).1.is_zero()
    }

    /// Factorization of a nonzero element into prime powers, as `(p, e)` pairs
    /// in increasing `p`. Units factor as the empty list. `None` when the
    /// element is too large to factor by trial division.
    fn prime_power_factors(&self) -> Option<Vec<(u64, u32)>>;

    fn to_json(&self) -> Value;

    fn from_json(value: &Value) -> Option<Self>;
}

impl Ring for BigInt {
    const NAME: &'static str = "integers";

    fn from_i64(n: i64) -> Self {
        BigInt::from(n)
    }

    fn size(&self) -> BigUint {
        self.magnitude().clone()
    }

    fn div_rem_euclid(&self, d: &Self) -> (Self, Self) {
        self.div_mod_floor(d)
    }

    fn unit_inverse(&self) -> Option<Self> {
        if self.is_one() || *self == -BigInt::one() {
            Some(self.clone())
        } else {
            None
        }
    }

    fn normalize(&self) -> (Self, Self) {
        if self.sign() == Sign::Minus {
            (-self.clone(), -BigInt::one())
        } else {
            (self.clone(), BigInt::one())
        }
    }

    fn prime_power_factors(&self) -> Option<Vec<(u64, u32)>> {
        let mut n = self.abs().to_u64()?;
        if n == 0 {
            return None;
        }
        let mut out = Vec::new();
        let mut p = 2u64;
        while p.checked_mul(p).is_some_and(|sq| sq <= n) {
            if p > 2_000_000 {
                return None;
            }
            if n % p == 0 {
                let mut e = 0;
                while n % p == 0 {
                    n /= p;
                    e += 1;
                }
                out.push((p, e));
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if n > 1 {
            out.push((n, 1));
        }
        Some(out)
    }

    fn to_json(&self) -> Value {
        match self.to_i64() {
            Some(n) => Value::from(n),
            None => Value::String(self.to_string()),
        }
    }

    fn from_json(value: &Value) -> Option<Self> {
        match value {
            Value::Number(n) => n.as_i64().map(BigInt::from),
            Value::String(s) => s.trim().parse().ok(),
            _ => None,
        }
    }
}

impl Ring for BigRational {
    const NAME: &'static str = "rationals";

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn size(&self) -> BigUint {
        if self.is_zero() {
            BigUint::zero()
        } else {
            BigUint::one()
        }
    }

    fn div_rem_euclid(&self, d: &Self) -> (Self, Self) {
        (self / d, BigRational::zero())
    }

    fn unit_inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn normalize(&self) -> (Self, Self) {
        if self.is_zero() {
            (BigRational::zero(), BigRational::one())
        } else {
            (BigRational::one(), self.recip())
        }
    }

    fn prime_power_factors(&self) -> Option<Vec<(u64, u32)>> {
        if self.is_zero() {
            None
        } else {
            Some(Vec::new())
        }
    }

    fn to_json(&self) -> Value {
        if self.is_integer() {
            self.to_integer().to_json()
        } else {
            Value::String(format!("{}/{}", self.numer(), self.denom()))
        }
    }

    fn from_json(value: &Value) -> Option<Self> {
        match value {
            Value::Number(n) => n.as_i64().map(Self::from_i64),
            Value::String(s) => {
                let s = s.trim();
                match s.split_once('/') {
                    Some((a, b)) => {
                        let a: BigInt = a.trim().parse().ok()?;
                        let b: BigInt = b.trim().parse().ok()?;
                        (!b.is_zero()).then(|| BigRational::new(a, b))
                    }
                    None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
                }
            }
            _ => None,
        }
    }
}

/// Shorthand for small integer literals in any ring.
pub fn int<R: Ring>(n: i64) -> R {
    R::from_i64(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_factorization() {
        let f = BigInt::from(360).prime_power_factors().unwrap();
        assert_eq!(f, vec![(2, 3), (3, 2), (5, 1)]);
        assert!(BigInt::from(-1).prime_power_factors().unwrap().is_empty());
        assert_eq!(BigInt::from(97).prime_power_factors().unwrap(), vec![(97, 1)]);
    }

    #[test]
    fn euclidean_remainder_is_smaller() {
        for a in -20i64..=20 {
            for d in [-7i64, -3, -1, 1, 2, 5] {
                let (q, r) = BigInt::from(a).div_rem_euclid(&BigInt::from(d));
                assert_eq!(q * BigInt::from(d) + r.clone(), BigInt::from(a));
                assert!(r.is_zero() || r.size() < BigInt::from(d).size());
            }
        }
    }

    #[test]
    fn rational_json_round_trip() {
        let x = BigRational::new(BigInt::from(-3), BigInt::from(4));
        assert_eq!(BigRational::from_json(&x.to_json()), Some(x));
        assert_eq!(BigRational::from_json(&Value::from(5)), Some(int(5)));
    }
}
