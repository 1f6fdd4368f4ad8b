//! Exact rational arithmetic on metered storage.
//!
//! Fractions stay unreduced through [`rat_add`] and [`rat_mul`]; reduction is
//! the separate [`rat_lowest_terms`], done by trial division with an
//! incrementing divisor. Integer division is schoolbook long division, one
//! quotient bit per step, so its measured space is linear in the bit length
//! of the operands.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::meter::{Register, SpaceMeter};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RatError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed rational {0:?} (expected p/q with q > 0)")]
    Malformed(String),
}

/// `numerator / denominator` with a positive denominator, not necessarily
/// in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rational {
    num: BigInt,
    den: BigUint,
}

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigUint>) -> Result<Self, RatError> {
        let den = den.into();
        if den.is_zero() {
            return Err(RatError::DivisionByZero);
        }
        Ok(Rational {
            num: num.into(),
            den,
        })
    }

    /// # Panics
    /// If `den` is zero.
    pub fn from_parts(num: impl Into<BigInt>, den: impl Into<BigUint>) -> Self {
        Self::new(num, den).expect("nonzero denominator")
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Rational {
            num: n.into(),
            den: BigUint::one(),
        }
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigUint {
        &self.den
    }

    fn cross(&self, other: &Rational) -> (BigInt, BigInt) {
        (
            &self.num * BigInt::from(other.den.clone()),
            &other.num * BigInt::from(self.den.clone()),
        )
    }

    /// Equality of values (`2/6` equals `1/3`).
    pub fn value_eq(&self, other: &Rational) -> bool {
        let (a, b) = self.cross(other);
        a == b
    }

    pub fn cmp_value(&self, other: &Rational) -> Ordering {
        let (a, b) = self.cross(other);
        a.cmp(&b)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Rational {
    type Err = RatError;

    /// Accepts `p/q` or a bare integer `p`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RatError::Malformed(s.to_string());
        let (p, q) = s.split_once('/').unwrap_or((s, "1"));
        let num: BigInt = p.trim().parse().map_err(|_| bad())?;
        let den: BigUint = q.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        Ok(Rational { num, den })
    }
}

/// Schoolbook long division of `a` by `b`, leaving the quotient and
/// remainder on fresh registers of `meter`. A third register tracks the bit
/// position being brought down.
pub fn long_division<'m>(
    a: &BigUint,
    b: &BigUint,
    meter: &'m SpaceMeter,
) -> Result<(Register<'m>, Register<'m>), RatError> {
    if b.is_zero() {
        return Err(RatError::DivisionByZero);
    }
    let divisor = BigInt::from(b.clone());
    let mut q = Register::new(meter);
    let mut r = Register::new(meter);
    let mut idx = Register::new(meter);
    q.set(0u32);
    r.set(0u32);
    let top = a.bits();
    idx.set(top);
    while !idx.is_zero() {
        idx.decr();
        let k = idx.to_u64().expect("bit index fits u64");
        let bit = u32::from(a.bit(k));
        let mut rem = (r.value() << 1u32) + bit;
        let mut quo = q.value() << 1u32;
        if rem >= divisor {
            rem -= &divisor;
            quo += 1u32;
        }
        r.set(rem);
        q.set(quo);
    }
    Ok((q, r))
}

/// `(q, r)` with `a = q·b + r` and `0 <= r < b`.
pub fn int_div(a: &BigUint, b: &BigUint, meter: &SpaceMeter) -> Result<(BigUint, BigUint), RatError> {
    let (q, r) = long_division(a, b, meter)?;
    Ok((q.to_biguint(), r.to_biguint()))
}

/// `a1·a2 / b1·b2`, unreduced.
pub fn rat_mul(r1: &Rational, r2: &Rational, meter: &SpaceMeter) -> Rational {
    let mut num = Register::signed(meter);
    let mut den = Register::new(meter);
    num.set(&r1.num * &r2.num);
    den.set(BigInt::from(&r1.den * &r2.den));
    Rational {
        num: num.value().clone(),
        den: den.to_biguint(),
    }
}

/// `(a1·b2 + a2·b1) / b1·b2`, unreduced.
pub fn rat_add(r1: &Rational, r2: &Rational, meter: &SpaceMeter) -> Rational {
    let mut den = Register::new(meter);
    den.set(BigInt::from(&r1.den * &r2.den));
    let mut left = Register::signed(meter);
    left.set(&r1.num * BigInt::from(r2.den.clone()));
    let mut right = Register::signed(meter);
    right.set(&r2.num * BigInt::from(r1.den.clone()));
    let mut num = Register::signed(meter);
    num.set(left.value() + right.value());
    Rational {
        num: num.value().clone(),
        den: den.to_biguint(),
    }
}

/// Reduces a fraction by dividing out every trial divisor `i = 2, 3, …`
/// that divides both parts, stopping once `i` exceeds one of them.
pub fn rat_lowest_terms(r: &Rational, meter: &SpaceMeter) -> Rational {
    let negative = r.num.is_negative();
    let mut a = Register::new(meter);
    let mut b = Register::new(meter);
    let mut i = Register::new(meter);
    a.set(BigInt::from(r.num.magnitude().clone()));
    b.set(BigInt::from(r.den.clone()));
    i.set(2u32);
    loop {
        let past_b = b.cmp_value(&i) == Ordering::Less;
        let past_a = !a.is_zero() && a.cmp_value(&i) == Ordering::Less;
        if past_b || past_a {
            break;
        }
        let divisor = i.to_biguint();
        let (qa, ra) = long_division(a.magnitude(), &divisor, meter).expect("i >= 2");
        let (qb, rb) = long_division(b.magnitude(), &divisor, meter).expect("i >= 2");
        if ra.is_zero() && rb.is_zero() {
            a.copy_from(&qa);
            b.copy_from(&qb);
        } else {
            i.incr();
        }
    }
    let mag = BigInt::from(a.to_biguint());
    Rational {
        num: if negative { -mag } else { mag },
        den: b.to_biguint(),
    }
}
