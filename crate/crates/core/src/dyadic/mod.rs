//! Exact base-b fixed-point numbers.
//!
//! A [`Dyadic`] is a sign, a string of integer digits and a string of
//! fractional digits; its precision is the number of fractional digits.
//! Base 2 gives the dyadic rationals proper. The canonical text form is
//! `[-]I.F`, with the point omitted when the precision is zero.

mod cauchy;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Pow;
use thiserror::Error;

pub use cauchy::{DigitGenerator, UnaryProgram};

use crate::ratarith::Rational;

pub const MAX_BASE: u32 = 36;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DyadicError {
    #[error("malformed numeral {0:?}")]
    MalformedNumeral(String),
    #[error("base mismatch: {0} vs {1}")]
    BaseMismatch(u32, u32),
    #[error("unsupported base {0} (expected 2..=36)")]
    UnsupportedBase(u32),
}

pub fn digit_char(d: u8) -> char {
    char::from_digit(u32::from(d), MAX_BASE).expect("digit below 36")
}

fn check_base(base: u32) -> Result<(), DyadicError> {
    if (2..=MAX_BASE).contains(&base) {
        Ok(())
    } else {
        Err(DyadicError::UnsupportedBase(base))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    base: u32,
    negative: bool,
    int_digits: Vec<u8>,
    frac_digits: Vec<u8>,
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({} base {})", self, self.base)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::with_capacity(self.len() + 2);
        if self.negative {
            s.push('-');
        }
        s.extend(self.int_digits.iter().map(|&d| digit_char(d)));
        if !self.frac_digits.is_empty() {
            s.push('.');
            s.extend(self.frac_digits.iter().map(|&d| digit_char(d)));
        }
        f.write_str(&s)
    }
}

impl Dyadic {
    /// Builds a number from raw digits, normalising leading integer zeros
    /// and negative zero.
    ///
    /// # Panics
    /// If a digit is not below `base` or the base is outside `2..=36`.
    pub fn from_digits(base: u32, negative: bool, int_digits: Vec<u8>, frac_digits: Vec<u8>) -> Self {
        check_base(base).expect("valid base");
        assert!(
            int_digits.iter().chain(&frac_digits).all(|&d| u32::from(d) < base),
            "digit out of range for base {base}"
        );
        let first = int_digits.iter().position(|&d| d != 0);
        let int_digits = match first {
            Some(p) => int_digits[p..].to_vec(),
            None => vec![0],
        };
        let mut d = Dyadic {
            base,
            negative,
            int_digits,
            frac_digits,
        };
        if d.is_zero() {
            d.negative = false;
        }
        d
    }

    pub fn zero(base: u32, prec: usize) -> Self {
        Self::from_digits(base, false, vec![0], vec![0; prec])
    }

    /// Parses `[-]digits[.digits]` in the given base.
    pub fn parse(s: &str, base: u32) -> Result<Self, DyadicError> {
        check_base(base)?;
        let bad = || DyadicError::MalformedNumeral(s.to_string());
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) if !f.is_empty() => (i, Some(f)),
            Some(_) => return Err(bad()),
            None => (body, None),
        };
        if int_part.is_empty() {
            return Err(bad());
        }
        let digits = |part: &str| -> Result<Vec<u8>, DyadicError> {
            part.chars()
                .map(|c| {
                    c.to_digit(base)
                        .map(|d| d as u8)
                        .ok_or_else(bad)
                })
                .collect()
        };
        let int_digits = digits(int_part)?;
        let frac_digits = match frac_part {
            Some(f) => digits(f)?,
            None => Vec::new(),
        };
        Ok(Self::from_digits(base, negative, int_digits, frac_digits))
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn int_digits(&self) -> &[u8] {
        &self.int_digits
    }

    pub fn frac_digits(&self) -> &[u8] {
        &self.frac_digits
    }

    /// Number of fractional digits.
    pub fn prec(&self) -> usize {
        self.frac_digits.len()
    }

    /// Number of digit symbols in the representation.
    pub fn len(&self) -> usize {
        self.int_digits.len() + self.frac_digits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_zero(&self) -> bool {
        self.int_digits.iter().chain(&self.frac_digits).all(|&d| d == 0)
    }

    /// `true` for numbers in `[0, 1)`.
    pub fn is_unit_interval(&self) -> bool {
        !self.negative && self.int_digits == [0]
    }

    /// The `i`-th fractional digit, 1-based.
    pub fn frac_digit(&self, i: usize) -> Option<u8> {
        i.checked_sub(1).and_then(|k| self.frac_digits.get(k).copied())
    }

    /// Drops the sign and the integer part.
    pub fn fractional(&self) -> Dyadic {
        Dyadic {
            base: self.base,
            negative: false,
            int_digits: vec![0],
            frac_digits: self.frac_digits.clone(),
        }
    }

    /// `|self| · base^prec` as an integer.
    pub fn scaled_magnitude(&self) -> BigUint {
        let all: Vec<u8> = self.int_digits.iter().chain(&self.frac_digits).copied().collect();
        BigUint::from_radix_be(&all, self.base).unwrap_or_default()
    }

    /// `self · base^n` when `n >= prec`.
    pub fn scaled_to(&self, n: usize) -> Option<BigInt> {
        let shift = n.checked_sub(self.prec())?;
        let m = self.scaled_magnitude() * BigUint::from(self.base).pow(shift);
        let v = BigInt::from(m);
        Some(if self.negative { -v } else { v })
    }

    /// The exact value as an (unreduced) rational.
    pub fn to_rational(&self) -> Rational {
        let num = self.scaled_to(self.prec()).expect("prec >= prec");
        Rational::new(num, BigUint::from(self.base).pow(self.prec()))
            .expect("positive denominator")
    }

    /// Builds `m / base^prec` from a signed integer `m`.
    pub fn from_scaled(base: u32, m: &BigInt, prec: usize) -> Self {
        let negative = m.sign() == num_bigint::Sign::Minus;
        let mut digits = m.magnitude().to_radix_be(base);
        if digits.len() < prec + 1 {
            let mut padded = vec![0; prec + 1 - digits.len()];
            padded.extend(digits);
            digits = padded;
        }
        let split = digits.len() - prec;
        let frac = digits.split_off(split);
        Self::from_digits(base, negative, digits, frac)
    }

    /// Floor of `self` at `n` fractional digits: the result is `<= self`,
    /// within `base^-n`, and has precision exactly `n`.
    pub fn truncate(&self, n: usize) -> Dyadic {
        if n >= self.prec() {
            let mut frac = self.frac_digits.clone();
            frac.resize(n, 0);
            return Dyadic {
                frac_digits: frac,
                ..self.clone()
            };
        }
        let dropped_nonzero = self.frac_digits[n..].iter().any(|&d| d != 0);
        let mut cut = Dyadic {
            frac_digits: self.frac_digits[..n].to_vec(),
            ..self.clone()
        };
        if self.negative && dropped_nonzero {
            // floor of a negative number moves away from zero
            let m = BigInt::from(cut.scaled_magnitude()) + 1u32;
            cut = Dyadic::from_scaled(self.base, &(-m), n);
        }
        Dyadic::from_digits(cut.base, cut.negative, cut.int_digits, cut.frac_digits)
    }

    /// Digit-wise comparison of exact values.
    pub fn compare(&self, other: &Dyadic) -> Result<Ordering, DyadicError> {
        if self.base != other.base {
            return Err(DyadicError::BaseMismatch(self.base, other.base));
        }
        let ord = match (self.negative, other.negative) {
            (false, true) => Ordering::Greater,
            (true, false) => Ordering::Less,
            (false, false) => cmp_magnitude(self, other),
            (true, true) => cmp_magnitude(other, self),
        };
        Ok(ord)
    }
}

fn cmp_magnitude(a: &Dyadic, b: &Dyadic) -> Ordering {
    a.int_digits
        .len()
        .cmp(&b.int_digits.len())
        .then_with(|| a.int_digits.cmp(&b.int_digits))
        .then_with(|| {
            let n = a.frac_digits.len().max(b.frac_digits.len());
            let at = |d: &Dyadic, i: usize| d.frac_digits.get(i).copied().unwrap_or(0);
            (0..n)
                .map(|i| at(a, i).cmp(&at(b, i)))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
}

/// Orders two numbers of the same base by exact value.
pub fn dyadic_cmp(a: &Dyadic, b: &Dyadic) -> Result<Ordering, DyadicError> {
    a.compare(b)
}

pub fn dyadic_parse(s: &str, base: u32) -> Result<Dyadic, DyadicError> {
    Dyadic::parse(s, base)
}

pub fn dyadic_truncate(d: &Dyadic, n: usize) -> Dyadic {
    d.truncate(n)
}
