//! Reference values computed without the library: exact rationals, Newton
//! iteration and definitional digit series.

#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Fractional digits kept by every reference value.
pub const REF_DIGITS: usize = 300;

/// `floor(x · base^REF_DIGITS)` for a non-negative real `x`.
#[derive(Debug, Clone)]
pub struct RefValue {
    pub base: u32,
    pub scaled: BigInt,
}

impl RefValue {
    /// `floor(x · base^n)` for `n <= REF_DIGITS`.
    pub fn truncation(&self, n: usize) -> BigInt {
        assert!(n <= REF_DIGITS);
        let k = BigInt::from(self.base).pow((REF_DIGITS - n) as u32);
        self.scaled.div_floor(&k)
    }

    /// Fractional digit `i`, 1-based.
    pub fn digit(&self, i: usize) -> u8 {
        let b = BigInt::from(self.base);
        (self.truncation(i).mod_floor(&b)).to_u8().unwrap()
    }
}

fn pow(base: u32, e: usize) -> BigInt {
    BigInt::from(base).pow(e as u32)
}

fn eval_poly(coeffs: &[i64], x: &BigRational) -> BigRational {
    coeffs
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, &c| acc * x + BigRational::from_integer(c.into()))
}

fn derivative(coeffs: &[i64]) -> Vec<i64> {
    coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as i64).collect()
}

/// The root of `Σ coeffs[k]·x^k` near `guess` where the polynomial is
/// increasing, by Newton iteration on exact rationals. The result is
/// certified by a sign change across the last digit.
pub fn algebraic(coeffs: &[i64], guess: (i64, i64), base: u32) -> RefValue {
    let dp = derivative(coeffs);
    let scale = pow(base, REF_DIGITS + 16);
    let mut x = BigRational::new(guess.0.into(), guess.1.into());
    for _ in 0..64 {
        let step = eval_poly(coeffs, &x) / eval_poly(&dp, &x);
        // keep the iterate's denominator bounded
        let next = x - step;
        x = BigRational::new((next * BigRational::from_integer(scale.clone())).round().to_integer(), scale.clone());
    }
    let unit = pow(base, REF_DIGITS);
    let mut m = (x * BigRational::from_integer(unit.clone())).floor().to_integer();
    let at = |m: &BigInt| eval_poly(coeffs, &BigRational::new(m.clone(), unit.clone()));
    loop {
        if at(&m).is_positive() {
            m -= 1;
        } else if !at(&(&m + 1)).is_positive() {
            m += 1;
        } else {
            break;
        }
    }
    RefValue { base, scaled: m }
}

/// `p / q` exactly.
pub fn rational(p: i64, q: i64, base: u32) -> RefValue {
    RefValue {
        base,
        scaled: (BigInt::from(p) * pow(base, REF_DIGITS)).div_floor(&BigInt::from(q)),
    }
}

/// `Σ_{i >= 1} digit(i) · base^-i` for digits in `{0, 1}`, from a partial
/// sum and a bound on the tail.
pub fn digit_series(base: u32, digit: impl Fn(u64) -> bool) -> RefValue {
    let extra = 8;
    let terms = REF_DIGITS + extra;
    let mut sum = BigRational::zero();
    for i in 1..=terms as u64 {
        if digit(i) {
            sum += BigRational::new(BigInt::one(), pow(base, i as usize));
        }
    }
    // Σ_{i > terms} base^-i
    let tail = BigRational::new(BigInt::one(), pow(base, terms) * (base - 1));
    let scaled = sum * BigRational::from_integer(pow(base, REF_DIGITS));
    let floor = scaled.floor();
    let slack = (scaled - &floor) + tail * BigRational::from_integer(pow(base, REF_DIGITS));
    assert!(slack < BigRational::one(), "tail may carry into the last digit");
    RefValue { base, scaled: floor.to_integer() }
}

/// Positions `f(1) < f(2) < …`, kept while below the reference depth.
pub fn positions(f: impl Fn(u64) -> u64) -> Vec<u64> {
    (1..).map(f).take_while(|&p| p <= (REF_DIGITS + 8) as u64).collect()
}

pub fn factorial(k: u64) -> u64 {
    (1..=k).product()
}

pub fn sieve(limit: usize) -> Vec<bool> {
    let mut is_prime = vec![true; limit + 1];
    is_prime[0] = false;
    if limit >= 1 {
        is_prime[1] = false;
    }
    let mut p = 2;
    while p * p <= limit {
        if is_prime[p] {
            (p * p..=limit).step_by(p).for_each(|m| is_prime[m] = false);
        }
        p += 1;
    }
    is_prime
}

/// Reference values for the catalog numbers, by catalog name.
pub fn reference(name: &str) -> RefValue {
    match name {
        "sqrt2" => algebraic(&[-2, 0, 1], (3, 2), 2),
        "sqrt2-1" => algebraic(&[-1, 2, 1], (1, 2), 2),
        "golden" => algebraic(&[-1, -1, 1], (3, 2), 2),
        "golden-1" => algebraic(&[-1, 1, 1], (1, 2), 2),
        "cbrt2" => algebraic(&[-2, 0, 0, 1], (5, 4), 2),
        "1/3" => rational(1, 3, 2),
        "22/7" => rational(22, 7, 10),
        "mu-square" => {
            let p = positions(|k| k * k);
            digit_series(10, |i| p.contains(&i))
        }
        "mu-cube" => {
            let p = positions(|k| k * k * k);
            digit_series(10, |i| p.contains(&i))
        }
        "liouville" => {
            let p = positions(factorial);
            digit_series(10, |i| p.contains(&i))
        }
        "primes" => {
            let s = sieve(REF_DIGITS + 8);
            digit_series(10, |i| s[i as usize])
        }
        "thue-morse" => digit_series(2, |i| i.count_ones() % 2 == 1),
        _ => panic!("no reference for {name}"),
    }
}

/// `gcd` by the Euclidean algorithm on machine integers.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn to_biguint(v: &BigInt) -> BigUint {
    v.to_biguint().expect("non-negative")
}

#[test]
fn references_match_known_prefixes() {
    let bits = |r: &RefValue, n: usize| format!("{:0>width$b}", r.truncation(n) % (BigInt::one() << n), width = n);
    assert_eq!(bits(&reference("sqrt2"), 8), "01101010");
    assert_eq!(reference("sqrt2").truncation(0), BigInt::one());
    assert_eq!(bits(&reference("golden"), 8), "10011110");
    assert_eq!(bits(&reference("thue-morse"), 8), "11010011");
    assert_eq!(reference("22/7").truncation(3), BigInt::from(3142));
    assert_eq!(reference("liouville").truncation(8), BigInt::from(11000100));
    assert_eq!(reference("primes").truncation(8), BigInt::from(1101010));
    // 1/√2 ≈ 0.70710678118654752440
    let r = reference("sqrt2");
    assert_eq!(
        (r.truncation(128) * pow(10, 20)) >> 129u32,
        "70710678118654752440".parse::<BigInt>().unwrap()
    );
}
