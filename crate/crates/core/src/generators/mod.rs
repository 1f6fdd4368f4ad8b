//! Concrete computable reals as [`DigitGenerator`]s.
//!
//! Each generator is a [`UnaryProgram`]: it reads `0^n` one symbol at a time
//! and writes digits as it goes, keeping every growing quantity on metered
//! registers. The measured peak space therefore tracks the algorithm itself:
//!
//! | generator | growing state | expected peak |
//! |---|---|---|
//! | [`RationalProgram`] | remainder `< q` | constant |
//! | [`AlgebraicProgram`] | current approximation and polynomial value | linear |
//! | [`MuProgram`] (`k^d`) | input/output positions, `f(pos_in)` | logarithmic |
//! | [`MuProgram`] (`k!`) | running factorial | `n log n` |
//! | [`AutomaticProgram`] | radix-k counter | logarithmic |
//! | [`IndicatorProgram`] (primes) | counter and trial divisor | logarithmic |

mod algebraic;
mod automatic;
pub mod builtins;
mod indicator;
mod mu;
mod nth;
mod rational;

use std::sync::Arc;

use thiserror::Error;

pub use algebraic::{AlgebraicProgram, AlgebraicSpec};
pub use automatic::{AutomaticProgram, AutomatonSpec};
pub use indicator::{EmptySet, FiniteSet, IndicatorProgram, Membership, PredicateSet, Primes};
pub use mu::{ExponentFunction, MuProgram};
pub use nth::{nth_digit, DigitProbe};
pub use rational::RationalProgram;

use crate::dyadic::{DigitGenerator, Dyadic};
use crate::meter::{DigitSink, Flow, OutSym, Register, SpaceMeter};
use crate::ratarith::long_division;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("seed does not isolate a root: {0}")]
    SeedInvalid(String),
    #[error("exponent function is not strictly increasing at k = {0}")]
    NotIncreasing(u64),
    #[error("denominator must be positive")]
    ZeroDenominator,
    #[error("unsupported base {0}")]
    UnsupportedBase(u32),
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error("invalid spec document: {0}")]
    InvalidSpec(String),
    #[error("digit positions start at 1")]
    InvalidPosition,
    #[error("generator produced {got} fractional digits, expected {expected}")]
    ShortOutput { expected: usize, got: usize },
    #[error("precision {0} does not fit in memory")]
    PrecisionTooLarge(u64),
}

pub(crate) fn check_base(base: u32) -> Result<(), GenError> {
    if (2..=crate::dyadic::MAX_BASE).contains(&base) {
        Ok(())
    } else {
        Err(GenError::UnsupportedBase(base))
    }
}

/// Writes `value` in `base`, most significant digit first, using a
/// power-of-base register and repeated long division.
pub(crate) fn emit_integer(
    value: &Register<'_>,
    base: u32,
    out: &mut dyn DigitSink,
    meter: &SpaceMeter,
) -> Flow {
    let b = num_bigint::BigUint::from(base);
    let mut power = Register::new(meter);
    let mut rest = Register::new(meter);
    power.set(1u32);
    rest.copy_from(value);
    while &(power.magnitude() * &b) <= value.magnitude() {
        power.set(power.value() * base);
    }
    loop {
        let (digit, rem) = long_division(rest.magnitude(), power.magnitude(), meter)
            .expect("power is positive");
        let d = digit.to_u64().expect("single digit") as u8;
        if out.emit(OutSym::Digit(d)) == Flow::Stop {
            return Flow::Stop;
        }
        rest.copy_from(&rem);
        if power.is_one() {
            return Flow::Continue;
        }
        let (smaller, _) = long_division(power.magnitude(), &b, meter).expect("base >= 2");
        power.copy_from(&smaller);
    }
}

/// `p/q` in `base`, truncated to `n` fractional digits.
pub fn gen_rational(
    p: i64,
    q: u64,
    base: u32,
    n: usize,
    meter: &SpaceMeter,
) -> Result<Dyadic, GenError> {
    DigitGenerator::new(format!("{p}/{q}"), RationalProgram::new(p, q, base)?).eval(n, meter)
}

pub fn gen_algebraic(spec: &AlgebraicSpec, n: usize, meter: &SpaceMeter) -> Result<Dyadic, GenError> {
    DigitGenerator::new("algebraic", AlgebraicProgram::new(spec.clone())).eval(n, meter)
}

pub fn gen_mu_f(
    f: &ExponentFunction,
    base: u32,
    n: usize,
    meter: &SpaceMeter,
) -> Result<Dyadic, GenError> {
    DigitGenerator::new("mu", MuProgram::new(f.clone(), base)?).eval(n, meter)
}

pub fn gen_automatic(spec: &AutomatonSpec, n: usize, meter: &SpaceMeter) -> Result<Dyadic, GenError> {
    DigitGenerator::new("automatic", AutomaticProgram::new(spec.clone())).eval(n, meter)
}

pub fn gen_indicator(
    set: Arc<dyn Membership>,
    base: u32,
    n: usize,
    meter: &SpaceMeter,
) -> Result<Dyadic, GenError> {
    DigitGenerator::new("indicator", IndicatorProgram::new(set, base)?).eval(n, meter)
}
