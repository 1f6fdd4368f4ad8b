use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive};

use super::{check_base, emit_integer, GenError};
use crate::dyadic::UnaryProgram;
use crate::meter::{DigitSink, Flow, InputHead, InputSymbol, OutSym, Register, SpaceMeter};
use crate::ratarith::long_division;

/// Long division of `p` by `q`, one digit per input symbol. Only the
/// remainder (always below `q`) changes between steps, so the peak space
/// depends on `q` and `base` but not on `n`.
///
/// Negative values are written sign-magnitude, so the digits are those of
/// `|p/q|` truncated.
#[derive(Debug, Clone)]
pub struct RationalProgram {
    p: BigInt,
    q: BigUint,
    base: u32,
}

impl RationalProgram {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigUint>, base: u32) -> Result<Self, GenError> {
        let q = q.into();
        if q == BigUint::ZERO {
            return Err(GenError::ZeroDenominator);
        }
        check_base(base)?;
        Ok(RationalProgram {
            p: p.into(),
            q,
            base,
        })
    }
}

impl UnaryProgram for RationalProgram {
    fn base(&self) -> u32 {
        self.base
    }

    fn run(
        &self,
        input: &mut dyn InputHead,
        out: &mut dyn DigitSink,
        meter: &SpaceMeter,
    ) -> Result<(), GenError> {
        let mut num = Register::new(meter);
        let mut den = Register::new(meter);
        num.set(BigInt::from(self.p.magnitude().clone()));
        den.set(BigInt::from(self.q.clone()));

        if self.p.is_negative() && out.emit(OutSym::Minus) == Flow::Stop {
            return Ok(());
        }
        let (whole, mut rem) = long_division(num.magnitude(), den.magnitude(), meter)
            .expect("q > 0");
        if emit_integer(&whole, self.base, out, meter) == Flow::Stop {
            return Ok(());
        }
        drop(whole);
        if input.scan() == InputSymbol::Blank || out.emit(OutSym::Point) == Flow::Stop {
            return Ok(());
        }
        let mut shifted = Register::new(meter);
        while input.scan() == InputSymbol::Zero {
            shifted.set(rem.value() * self.base);
            let (digit, next) = long_division(shifted.magnitude(), den.magnitude(), meter)
                .expect("q > 0");
            let d = digit.value().to_u8().expect("digit below base");
            if out.emit(OutSym::Digit(d)) == Flow::Stop {
                return Ok(());
            }
            rem = next;
            input.advance();
        }
        Ok(())
    }
}
