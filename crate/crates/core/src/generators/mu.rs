use num_bigint::{BigInt, BigUint};
use num_traits::One;

use super::{check_base, GenError};
use crate::dyadic::UnaryProgram;
use crate::meter::{DigitSink, Flow, InputHead, InputSymbol, OutSym, Register, SpaceMeter};

/// A strictly increasing `f: ℕ⁺ → ℕ⁺` selecting the positions of the ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExponentFunction {
    /// `f(k) = k^d`, `d >= 1`.
    Power(u32),
    /// `f(k) = k!`, kept as a running product.
    Factorial,
    /// Explicit values `f(1), f(2), …`; positions beyond the table are never
    /// hit.
    Table(Vec<u64>),
}

impl ExponentFunction {
    pub fn power(d: u32) -> Result<Self, GenError> {
        if d == 0 {
            return Err(GenError::NotIncreasing(1));
        }
        Ok(ExponentFunction::Power(d))
    }

    pub fn table(values: Vec<u64>) -> Result<Self, GenError> {
        if values.first() == Some(&0) {
            return Err(GenError::InvalidSpec("f(1) must be positive".into()));
        }
        if let Some(k) = values.windows(2).position(|w| w[1] <= w[0]) {
            return Err(GenError::NotIncreasing(k as u64 + 1));
        }
        Ok(ExponentFunction::Table(values))
    }

    /// `f(k)`, or `None` past the end of a table.
    pub fn value(&self, k: u64) -> Option<BigUint> {
        match self {
            ExponentFunction::Power(d) => Some(BigUint::from(k).pow(*d)),
            ExponentFunction::Factorial => Some((1..=k).map(BigUint::from).product()),
            ExponentFunction::Table(t) => t.get(k.checked_sub(1)? as usize).map(|&v| v.into()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            ExponentFunction::Power(d) => format!("k^{d}"),
            ExponentFunction::Factorial => "k!".into(),
            ExponentFunction::Table(t) => format!("table[{}]", t.len()),
        }
    }
}

/// Streams `Σ base^-f(k)`. Three registers: `pos_in` (the current `k`),
/// `pos_out` (the next output position) and `res` (holding `f(k)`). For
/// each input symbol the program computes `f(pos_in)`, then writes zeros up
/// to position `f(pos_in)` and a one there. The output position only moves
/// forward.
///
/// The loop keeps computing `f(pos_in)` for every input symbol even after
/// the output is complete, so the space used is that of `f(n)`.
#[derive(Debug, Clone)]
pub struct MuProgram {
    f: ExponentFunction,
    base: u32,
}

impl MuProgram {
    pub fn new(f: ExponentFunction, base: u32) -> Result<Self, GenError> {
        check_base(base)?;
        Ok(MuProgram { f, base })
    }

    fn compute(&self, pos_in: &Register<'_>, res: &mut Register<'_>) -> bool {
        match &self.f {
            ExponentFunction::Power(d) => {
                res.copy_from(pos_in);
                for _ in 1..*d {
                    res.set(res.value() * pos_in.value());
                }
                true
            }
            ExponentFunction::Factorial => {
                res.set(res.value() * pos_in.value());
                true
            }
            ExponentFunction::Table(t) => {
                let k = pos_in.to_u64().expect("position fits u64") as usize;
                match t.get(k - 1) {
                    Some(&v) => {
                        res.set(v);
                        true
                    }
                    None => false,
                }
            }
        }
    }
}

impl UnaryProgram for MuProgram {
    fn base(&self) -> u32 {
        self.base
    }

    fn run(
        &self,
        input: &mut dyn InputHead,
        out: &mut dyn DigitSink,
        meter: &SpaceMeter,
    ) -> Result<(), GenError> {
        if out.emit(OutSym::Digit(0)) == Flow::Stop || input.scan() == InputSymbol::Blank {
            return Ok(());
        }
        if out.emit(OutSym::Point) == Flow::Stop {
            return Ok(());
        }
        let mut pos_in = Register::new(meter);
        let mut pos_out = Register::new(meter);
        let mut res = Register::new(meter);
        pos_in.set(1u32);
        pos_out.set(1u32);
        res.set(BigInt::one());
        let mut open = true;

        while input.scan() == InputSymbol::Zero {
            let defined = self.compute(&pos_in, &mut res);
            while open {
                if !defined {
                    // f is exhausted: pad with zeros up to the input read so far
                    if pos_out.cmp_value(&pos_in).is_gt() {
                        break;
                    }
                    open = out.emit(OutSym::Digit(0)) == Flow::Continue;
                    pos_out.incr();
                    continue;
                }
                debug_assert!(pos_out.cmp_value(&res).is_le(), "output position moved back");
                let hit = pos_out.cmp_value(&res).is_eq();
                open = out.emit(OutSym::Digit(u8::from(hit))) == Flow::Continue;
                pos_out.incr();
                if hit {
                    break;
                }
            }
            pos_in.incr();
            input.advance();
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_mu_f;

    fn run(f: ExponentFunction, n: usize) -> String {
        gen_mu_f(&f, 10, n, &SpaceMeter::new()).unwrap().to_string()
    }

    #[test]
    fn examples() {
        assert_eq!(run(ExponentFunction::Power(2), 10), "0.1001000010");
        assert_eq!(run(ExponentFunction::Factorial, 8), "0.11000100");
        assert_eq!(run(ExponentFunction::Power(3), 9), "0.100000010");
        assert_eq!(run(ExponentFunction::Power(1), 4), "0.1111");
        assert_eq!(run(ExponentFunction::Power(2), 0), "0");
    }

    #[test]
    fn tables() {
        let t = ExponentFunction::table(vec![2, 3, 7]).unwrap();
        assert_eq!(run(t, 9), "0.011000100");
        assert_eq!(
            ExponentFunction::table(vec![1, 3, 3]),
            Err(GenError::NotIncreasing(2))
        );
        assert!(ExponentFunction::table(vec![0, 1]).is_err());
        assert!(ExponentFunction::power(0).is_err());
    }

    #[test]
    fn factorial_space_outgrows_power_space() {
        let peak = |f: ExponentFunction, n| {
            let m = SpaceMeter::new();
            gen_mu_f(&f, 10, n, &m).unwrap();
            m.peak_cells()
        };
        let sq = peak(ExponentFunction::Power(2), 1024);
        let fact = peak(ExponentFunction::Factorial, 1024);
        assert!(sq < 80, "{sq}");
        assert!(fact > 8000, "{fact}");
    }
}
