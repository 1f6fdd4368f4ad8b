use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Deserialize;

use super::{emit_integer, GenError};
use crate::dyadic::{Dyadic, UnaryProgram};
use crate::meter::{DigitSink, Flow, InputHead, InputSymbol, OutSym, Register, SpaceMeter};

/// A real root of `f(x) = a_r x^r + … + a_0` isolated by a binary seed:
/// `f(seed) <= 0 < f(seed + 2^-k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraicSpec {
    coeffs: Vec<BigInt>,
    seed: Dyadic,
    k: usize,
    sign_flipped: bool,
}

#[derive(Deserialize)]
struct AlgebraicDoc {
    coeffs: Vec<serde_json::Value>,
    seed: String,
    #[serde(default)]
    k: Option<usize>,
}

/// `2^(scale·r) · f(m / 2^scale)` as an exact integer. Same sign as `f`.
pub(crate) fn scaled_value(coeffs: &[BigInt], m: &BigInt, scale: usize) -> BigInt {
    let r = coeffs.len() - 1;
    let mut acc = BigInt::zero();
    let mut power = BigInt::from(1u32);
    for (j, a) in coeffs.iter().enumerate() {
        acc += (a * &power) << (scale * (r - j));
        power *= m;
    }
    acc
}

impl AlgebraicSpec {
    /// `coeffs` are `a_0, …, a_r`. The seed is a non-negative binary
    /// dyadic with at most `k` fractional bits. If `f` is decreasing across
    /// the seed interval, `-f` is used instead.
    pub fn new(coeffs: Vec<BigInt>, seed: Dyadic, k: usize) -> Result<Self, GenError> {
        let invalid = |why: &str| GenError::SeedInvalid(why.to_string());
        if coeffs.len() < 2 {
            return Err(invalid("polynomial must have degree at least 1"));
        }
        if coeffs.last().is_some_and(Zero::is_zero) {
            return Err(invalid("leading coefficient is zero"));
        }
        if seed.base() != 2 {
            return Err(invalid("seed must be binary"));
        }
        if seed.is_negative() {
            return Err(invalid("seed must be non-negative"));
        }
        if seed.prec() > k {
            return Err(invalid("seed has more than k fractional bits"));
        }
        let seed = Dyadic::from_scaled(2, &seed.scaled_to(k).expect("prec <= k"), k);
        let lo = BigInt::from(seed.scaled_magnitude());
        let hi = &lo + 1u32;
        let f_lo = scaled_value(&coeffs, &lo, k);
        let f_hi = scaled_value(&coeffs, &hi, k);
        let (coeffs, sign_flipped) = if !f_lo.is_positive() && f_hi.is_positive() {
            (coeffs, false)
        } else if !f_lo.is_negative() && f_hi.is_negative() {
            (coeffs.into_iter().map(|a| -a).collect(), true)
        } else {
            return Err(invalid("f does not change sign on the seed interval"));
        };
        Ok(AlgebraicSpec {
            coeffs,
            seed,
            k,
            sign_flipped,
        })
    }

    /// Parses `{"coeffs":[a_0,…,a_r],"seed":"1.01","k":2}`. `k` defaults to
    /// the number of fractional bits in the seed.
    pub fn from_json(text: &str) -> Result<Self, GenError> {
        let doc: AlgebraicDoc =
            serde_json::from_str(text).map_err(|e| GenError::InvalidSpec(e.to_string()))?;
        let seed = Dyadic::parse(&doc.seed, 2).map_err(|e| GenError::InvalidSpec(e.to_string()))?;
        let k = doc.k.unwrap_or(seed.prec());
        // integers may be given as JSON numbers or, when large, as strings
        let coeffs = doc
            .coeffs
            .iter()
            .map(|v| {
                let text = match v {
                    serde_json::Value::Number(x) => x.to_string(),
                    serde_json::Value::String(x) => x.clone(),
                    other => other.to_string(),
                };
                text.parse::<BigInt>()
                    .map_err(|_| GenError::InvalidSpec(format!("coefficient {v} is not an integer")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(coeffs, seed, k)
    }

    /// Coefficients as used by the generator (negated if `sign_flipped`).
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn seed(&self) -> &Dyadic {
        &self.seed
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn sign_flipped(&self) -> bool {
        self.sign_flipped
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Bisection on the isolating interval, one bit per input symbol.
///
/// Register `approx` holds `α_i · 2^i`. At each step the midpoint numerator
/// `mid = 2·approx + 1` is raised to powers `mid^j` in `terms[j]`, each term
/// is scaled by `a_j · 2^((i+1)(r-j))`, and `sum` collects the total. The
/// next bit is 1 exactly when `sum <= 0`.
#[derive(Debug, Clone)]
pub struct AlgebraicProgram {
    spec: AlgebraicSpec,
}

impl AlgebraicProgram {
    pub fn new(spec: AlgebraicSpec) -> Self {
        AlgebraicProgram { spec }
    }
}

impl UnaryProgram for AlgebraicProgram {
    fn base(&self) -> u32 {
        2
    }

    fn run(
        &self,
        input: &mut dyn InputHead,
        out: &mut dyn DigitSink,
        meter: &SpaceMeter,
    ) -> Result<(), GenError> {
        let spec = &self.spec;
        let r = spec.degree();
        let coeffs = &spec.coeffs;

        let whole = Register::from_value(meter, BigInt::from(spec.seed.scaled_magnitude() >> spec.k));
        if emit_integer(&whole, 2, out, meter) == Flow::Stop {
            return Ok(());
        }
        drop(whole);
        if input.scan() == InputSymbol::Blank || out.emit(OutSym::Point) == Flow::Stop {
            return Ok(());
        }
        // the first k bits are part of the description
        for &bit in spec.seed.frac_digits() {
            if input.scan() == InputSymbol::Blank {
                return Ok(());
            }
            if out.emit(OutSym::Digit(bit)) == Flow::Stop {
                return Ok(());
            }
            input.advance();
        }

        let mut approx = Register::from_value(meter, BigInt::from(spec.seed.scaled_magnitude()));
        let mut step = Register::from_value(meter, spec.k);
        let mut mid = Register::new(meter);
        let mut terms: Vec<Register> = (0..r).map(|_| Register::signed(meter)).collect();
        let mut sum = Register::signed(meter);

        while input.scan() == InputSymbol::Zero {
            let i = step.to_u64().expect("step fits u64") as usize;
            debug_assert!(!scaled_value(coeffs, approx.value(), i).is_positive());
            debug_assert!(scaled_value(coeffs, &(approx.value() + 1u32), i).is_positive());

            mid.set((approx.value() << 1u32) + 1u32);
            terms[0].copy_from(&mid);
            for j in 1..r {
                let next = terms[j - 1].value() * mid.value();
                terms[j].set(next);
            }
            sum.set(&coeffs[0] << ((i + 1) * r));
            for j in 1..=r {
                let t = &mut terms[j - 1];
                t.set((t.value() * &coeffs[j]) << ((i + 1) * (r - j)));
                sum.set(sum.value() + t.value());
            }

            let bit = u8::from(!sum.value().is_positive());
            approx.set((approx.value() << 1u32) + bit);
            step.incr();
            if out.emit(OutSym::Digit(bit)) == Flow::Stop {
                return Ok(());
            }
            input.advance();
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_algebraic;

    fn spec(coeffs: &[i64], seed: &str, k: usize) -> Result<AlgebraicSpec, GenError> {
        let seed = Dyadic::parse(seed, 2).unwrap();
        AlgebraicSpec::new(coeffs.iter().map(|&c| BigInt::from(c)).collect(), seed, k)
    }

    fn run(s: &AlgebraicSpec, n: usize) -> String {
        gen_algebraic(s, n, &SpaceMeter::new()).unwrap().to_string()
    }

    #[test]
    fn quadratic_roots() {
        assert_eq!(run(&spec(&[-2, 0, 1], "1", 0).unwrap(), 8), "1.01101010");
        assert_eq!(run(&spec(&[-1, -1, 1], "1", 0).unwrap(), 8), "1.10011110");
        assert_eq!(run(&spec(&[-2, 0, 0, 1], "1", 0).unwrap(), 8), "1.01000010");
        assert_eq!(run(&spec(&[-2, 0, 1], "1", 0).unwrap(), 0), "1");
    }

    #[test]
    fn longer_seed_continues_the_same_expansion() {
        let short = run(&spec(&[-2, 0, 1], "1", 0).unwrap(), 40);
        let long = run(&spec(&[-2, 0, 1], "1.0110", 4).unwrap(), 40);
        assert_eq!(short, long);
        assert_eq!(run(&spec(&[-2, 0, 1], "1.0110", 4).unwrap(), 2), "1.01");
    }

    #[test]
    fn seed_validation() {
        assert!(matches!(spec(&[-2, 0, 1], "0", 0), Err(GenError::SeedInvalid(_))));
        assert!(matches!(spec(&[5], "0", 0), Err(GenError::SeedInvalid(_))));
        assert!(matches!(spec(&[-2, 0, 0], "1", 0), Err(GenError::SeedInvalid(_))));
        assert!(matches!(spec(&[-2, 0, 1], "1.1", 0), Err(GenError::SeedInvalid(_))));
        let flipped = spec(&[2, 0, -1], "1", 0).unwrap();
        assert!(flipped.sign_flipped());
        assert_eq!(run(&flipped, 8), "1.01101010");
    }

    #[test]
    fn dyadic_root_follows_the_literal_rule() {
        // x - 1 with seed 0 does not isolate: f(1) = 0 is not positive
        assert!(spec(&[-1, 1], "0", 0).is_err());
        // 2x - 1: the midpoint 1/2 gives 0, so the first bit is 1
        let half = spec(&[-1, 2], "0", 0).unwrap();
        assert_eq!(run(&half, 4), "0.1000");
    }

    #[test]
    fn json_round_trip() {
        let s = AlgebraicSpec::from_json(r#"{"coeffs":[-2,0,1],"seed":"1","k":0}"#).unwrap();
        assert_eq!(run(&s, 8), "1.01101010");
        assert!(matches!(
            AlgebraicSpec::from_json(r#"{"coeffs":"x"}"#),
            Err(GenError::InvalidSpec(_))
        ));
    }

    #[test]
    fn space_grows_linearly() {
        let s = spec(&[-2, 0, 1], "1", 0).unwrap();
        let peak = |n| {
            let m = SpaceMeter::new();
            gen_algebraic(&s, n, &m).unwrap();
            m.peak_cells()
        };
        let (a, b) = (peak(100), peak(200));
        assert!(b > a && b < 3 * a, "{a} {b}");
    }
}
