//! Resolving a number name on the command line to a generator.

use std::collections::VecDeque;
use std::fs;
use std::sync::Arc;

use realspace::dyadic::DigitGenerator;
use realspace::generators::{builtins, AlgebraicSpec, AutomatonSpec, ExponentFunction, IndicatorProgram, MuProgram, Primes};
use realspace::ratarith::Rational;

use crate::CliError;

pub const NAMES: &str = "sqrt2, sqrt2-1, golden, cbrt2, rational P/Q, mu-square, mu-cube, liouville, primes, thue-morse, period-doubling, file:PATH";

pub struct Selected {
    pub generator: DigitGenerator,
    /// Root finders, which get the shorter profiling grid.
    pub algebraic: bool,
}

fn fixed(generator: DigitGenerator, algebraic: bool, base: Option<u32>) -> Result<Selected, CliError> {
    match base {
        Some(b) if b != generator.base() => Err(CliError::Usage(format!(
            "{} is only available in base {}",
            generator.label(),
            generator.base()
        ))),
        _ => Ok(Selected { generator, algebraic }),
    }
}

fn mu(label: &str, f: ExponentFunction, base: Option<u32>) -> Result<Selected, CliError> {
    let program = MuProgram::new(f, base.unwrap_or(10)).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(Selected {
        generator: DigitGenerator::new(label, program),
        algebraic: false,
    })
}

/// Takes a selector off the front of `words`: a name, or `rational P/Q`.
pub fn take(words: &mut VecDeque<String>, base: Option<u32>) -> Result<Selected, CliError> {
    let name = words
        .pop_front()
        .ok_or_else(|| CliError::Usage(format!("missing number; expected one of {NAMES}")))?;
    match name.as_str() {
        "sqrt2" => fixed(builtins::sqrt2(), true, base),
        "sqrt2-1" => fixed(builtins::sqrt2_minus_one(), true, base),
        "golden" => fixed(builtins::golden(), true, base),
        "cbrt2" => fixed(builtins::cbrt2(), true, base),
        "thue-morse" => fixed(builtins::thue_morse(), false, base),
        "period-doubling" => fixed(builtins::period_doubling(), false, base),
        "mu-square" => mu("mu-square", ExponentFunction::Power(2), base),
        "mu-cube" => mu("mu-cube", ExponentFunction::Power(3), base),
        "liouville" => mu("liouville", ExponentFunction::Factorial, base),
        "primes" => {
            let program =
                IndicatorProgram::new(Arc::new(Primes), base.unwrap_or(10)).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(Selected {
                generator: DigitGenerator::new("primes", program),
                algebraic: false,
            })
        }
        "rational" => {
            let text = words
                .pop_front()
                .ok_or_else(|| CliError::Usage("rational needs P/Q".into()))?;
            let r: Rational = text.parse().map_err(|e: realspace::ratarith::RatError| CliError::Usage(e.to_string()))?;
            let program = realspace::generators::RationalProgram::new(r.numer().clone(), r.denom().clone(), base.unwrap_or(2))
                .map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(Selected {
                generator: DigitGenerator::new(text, program),
                algebraic: false,
            })
        }
        other => match other.strip_prefix("file:") {
            Some(path) => from_file(path, base),
            None => Err(CliError::Usage(format!("unknown number {other:?}; expected one of {NAMES}"))),
        },
    }
}

/// A JSON spec: an algebraic root if it has `coeffs`, an automaton otherwise.
fn from_file(path: &str, base: Option<u32>) -> Result<Selected, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
    let doc: serde_json::Value = serde_json::from_str(&text).map_err(|e| CliError::Spec(format!("{path}: {e}")))?;
    let malformed = |e: realspace::generators::GenError| CliError::Spec(format!("{path}: {e}"));
    if doc.get("coeffs").is_some() {
        let spec = AlgebraicSpec::from_json(&text).map_err(malformed)?;
        fixed(builtins::algebraic(spec), true, base)
    } else {
        let spec = AutomatonSpec::from_json(&text).map_err(malformed)?;
        fixed(builtins::automatic(path, spec), false, base)
    }
}
