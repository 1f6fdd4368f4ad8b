//! Named generators used by the CLI, the profiler and the test suites.

use std::sync::Arc;

use num_bigint::BigInt;

use super::{
    AlgebraicProgram, AlgebraicSpec, AutomaticProgram, AutomatonSpec, ExponentFunction, GenError,
    IndicatorProgram, MuProgram, Primes, RationalProgram,
};
use crate::dyadic::{DigitGenerator, Dyadic};

fn root(label: &str, coeffs: &[i64]) -> DigitGenerator {
    root_above(label, coeffs, "1")
}

fn root_above(label: &str, coeffs: &[i64], seed: &str) -> DigitGenerator {
    let spec = AlgebraicSpec::new(
        coeffs.iter().map(|&c| BigInt::from(c)).collect(),
        Dyadic::parse(seed, 2).expect("literal"),
        0,
    )
    .expect("seed isolates the root");
    DigitGenerator::new(label, AlgebraicProgram::new(spec))
}

/// `√2`, the root of `x² − 2` above 1.
pub fn sqrt2() -> DigitGenerator {
    root("sqrt2", &[-2, 0, 1])
}

/// `√2 − 1`, root of `x² + 2x − 1` in `[0, 1)`. Same fractional bits as
/// [`sqrt2`].
pub fn sqrt2_minus_one() -> DigitGenerator {
    root_above("sqrt2-1", &[-1, 2, 1], "0")
}

/// The golden ratio, root of `x² − x − 1` above 1.
pub fn golden() -> DigitGenerator {
    root("golden", &[-1, -1, 1])
}

/// `∛2`, root of `x³ − 2` above 1.
pub fn cbrt2() -> DigitGenerator {
    root("cbrt2", &[-2, 0, 0, 1])
}

pub fn algebraic(spec: AlgebraicSpec) -> DigitGenerator {
    DigitGenerator::new("algebraic", AlgebraicProgram::new(spec))
}

pub fn rational(p: i64, q: u64, base: u32) -> Result<DigitGenerator, GenError> {
    Ok(DigitGenerator::new(format!("{p}/{q}"), RationalProgram::new(p, q, base)?))
}

pub fn mu(f: ExponentFunction, base: u32) -> Result<DigitGenerator, GenError> {
    let label = format!("mu[{}]", f.label());
    Ok(DigitGenerator::new(label, MuProgram::new(f, base)?))
}

/// `Σ 10^-k²`.
pub fn mu_square() -> DigitGenerator {
    DigitGenerator::new("mu-square", MuProgram::new(ExponentFunction::Power(2), 10).expect("base 10"))
}

/// `Σ 10^-k³`.
pub fn mu_cube() -> DigitGenerator {
    DigitGenerator::new("mu-cube", MuProgram::new(ExponentFunction::Power(3), 10).expect("base 10"))
}

/// Liouville's constant `Σ 10^-k!`.
pub fn liouville() -> DigitGenerator {
    DigitGenerator::new("liouville", MuProgram::new(ExponentFunction::Factorial, 10).expect("base 10"))
}

/// `Σ_{p prime} 10^-p`.
pub fn primes() -> DigitGenerator {
    DigitGenerator::new("primes", IndicatorProgram::new(Arc::new(Primes), 10).expect("base 10"))
}

pub fn automatic(label: &str, spec: AutomatonSpec) -> DigitGenerator {
    DigitGenerator::new(label, AutomaticProgram::new(spec))
}

pub fn thue_morse() -> DigitGenerator {
    automatic("thue-morse", AutomatonSpec::thue_morse())
}

pub fn period_doubling() -> DigitGenerator {
    automatic("period-doubling", AutomatonSpec::period_doubling())
}

/// The reference set of named numbers.
pub fn catalog() -> Vec<(&'static str, DigitGenerator)> {
    vec![
        ("sqrt2", sqrt2()),
        ("golden", golden()),
        ("cbrt2", cbrt2()),
        ("1/3", rational(1, 3, 2).expect("valid")),
        ("22/7", rational(22, 7, 10).expect("valid")),
        ("mu-square", mu_square()),
        ("mu-cube", mu_cube()),
        ("liouville", liouville()),
        ("primes", primes()),
        ("thue-morse", thue_morse()),
    ]
}

/// Looks up a generator by name. `rational` and file-backed specs are
/// handled by callers since they take arguments.
pub fn by_name(name: &str) -> Option<DigitGenerator> {
    Some(match name {
        "sqrt2" => sqrt2(),
        "golden" => golden(),
        "cbrt2" => cbrt2(),
        "mu-square" => mu_square(),
        "mu-cube" => mu_cube(),
        "liouville" => liouville(),
        "primes" => primes(),
        "thue-morse" => thue_morse(),
        "period-doubling" => period_doubling(),
        "sqrt2-1" => sqrt2_minus_one(),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefixes_are_stable() {
        for (name, g) in catalog() {
            let long = g.approx(40).unwrap();
            for n in [0, 1, 7, 39] {
                assert_eq!(g.approx(n).unwrap(), long.truncate(n), "{name} at {n}");
            }
        }
    }

    #[test]
    fn lookup() {
        assert_eq!(by_name("sqrt2").unwrap().approx(8).unwrap().to_string(), "1.01101010");
        assert_eq!(by_name("golden").unwrap().approx(8).unwrap().to_string(), "1.10011110");
        assert_eq!(sqrt2_minus_one().approx(8).unwrap().to_string(), "0.01101010");
        assert!(by_name("pi").is_none());
    }
}
