//! Quick consistency checks across the library, run in a seeded order.

use std::env;
use std::fmt::Write as _;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use realspace::advdfa::{check_computes, detect_cycle, machines, rational_limit};
use realspace::dyadic::Dyadic;
use realspace::generators::{builtins, nth_digit};
use realspace::meter::{fake_tape_adapter, SpaceMeter};
use realspace::pairing::{pair, unpair};
use realspace::profiler::{default_grid, profile, GrowthClass};
use realspace::ratarith::{rat_lowest_terms, Rational};
use realspace::tally::{digits_from_tally, leftcut_member, leftcut_via_tally, OracleHandle, ScanMode};

use crate::CliError;

type Check = fn() -> Result<(), String>;

fn expect(cond: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    cond.then_some(()).ok_or_else(why)
}

fn known_digits() -> Result<(), String> {
    let cases = [
        (builtins::sqrt2(), 8, "1.01101010"),
        (builtins::liouville(), 8, "0.11000100"),
        (builtins::thue_morse(), 8, "0.11010011"),
        (builtins::primes(), 8, "0.01101010"),
    ];
    for (g, n, want) in cases {
        let got = g.approx(n).map_err(|e| e.to_string())?.to_string();
        expect(got == want, || format!("{}: {got} != {want}", g.label()))?;
    }
    Ok(())
}

fn pairing_round_trip() -> Result<(), String> {
    let m = SpaceMeter::new();
    for h in 0u32..5000 {
        let (i, j) = unpair(&h.into(), &m);
        expect(pair(&i, &j, &m) == BigUint::from(h), || format!("pair(unpair({h}))"))?;
    }
    Ok(())
}

fn nth_matches_eval() -> Result<(), String> {
    for (name, g) in builtins::catalog() {
        let full = g.approx(32).map_err(|e| e.to_string())?;
        for i in 1..=32 {
            let d = nth_digit(&g, i, &SpaceMeter::new()).map_err(|e| e.to_string())?;
            expect(full.frac_digit(i) == Some(d), || format!("{name} digit {i}"))?;
        }
    }
    Ok(())
}

fn adapter_matches_eval() -> Result<(), String> {
    for (name, g) in builtins::catalog() {
        let a = fake_tape_adapter(&g, 64, &SpaceMeter::new()).map_err(|e| e.to_string())?;
        expect(a == g.approx(64).map_err(|e| e.to_string())?, || name.to_string())?;
    }
    Ok(())
}

fn tally_round_trip() -> Result<(), String> {
    let g = builtins::sqrt2();
    let oracle = OracleHandle::tally(&g);
    for n in 0..=16 {
        let d = digits_from_tally(&oracle, n, ScanMode::Fast, &SpaceMeter::new()).map_err(|e| e.to_string())?;
        let want = g.approx(n).map_err(|e| e.to_string())?.fractional();
        expect(d.frac_digits() == want.frac_digits(), || format!("n = {n}"))?;
    }
    Ok(())
}

fn cut_reduction() -> Result<(), String> {
    let g = builtins::sqrt2_minus_one();
    let oracle = OracleHandle::tally(&g);
    for prec in 0..=8 {
        for v in 0u64..(1 << prec) {
            let d = Dyadic::from_scaled(2, &v.into(), prec);
            let via = leftcut_via_tally(&d, &oracle, &SpaceMeter::new()).map_err(|e| e.to_string())?;
            let direct = leftcut_member(&d, &g, &SpaceMeter::new()).map_err(|e| e.to_string())?;
            expect(via == direct, || format!("{d}"))?;
        }
    }
    Ok(())
}

fn third_machine() -> Result<(), String> {
    let dfa = machines::alternator();
    let w = detect_cycle(&dfa, 8).map_err(|e| e.to_string())?;
    let limit = rational_limit(&w, 2).map_err(|e| e.to_string())?;
    expect(limit == Rational::new(1, 3u32).unwrap(), || format!("limit {limit}"))?;
    let third = builtins::rational(1, 3, 2).map_err(|e| e.to_string())?;
    let report = check_computes(&dfa, &third, 16).map_err(|e| e.to_string())?;
    expect(report.all_pass(), || format!("fails at {:?}", report.first_failure))
}

fn lowest_terms() -> Result<(), String> {
    let r = rat_lowest_terms(&Rational::new(-84, 126u32).unwrap(), &SpaceMeter::new());
    expect(r == Rational::new(-2, 3u32).unwrap(), || format!("{r}"))
}

fn constant_space_rational() -> Result<(), String> {
    let g = builtins::rational(1, 3, 2).map_err(|e| e.to_string())?;
    let (_, v) = profile(|n, m| g.eval(n as usize, m).map(drop), &default_grid()).map_err(|e| e.to_string())?;
    expect(v.best_class == GrowthClass::Constant, || format!("{}", v.best_class))
}

const CHECKS: [(&str, Check); 9] = [
    ("known digits", known_digits),
    ("pairing round trip", pairing_round_trip),
    ("nth digit", nth_matches_eval),
    ("fake-tape adapter", adapter_matches_eval),
    ("tally round trip", tally_round_trip),
    ("cut reduction", cut_reduction),
    ("1/3 machine", third_machine),
    ("lowest terms", lowest_terms),
    ("constant-space rational", constant_space_rational),
];

pub fn run() -> Result<String, CliError> {
    let seed = match env::var("REALSPACE_SEED") {
        Ok(s) => s
            .parse::<u64>()
            .map_err(|_| CliError::Usage(format!("REALSPACE_SEED must be an integer, got {s:?}")))?,
        Err(_) => 0,
    };
    let mut order: Vec<_> = CHECKS.to_vec();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut out = String::new();
    let mut failed = 0;
    for (name, check) in order {
        match check() {
            Ok(()) => writeln!(out, "ok    {name}").unwrap(),
            Err(why) => {
                failed += 1;
                writeln!(out, "FAIL  {name}: {why}").unwrap();
            }
        }
    }
    writeln!(out, "seed {seed}: {} passed, {failed} failed", CHECKS.len() - failed).unwrap();
    if failed == 0 {
        Ok(out)
    } else {
        Err(CliError::Failure(out))
    }
}
