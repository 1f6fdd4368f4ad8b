//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use realspace::advdfa::{
    check_computes, detect_cycle, machines, random_dfa, rational_limit, refute_two_state, run,
    RandomFamily, WitnessKind,
};
use realspace::dyadic::{DigitGenerator, Dyadic};
use realspace::generators::{builtins, nth_digit, AlgebraicSpec};
use realspace::meter::{fake_tape_adapter, SpaceMeter};
use realspace::pairing::{
    encode_triple, isqrt_with, pair, pair3, unpair, unpair3, unpair_with, IsqrtPath, TallyTriple,
};
use realspace::profiler::{default_grid, profile, GrowthClass};
use realspace::ratarith::{int_div, rat_lowest_terms, Rational};
use realspace::tally::{
    digits_from_tally, leftcut_member, leftcut_via_tally, tally_member, tally_via_leftcut,
    OracleHandle, ScanMode, SearchMode,
};

use common::{reference, REF_DIGITS};

/// Largest precision checked against the reference values.
const CAUCHY_N_MAX: usize = 256;
/// Required runner-up/best residual ratio for growth verdicts.
const GROWTH_MARGIN: f64 = 2.0;
const PAIR_RANGE: u64 = 100_000;
const TRIPLE_N_MAX: u64 = 64;
const ISQRT_SAMPLES: usize = 10_000;
/// Every `v` up to this bound is checked on both square root paths.
const ISQRT_PATH_RANGE: u64 = 20_000;
const TALLY_N_MAX: usize = 32;
const FAITHFUL_N_MAX: usize = 12;
const LEFTCUT_PREC_MAX: usize = 12;
const TRIPLE_M_MAX: u64 = 12;
const EXHAUSTIVE_M_MAX: u64 = 10;
const ADAPTER_GRID: [u64; 3] = [16, 256, 4096];
/// Bound on the fitted adapter constant `c` in `overhead <= c·⌈log2(n+1)⌉`.
const ADAPTER_C_MAX: f64 = 2.0;
const RANDOM_MACHINES: usize = 200;
const MACHINE_N_MAX: u64 = 64;
const THIRD_N_MAX: u64 = 16;
const REFUTATION_N_MAX: u64 = 8;
const RAT_SAMPLES: usize = 10_000;
const RAT_MAGNITUDE: i64 = 1_000;
const DIV_SAMPLES: usize = 10_000;
const NTH_N_MAX: usize = 64;
/// `nth_digit` may use twice the generator's peak plus `c·⌈log2(n+1)⌉`.
const NTH_LOG_C: usize = 2;
const SEED: u64 = 0x5EED;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn log2_ceil(n: u64) -> usize {
    (u64::BITS - n.leading_zeros()) as usize
}

fn golden_minus_one() -> DigitGenerator {
    let spec = AlgebraicSpec::new(
        vec![BigInt::from(-1), BigInt::from(1), BigInt::from(1)],
        Dyadic::parse("0", 2).unwrap(),
        0,
    )
    .unwrap();
    DigitGenerator::new("golden-1", realspace::generators::AlgebraicProgram::new(spec))
}

fn binary_catalog() -> Vec<(&'static str, DigitGenerator)> {
    builtins::catalog().into_iter().filter(|(_, g)| g.base() == 2).collect()
}

fn cauchy_contract() -> Outcome {
    for (name, g) in builtins::catalog() {
        let r = reference(name);
        for n in 0..=CAUCHY_N_MAX {
            let got = g.eval(n, &SpaceMeter::new()).map_err(|e| format!("{name}@{n}: {e}"))?;
            let scaled = got.scaled_to(n).ok_or_else(|| format!("{name}@{n}: prec {}", got.prec()))?;
            ensure(scaled == r.truncation(n), || format!("{name}@{n}: {got} is not the truncation"))?;
            // |eval(n) - x| <= base^-n, measured against the deeper reference
            let x = BigRational::new(r.scaled.clone(), BigInt::from(r.base).pow(REF_DIGITS as u32));
            let err = (x - BigRational::new(scaled, BigInt::from(r.base).pow(n as u32)))
                * BigRational::from_integer(BigInt::from(r.base).pow(n as u32));
            ensure(err <= BigRational::one(), || format!("{name}@{n}: error exceeds base^-n"))?;
        }
    }
    Ok(format!("10 numbers, n <= {CAUCHY_N_MAX}, truncations exact"))
}

fn growth_verdicts() -> Outcome {
    let expected = [
        ("1/3", GrowthClass::Constant),
        ("mu-square", GrowthClass::Log),
        ("mu-cube", GrowthClass::Log),
        ("thue-morse", GrowthClass::Log),
        ("primes", GrowthClass::Log),
        ("liouville", GrowthClass::LinearLog),
        ("sqrt2", GrowthClass::Linear),
    ];
    let catalog = builtins::catalog();
    let mut detail = Vec::new();
    for (name, class) in expected {
        let g = &catalog.iter().find(|(n, _)| *n == name).unwrap().1;
        let (_, v) = profile(|n, m| g.eval(n as usize, m).map(drop), &default_grid()).map_err(|e| e.to_string())?;
        ensure(v.best_class == class && v.margin >= GROWTH_MARGIN, || {
            format!("{name}: got {} margin {:.2}, want {class}", v.best_class, v.margin)
        })?;
        detail.push(format!("{name}={} ({:.1})", v.best_class, v.margin.min(999.0)));
    }
    Ok(detail.join(", "))
}

fn pairing_suite() -> Outcome {
    let m = SpaceMeter::new();
    for h in 0..=PAIR_RANGE {
        let (i, j) = unpair(&h.into(), &m);
        let (iu, ju) = (i.to_u64().unwrap(), j.to_u64().unwrap());
        // Cantor pairing on machine integers
        let w = iu + ju;
        ensure(w * (w + 1) / 2 + ju == h, || format!("unpair({h}) = ({iu},{ju})"))?;
        ensure(pair(&i, &j, &m) == BigUint::from(h), || format!("pair(unpair({h})) != {h}"))?;
    }
    for n in 0..=TRIPLE_N_MAX {
        for i in 0..=n {
            for b in 0..=1u8 {
                let h = pair3(&n.into(), &i.into(), &b.into(), &m);
                let decoded = unpair3(&h, &m);
                if i == 0 {
                    ensure(decoded.is_err(), || format!("({n},0,{b}) decoded"))?;
                } else {
                    ensure(decoded == Ok(TallyTriple { n, i, b }), || format!("({n},{i},{b}) round trip"))?;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..ISQRT_SAMPLES {
        let v = BigUint::from(rng.gen::<u128>());
        let r = isqrt_with(&v, IsqrtPath::Fast, &m);
        ensure(&r * &r <= v && v < (&r + 1u32) * (&r + 1u32), || format!("isqrt({v}) = {r}"))?;
    }
    for v in 0..=ISQRT_PATH_RANGE {
        let v = BigUint::from(v);
        ensure(
            isqrt_with(&v, IsqrtPath::Incremental, &m) == isqrt_with(&v, IsqrtPath::Fast, &m),
            || format!("isqrt paths differ at {v}"),
        )?;
    }
    for h in (0..=PAIR_RANGE).step_by(97) {
        let h = BigUint::from(h);
        ensure(
            unpair_with(&h, IsqrtPath::Incremental, &m) == unpair_with(&h, IsqrtPath::Fast, &m),
            || format!("unpair paths differ at {h}"),
        )?;
    }
    Ok(format!(
        "h <= {PAIR_RANGE}, triples n <= {TRIPLE_N_MAX}, {ISQRT_SAMPLES} random u128 roots, paths agree on v <= {ISQRT_PATH_RANGE}"
    ))
}

fn tally_round_trip() -> Outcome {
    for (name, g) in binary_catalog() {
        let oracle = OracleHandle::tally(&g);
        for n in 0..=TALLY_N_MAX {
            let want = g.eval(n, &SpaceMeter::new()).map_err(|e| e.to_string())?.fractional();
            let fast = digits_from_tally(&oracle, n, ScanMode::Fast, &SpaceMeter::new()).map_err(|e| e.to_string())?;
            ensure(fast.frac_digits() == want.frac_digits(), || format!("{name}@{n}: {fast} vs {want}"))?;
            if n <= FAITHFUL_N_MAX {
                let faithful =
                    digits_from_tally(&oracle, n, ScanMode::Faithful, &SpaceMeter::new()).map_err(|e| e.to_string())?;
                ensure(faithful == fast, || format!("{name}@{n}: faithful {faithful} vs fast {fast}"))?;
            }
        }
    }
    Ok(format!(
        "{} binary numbers, n <= {TALLY_N_MAX}, faithful = fast for n <= {FAITHFUL_N_MAX}",
        binary_catalog().len()
    ))
}

fn reductions() -> Outcome {
    for g in [builtins::sqrt2_minus_one(), golden_minus_one()] {
        let name = g.label().to_string();
        let tally = OracleHandle::tally(&g);
        for prec in 0..=LEFTCUT_PREC_MAX {
            for v in 0u64..(1 << prec) {
                let d = Dyadic::from_scaled(2, &v.into(), prec);
                tally.reset_count();
                let via = leftcut_via_tally(&d, &tally, &SpaceMeter::new()).map_err(|e| e.to_string())?;
                let direct = leftcut_member(&d, &g, &SpaceMeter::new()).map_err(|e| e.to_string())?;
                ensure(via == direct, || format!("{name}: leftcut({d}) {via} vs {direct}"))?;
                ensure(tally.query_count() <= 2 * prec as u64, || {
                    format!("{name}: {} queries for prec {prec}", tally.query_count())
                })?;
            }
        }
        let cut = OracleHandle::leftcut(&g);
        for m in 1..=TRIPLE_M_MAX {
            for i in 1..=m {
                for b in 0..=1u8 {
                    let len = encode_triple(TallyTriple { n: m, i, b }, &SpaceMeter::new());
                    cut.reset_count();
                    let greedy =
                        tally_via_leftcut(&len, &cut, SearchMode::Greedy, &SpaceMeter::new()).map_err(|e| e.to_string())?;
                    ensure(cut.query_count() == m, || format!("{name}: greedy used {} queries, m = {m}", cut.query_count()))?;
                    let direct = tally_member(&len, &g, &SpaceMeter::new()).map_err(|e| e.to_string())?;
                    ensure(greedy == direct, || format!("{name}: tally ({m},{i},{b}) {greedy} vs {direct}"))?;
                    if m <= EXHAUSTIVE_M_MAX {
                        let exhaustive = tally_via_leftcut(&len, &cut, SearchMode::Exhaustive, &SpaceMeter::new())
                            .map_err(|e| e.to_string())?;
                        ensure(exhaustive == greedy, || format!("{name}: modes differ on ({m},{i},{b})"))?;
                    }
                }
            }
        }
    }
    Ok(format!(
        "sqrt2-1 and golden-1: prec <= {LEFTCUT_PREC_MAX}, m <= {TRIPLE_M_MAX}, exhaustive m <= {EXHAUSTIVE_M_MAX}"
    ))
}

fn adapter() -> Outcome {
    let mut c_fit: f64 = 0.0;
    for (name, g) in builtins::catalog() {
        for n in ADAPTER_GRID {
            let direct_meter = SpaceMeter::new();
            let direct = g.eval(n as usize, &direct_meter).map_err(|e| e.to_string())?;
            let adapted_meter = SpaceMeter::new();
            let adapted = fake_tape_adapter(&g, n, &adapted_meter).map_err(|e| e.to_string())?;
            ensure(adapted == direct, || format!("{name}@{n}: outputs differ"))?;
            let overhead = adapted_meter.peak_cells().saturating_sub(direct_meter.peak_cells());
            c_fit = c_fit.max(overhead as f64 / log2_ceil(n + 1) as f64);
        }
    }
    ensure(c_fit <= ADAPTER_C_MAX, || format!("fitted c = {c_fit:.3} > {ADAPTER_C_MAX}"))?;
    Ok(format!("outputs identical at n in {ADAPTER_GRID:?}, fitted c = {c_fit:.3}"))
}

fn automata() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for k in 0..RANDOM_MACHINES {
        let dfa = random_dfa(&mut rng, RandomFamily::default());
        let n = rng.gen_range(0..=MACHINE_N_MAX);
        let w = detect_cycle(&dfa, n).map_err(|e| e.to_string())?;
        let bound = dfa.configuration_bound(n);
        ensure(w.steps <= bound, || format!("machine {k}, n = {n}: {} steps > {bound}", w.steps))?;
        let len = 3 * (w.w1.len() + w.w2.len()) + n as usize;
        let out = run(&dfa, n, len).map_err(|e| e.to_string())?;
        ensure(out.output == w.replay(len), || format!("machine {k}, n = {n}: replay of {w} differs"))?;
    }
    let third_machine = machines::alternator();
    let third = builtins::rational(1, 3, 2).unwrap();
    let w = detect_cycle(&third_machine, THIRD_N_MAX).map_err(|e| e.to_string())?;
    ensure(w.kind == WitnessKind::EventuallyPeriodicInfinite, || format!("{w:?}"))?;
    let limit = rational_limit(&w, 2).map_err(|e| e.to_string())?;
    ensure(limit == Rational::new(1, 3u32).unwrap(), || format!("limit {limit}"))?;
    let report = check_computes(&third_machine, &third, THIRD_N_MAX).map_err(|e| e.to_string())?;
    ensure(report.all_pass(), || format!("1/3 machine fails at {:?}", report.first_failure))?;

    let target = builtins::sqrt2_minus_one();
    let r = refute_two_state(&target, REFUTATION_N_MAX);
    if let Some(dfa) = &r.counterexample {
        let report = check_computes(dfa, &target, REFUTATION_N_MAX).map_err(|e| e.to_string())?;
        let w = detect_cycle(dfa, REFUTATION_N_MAX).map_err(|e| e.to_string())?;
        let first_refuted = (REFUTATION_N_MAX + 1..=REFUTATION_N_MAX + 8)
            .find(|&n| refute_two_state(&target, n).refuted());
        return Err(format!(
            "a 2-state machine passes every n <= {REFUTATION_N_MAX} against sqrt2-1 (all_pass = {}, output at n = {REFUTATION_N_MAX}: {w}); \
             the family is first refuted at n_max = {first_refuted:?}",
            report.all_pass(),
        ));
    }
    ensure(r.refuted(), || format!("{} undecided machines", r.undecided.len()))?;
    Ok(format!("{RANDOM_MACHINES} random machines, 1/3 machine exact, refuted over {} tables", r.nodes))
}

fn rational_arithmetic() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let m = SpaceMeter::new();
    for _ in 0..RAT_SAMPLES {
        let p = rng.gen_range(-RAT_MAGNITUDE..=RAT_MAGNITUDE);
        let q = rng.gen_range(1..=RAT_MAGNITUDE) as u64;
        let r = rat_lowest_terms(&Rational::new(p, q).unwrap(), &m);
        let (rp, rq) = (r.numer().to_i64().unwrap(), r.denom().to_u64().unwrap());
        let g = common::gcd(p.unsigned_abs(), q);
        ensure(common::gcd(rp.unsigned_abs(), rq) == 1 || rp == 0 && rq == 1, || format!("{p}/{q} -> {r}"))?;
        ensure(rp == p / g as i64 && rq == q / g, || format!("{p}/{q} -> {r}, gcd {g}"))?;
    }
    for _ in 0..DIV_SAMPLES {
        let a = BigUint::from(rng.gen::<u128>());
        let b = BigUint::from((rng.gen::<u64>() >> rng.gen_range(0..64)).max(1));
        let (q, r) = int_div(&a, &b, &m).map_err(|e| e.to_string())?;
        ensure(&q * &b + &r == a && r < b, || format!("{a} / {b} = {q} r {r}"))?;
        ensure((q.clone(), r.clone()) == a.div_rem(&b), || format!("{a} / {b}"))?;
    }
    Ok(format!("{RAT_SAMPLES} reductions with |p|, q <= {RAT_MAGNITUDE}, {DIV_SAMPLES} divisions"))
}

fn nth_digit_consistency() -> Outcome {
    let mut worst = 0.0f64;
    for (name, g) in builtins::catalog() {
        let evals: Vec<Dyadic> = (0..=NTH_N_MAX)
            .map(|n| g.eval(n, &SpaceMeter::new()))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        for i in 1..=NTH_N_MAX {
            let meter = SpaceMeter::new();
            let d = nth_digit(&g, i, &meter).map_err(|e| e.to_string())?;
            for (n, e) in evals.iter().enumerate().skip(i) {
                ensure(e.frac_digit(i) == Some(d), || format!("{name}: digit {i} of eval({n})"))?;
            }
            let gen_meter = SpaceMeter::new();
            g.eval(i, &gen_meter).map_err(|e| e.to_string())?;
            let allowed = 2 * gen_meter.peak_cells() + NTH_LOG_C * log2_ceil(i as u64 + 1);
            ensure(meter.peak_cells() <= allowed, || {
                format!("{name}@{i}: peak {} > {allowed}", meter.peak_cells())
            })?;
            worst = worst.max(meter.peak_cells() as f64 / gen_meter.peak_cells().max(1) as f64);
        }
    }
    Ok(format!("i <= n <= {NTH_N_MAX}, worst peak ratio {worst:.2}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("cauchy contract", cauchy_contract),
        ("growth verdicts", growth_verdicts),
        ("pairing", pairing_suite),
        ("tally round trip", tally_round_trip),
        ("cut/tally reductions", reductions),
        ("fake-tape adapter", adapter),
        ("automata with advice", automata),
        ("rational arithmetic", rational_arithmetic),
        ("nth digit", nth_digit_consistency),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS [{secs:.1}s] {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL [{secs:.1}s] {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
