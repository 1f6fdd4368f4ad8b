use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{Action, AdvError, AdvicedDfa, Dir, Sym};
use crate::dyadic::{digit_char, DigitGenerator};
use crate::generators::GenError;
use crate::meter::SpaceMeter;
use crate::ratarith::{rat_lowest_terms, Rational};

/// `(state, input head, advice head)`, with endmarker cells at `0` and
/// `len + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub q: usize,
    pub h1: u64,
    pub h2: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Halted,
    OutputLimit,
    SilentLoop,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub output: Vec<u8>,
    pub halted: bool,
    pub steps: u64,
    pub stop: StopReason,
}

impl RunOutcome {
    pub fn text(&self) -> String {
        self.output.iter().map(|&d| digit_char(d)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    HaltsFinite,
    EventuallyPeriodicInfinite,
    SilentLoop,
}

/// Where a detected cycle runs relative to the input endmarkers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleCase {
    /// The cycle never scans `¢` or `$` on the input tape.
    BetweenEndmarkers,
    /// The cycle visits an input endmarker.
    ThroughEndmarkers,
}

/// The output of a run as `w1 w2 w2 w2 …`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodicityWitness {
    pub w1: Vec<u8>,
    pub w2: Vec<u8>,
    pub kind: WitnessKind,
    /// Transitions executed before the run halted or repeated a
    /// configuration.
    pub steps: u64,
    pub case: Option<CycleCase>,
}

impl PeriodicityWitness {
    /// The first `len` output symbols implied by the witness.
    pub fn replay(&self, len: usize) -> Vec<u8> {
        let mut out: Vec<u8> = self.w1.iter().copied().take(len).collect();
        if !self.w2.is_empty() {
            out.extend(self.w2.iter().copied().cycle().take(len - out.len()));
        }
        out
    }

    /// Exact value of `0.w1 w2 w2 …` in `base`, unreduced. Finite
    /// witnesses denote `0.w1`.
    pub(crate) fn value(&self, base: u32) -> (BigInt, BigUint) {
        let b = BigUint::from(base);
        let int = |w: &[u8]| -> BigUint {
            if w.is_empty() {
                BigUint::zero()
            } else {
                BigUint::from_radix_be(w, base).expect("digits below base")
            }
        };
        let head = b.pow(self.w1.len() as u32);
        if self.kind != WitnessKind::EventuallyPeriodicInfinite {
            return (int(&self.w1).into(), head);
        }
        let both: Vec<u8> = self.w1.iter().chain(&self.w2).copied().collect();
        let num = BigInt::from(int(&both)) - BigInt::from(int(&self.w1));
        let den = head * (b.pow(self.w2.len() as u32) - 1u32);
        (num, den)
    }
}

impl fmt::Display for PeriodicityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |w: &[u8]| w.iter().map(|&d| digit_char(d)).collect::<String>();
        write!(f, "{}({})", s(&self.w1), s(&self.w2))
    }
}

pub(crate) enum End {
    Halted,
    Limit,
    /// A configuration first seen after `first_len` outputs came back.
    Cycle {
        first_len: usize,
        touches_end: bool,
    },
    Missing(usize, Sym, Sym),
}

pub(crate) struct Trace {
    pub output: Vec<u8>,
    pub steps: u64,
    pub end: End,
}

/// Runs a machine given by `lookup` on `¢0^n$` / `¢advice$`.
///
/// With `whole_cycles`, stops at the first repeated configuration;
/// otherwise stops only at a silent repeat and relies on `max_output`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn simulate(
    lookup: &dyn Fn(usize, Sym, Sym) -> Option<Action>,
    halting: &dyn Fn(usize) -> bool,
    start: usize,
    zero: usize,
    n: u64,
    advice: &[usize],
    max_output: Option<usize>,
    whole_cycles: bool,
    on_output: &mut dyn FnMut(&[u8]) -> bool,
) -> Trace {
    let alen = advice.len() as u64;
    let mut c = Configuration { q: start, h1: 0, h2: 0 };
    let mut output = Vec::new();
    let mut steps = 0u64;
    // configuration -> (output length, step) at its last visit
    let mut seen: HashMap<Configuration, (usize, u64)> = HashMap::new();
    // input-endmarker visits, by step, for classifying cycles
    let mut end_visits: Vec<u64> = Vec::new();
    loop {
        if halting(c.q) {
            return Trace { output, steps, end: End::Halted };
        }
        if max_output.is_some_and(|m| output.len() >= m) {
            return Trace { output, steps, end: End::Limit };
        }
        if let Some(&(len, step)) = seen.get(&c) {
            if whole_cycles || len == output.len() {
                let touches_end = end_visits.last().is_some_and(|&s| s >= step);
                return Trace {
                    output,
                    steps,
                    end: End::Cycle { first_len: len, touches_end },
                };
            }
        }
        seen.insert(c, (output.len(), steps));
        let a = match c.h1 {
            0 => Sym::LeftEnd,
            h if h == n + 1 => Sym::RightEnd,
            _ => Sym::Letter(zero),
        };
        if a != Sym::Letter(zero) {
            end_visits.push(steps);
        }
        let b = match c.h2 {
            0 => Sym::LeftEnd,
            h if h == alen + 1 => Sym::RightEnd,
            h => Sym::Letter(advice[h as usize - 1]),
        };
        let Some(act) = lookup(c.q, a, b) else {
            return Trace { output, steps, end: End::Missing(c.q, a, b) };
        };
        if let Some(d) = act.output {
            output.push(d);
            if !on_output(&output) {
                return Trace { output, steps, end: End::Limit };
            }
        }
        let step = |h: u64, d: Dir| match d {
            Dir::L => h - 1,
            Dir::R => h + 1,
        };
        c = Configuration {
            q: act.next,
            h1: step(c.h1, act.input_move),
            h2: step(c.h2, act.advice_move),
        };
        steps += 1;
    }
}

fn advice_for(dfa: &AdvicedDfa, n: u64) -> Result<&[usize], AdvError> {
    dfa.advice().for_length(n).ok_or(AdvError::AdviceMissing(n))
}

/// Simulates `dfa` on `0^n` until it halts, writes `max_output` digits, or
/// repeats a configuration without having written anything in between.
pub fn run(dfa: &AdvicedDfa, n: u64, max_output: usize) -> Result<RunOutcome, AdvError> {
    let advice = advice_for(dfa, n)?;
    let t = simulate(
        &|q, a, b| dfa.action(q, a, b),
        &|q| dfa.is_halting(q),
        dfa.start(),
        dfa.zero(),
        n,
        advice,
        Some(max_output),
        false,
        &mut |_| true,
    );
    let stop = match t.end {
        End::Halted => StopReason::Halted,
        End::Limit => StopReason::OutputLimit,
        End::Cycle { .. } => StopReason::SilentLoop,
        End::Missing(..) => unreachable!("validated machines are total"),
    };
    Ok(RunOutcome {
        halted: stop == StopReason::Halted,
        output: t.output,
        steps: t.steps,
        stop,
    })
}

pub(crate) fn witness_from(t: Trace) -> Option<PeriodicityWitness> {
    let steps = t.steps;
    match t.end {
        End::Halted => Some(PeriodicityWitness {
            w1: t.output,
            w2: Vec::new(),
            kind: WitnessKind::HaltsFinite,
            steps,
            case: None,
        }),
        End::Cycle { first_len, touches_end } => {
            let mut w1 = t.output;
            let w2 = w1.split_off(first_len);
            let case = Some(if touches_end {
                CycleCase::ThroughEndmarkers
            } else {
                CycleCase::BetweenEndmarkers
            });
            if w2.is_empty() {
                return Some(PeriodicityWitness { w1, w2, kind: WitnessKind::SilentLoop, steps, case });
            }
            let (w1, w2) = canonicalize(w1, w2);
            Some(PeriodicityWitness {
                w1,
                w2,
                kind: WitnessKind::EventuallyPeriodicInfinite,
                steps,
                case,
            })
        }
        End::Limit | End::Missing(..) => None,
    }
}

/// Runs `dfa` on `0^n`, remembering every configuration, until it halts or
/// a configuration repeats. The output between the two visits is `w2`.
pub fn detect_cycle(dfa: &AdvicedDfa, n: u64) -> Result<PeriodicityWitness, AdvError> {
    let advice = advice_for(dfa, n)?;
    let t = simulate(
        &|q, a, b| dfa.action(q, a, b),
        &|q| dfa.is_halting(q),
        dfa.start(),
        dfa.zero(),
        n,
        advice,
        None,
        true,
        &mut |_| true,
    );
    Ok(witness_from(t).expect("total machine halts or cycles"))
}

/// Shortest `w1`, primitive `w2`, then `w2` rotated to its least rotation
/// (moving the rotated-out prefix onto `w1`).
pub(crate) fn canonicalize(mut w1: Vec<u8>, mut w2: Vec<u8>) -> (Vec<u8>, Vec<u8>) {
    let k = w2.len();
    let period = (1..=k)
        .find(|&d| k.is_multiple_of(d) && (d..k).all(|i| w2[i] == w2[i - d]))
        .unwrap_or(k);
    w2.truncate(period);
    while !w1.is_empty() && w1.last() == w2.last() {
        w1.pop();
        w2.rotate_right(1);
    }
    let best = (0..w2.len())
        .min_by(|&a, &b| {
            let ra = w2[a..].iter().chain(&w2[..a]);
            let rb = w2[b..].iter().chain(&w2[..b]);
            ra.cmp(rb)
        })
        .unwrap_or(0);
    w1.extend_from_slice(&w2[..best]);
    w2.rotate_left(best);
    (w1, w2)
}

/// The exact value of `0.w1 w2 w2 …`, in lowest terms.
pub fn rational_limit(w: &PeriodicityWitness, base: u32) -> Result<Rational, AdvError> {
    if w.kind != WitnessKind::EventuallyPeriodicInfinite || w.w2.is_empty() {
        return Err(AdvError::NotPeriodic);
    }
    let (num, den) = w.value(base);
    let r = Rational::new(num, den).expect("positive denominator");
    Ok(rat_lowest_terms(&r, &SpaceMeter::new()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckVerdict {
    Pass,
    Fail,
    /// The reference approximation was too coarse to decide.
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NCheck {
    pub n: u64,
    pub output: String,
    pub verdict: CheckVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub checks: Vec<NCheck>,
    pub first_failure: Option<u64>,
}

impl CheckReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.verdict == CheckVerdict::Pass)
    }
}

/// Extra digits of the reference beyond `n`.
pub const GUARD_DIGITS: usize = 64;

/// A reference approximation `a` with `|x − a| <= base^-prec`, scaled by
/// `base^prec`.
pub(crate) struct Reference {
    pub scaled: BigInt,
    pub prec: usize,
    pub base: u32,
}

impl Reference {
    pub fn new(g: &DigitGenerator, prec: usize) -> Result<Self, GenError> {
        let a = g.approx(prec)?;
        Ok(Reference {
            scaled: a.scaled_to(prec).expect("exact precision"),
            prec,
            base: g.base(),
        })
    }

    /// Compares the exact value `p/q` against `x` at tolerance `base^-n`.
    pub fn verdict(&self, p: &BigInt, q: &BigUint, n: usize) -> CheckVerdict {
        let b = BigInt::from(self.base);
        let q = BigInt::from(q.clone());
        // everything scaled by q·base^prec
        let diff = (&self.scaled * &q - p * b.pow(self.prec as u32)).abs();
        let err = q.clone();
        let tol = &q * b.pow((self.prec - n) as u32);
        if &diff + &err <= tol {
            CheckVerdict::Pass
        } else if diff > &tol + &err {
            CheckVerdict::Fail
        } else {
            CheckVerdict::Undecided
        }
    }

    /// Whether every value in `[p/q, p/q + base^-len]` fails at `n`.
    pub fn prefix_fails(&self, p: &BigInt, q: &BigUint, n: usize) -> bool {
        let b = BigInt::from(self.base);
        let q = BigInt::from(q.clone());
        let scale = b.pow(self.prec as u32);
        let lo = p * &scale;
        let hi = &lo + &scale;
        let x = &self.scaled * &q;
        let slack = &q * b.pow((self.prec - n) as u32) + &q;
        hi < &x - &slack || lo > &x + &slack
    }
}

/// For each `n <= n_max`, the exact value denoted by the machine's output
/// on `0^n` against `g` at tolerance `base^-n`.
pub fn check_computes(dfa: &AdvicedDfa, g: &DigitGenerator, n_max: u64) -> Result<CheckReport, AdvError> {
    if dfa.base() != g.base() {
        return Err(AdvError::Invalid(format!(
            "machine writes base {} but the generator is base {}",
            dfa.base(),
            g.base()
        )));
    }
    let reference = Reference::new(g, n_max as usize + GUARD_DIGITS)
        .map_err(|e| AdvError::Invalid(e.to_string()))?;
    let mut checks = Vec::new();
    for n in 0..=n_max {
        let w = detect_cycle(dfa, n)?;
        let (p, q) = w.value(dfa.base());
        checks.push(NCheck {
            n,
            output: w.to_string(),
            verdict: reference.verdict(&p, &q, n as usize),
        });
    }
    let first_failure = checks
        .iter()
        .find(|c| c.verdict == CheckVerdict::Fail)
        .map(|c| c.n);
    Ok(CheckReport { checks, first_failure })
}
