//! Tally sets, left cuts, and the reductions between them.
//!
//! For a generator `φ` the tally set holds `0^⟨n,i,b⟩` exactly when the
//! `i`-th fractional digit of `φ(n)` is `b`, and the left cut holds every
//! `d` in `[0, 1)` with `d <= φ(prec(d))`. Both views work on the
//! fractional part only: integer digits are dropped and negative numbers
//! are rejected.
//!
//! Unary strings are represented by their lengths and never materialized.

mod oracle;

use num_bigint::BigUint;
use thiserror::Error;

pub use oracle::{OracleHandle, OracleKind};

use crate::dyadic::{DigitGenerator, Dyadic};
use crate::generators::{DigitProbe, GenError, Membership};
use crate::meter::{fake_tape_run, DigitSink, Flow, OutSym, OutputTape, Register, SpaceMeter};
use crate::pairing::{pair3, unpair3, unpair3_raw, PairingError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TallyError {
    #[error(transparent)]
    InvalidTriple(#[from] PairingError),
    #[error("oracle is inconsistent at position {i} of precision {n}")]
    InconsistentOracle { n: u64, i: u64 },
    #[error("{0} is not in [0, 1)")]
    NotNormalized(String),
    #[error("base {got} does not match oracle base {expected}")]
    BaseMismatch { expected: u32, got: u32 },
    #[error("expected a {expected} oracle, got a {got} oracle")]
    WrongOracleKind { expected: OracleKind, got: OracleKind },
    #[error("exhaustive search over {0} candidates is too large")]
    ExhaustiveTooLarge(String),
    #[error(transparent)]
    Generator(#[from] GenError),
}

/// How `digits_from_tally` locates members.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ScanMode {
    /// Query `counter = 0, 1, 2, …` and decode each member.
    Faithful,
    /// Query `⟨n, pos, 0⟩` and `⟨n, pos, 1⟩` directly.
    #[default]
    Fast,
}

/// How `tally_via_leftcut` finds the largest member of `D_m`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum SearchMode {
    /// Fix digits most significant first, trying the largest digit first.
    #[default]
    Greedy,
    /// Query every candidate with `m` fractional digits.
    Exhaustive,
}

/// Largest `base^m` accepted by [`SearchMode::Exhaustive`].
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 20;

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

/// Is `0^len` in the tally set of `g`? Lengths that do not decode to a
/// valid `⟨n, i, b⟩` are non-members.
///
/// Decodes `len`, then runs `g` on a simulated `0^n` (with `n` held in
/// binary) through a probe that counts fractional digits up to `i`.
pub fn tally_member(len: &BigUint, g: &DigitGenerator, meter: &SpaceMeter) -> Result<bool, TallyError> {
    let Ok(t) = unpair3(len, meter) else {
        return Ok(false);
    };
    let target = Register::from_value(meter, t.i);
    let mut probe = DigitProbe::new(&target, meter);
    fake_tape_run(g.program(), &big(t.n), &mut probe, meter)?;
    if probe.negative() {
        return Err(TallyError::NotNormalized(g.label().to_string()));
    }
    let digit = probe.digit().ok_or(GenError::ShortOutput {
        expected: t.n as usize,
        got: probe.seen().to_u64().unwrap_or(0) as usize,
    })?;
    Ok(digit == t.b)
}

/// Reconstructs `0.φ(n)` from a tally oracle.
///
/// `Faithful` mode enumerates `counter = 0, 1, 2, …` until it meets a
/// member decoding to `⟨n, pos, b⟩`, emits `b`, then checks the
/// complementary triple and restarts the counter for the next position. The
/// search for a position gives up past `⟨n, pos, 1⟩`.
pub fn digits_from_tally(
    oracle: &OracleHandle,
    n: usize,
    mode: ScanMode,
    meter: &SpaceMeter,
) -> Result<Dyadic, TallyError> {
    let mut out = OutputTape::new(oracle.base(), Some(n), meter);
    out.emit(OutSym::Digit(0));
    if n == 0 {
        return Ok(out.into_dyadic());
    }
    out.emit(OutSym::Point);
    let mut length = Register::new(meter);
    let mut pos = Register::new(meter);
    length.set(n);
    pos.set(1u32);
    let inconsistent = |pos: &Register| TallyError::InconsistentOracle {
        n: n as u64,
        i: pos.to_u64().unwrap_or(0),
    };
    let nn = big(n as u64);
    let one = big(1);
    while pos.cmp_value(&length).is_le() {
        let p = pos.to_biguint();
        let bit = match mode {
            ScanMode::Fast => {
                let zero = oracle.query_tally(&pair3(&nn, &p, &big(0), meter))?;
                let one = oracle.query_tally(&pair3(&nn, &p, &one, meter))?;
                match (zero, one) {
                    (true, false) => 0,
                    (false, true) => 1,
                    _ => return Err(inconsistent(&pos)),
                }
            }
            ScanMode::Faithful => {
                let mut counter = Register::new(meter);
                let mut limit = Register::new(meter);
                counter.set(0u32);
                limit.set(pair3(&nn, &p, &one, meter));
                loop {
                    if counter.cmp_value(&limit).is_gt() {
                        return Err(inconsistent(&pos));
                    }
                    if oracle.query_tally(counter.magnitude())? {
                        let (a, j, k) = unpair3_raw(counter.magnitude(), meter);
                        if a == nn && j == p && k <= one {
                            let other = &one - &k;
                            if oracle.query_tally(&pair3(&nn, &p, &other, meter))? {
                                return Err(inconsistent(&pos));
                            }
                            break if k == one { 1 } else { 0 };
                        }
                    }
                    counter.incr();
                }
            }
        };
        out.emit(OutSym::Digit(bit));
        pos.incr();
    }
    Ok(out.into_dyadic())
}

fn check_unit(d: &Dyadic) -> Result<(), TallyError> {
    if d.is_unit_interval() {
        Ok(())
    } else {
        Err(TallyError::NotNormalized(d.to_string()))
    }
}

/// Streams `g`'s fractional digits against those of `d`, one position at a
/// time, and settles at the first difference.
struct CutComparator<'a, 'm> {
    d: &'a Dyadic,
    pos: Register<'m>,
    in_fraction: bool,
    negative: bool,
    verdict: Option<bool>,
}

impl DigitSink for CutComparator<'_, '_> {
    fn emit(&mut self, sym: OutSym) -> Flow {
        match sym {
            OutSym::Minus => {
                self.negative = true;
                return Flow::Stop;
            }
            OutSym::Point => self.in_fraction = true,
            OutSym::Digit(gamma) if self.in_fraction => {
                self.pos.incr();
                let j = self.pos.to_u64().expect("position fits u64") as usize;
                let Some(dj) = self.d.frac_digit(j) else {
                    return Flow::Stop;
                };
                if gamma != dj {
                    self.verdict = Some(dj < gamma);
                    return Flow::Stop;
                }
            }
            OutSym::Digit(_) => {}
        }
        Flow::Continue
    }
}

/// Is `d <= frac(φ(prec(d)))`?
pub fn leftcut_member(d: &Dyadic, g: &DigitGenerator, meter: &SpaceMeter) -> Result<bool, TallyError> {
    check_unit(d)?;
    if d.base() != g.base() {
        return Err(TallyError::BaseMismatch {
            expected: g.base(),
            got: d.base(),
        });
    }
    let mut prec = Register::new(meter);
    prec.set(d.prec());
    let mut cmp = CutComparator {
        d,
        pos: Register::from_value(meter, 0u32),
        in_fraction: false,
        negative: false,
        verdict: None,
    };
    fake_tape_run(g.program(), prec.magnitude(), &mut cmp, meter)?;
    if cmp.negative {
        return Err(TallyError::NotNormalized(g.label().to_string()));
    }
    if let Some(v) = cmp.verdict {
        return Ok(v);
    }
    if cmp.pos.cmp_value(&prec).is_lt() {
        return Err(GenError::ShortOutput {
            expected: d.prec(),
            got: cmp.pos.to_u64().unwrap_or(0) as usize,
        }
        .into());
    }
    Ok(true)
}

/// Decides left-cut membership of `d` with two tally queries per digit.
pub fn leftcut_via_tally(d: &Dyadic, oracle: &OracleHandle, meter: &SpaceMeter) -> Result<bool, TallyError> {
    check_unit(d)?;
    if d.base() != oracle.base() {
        return Err(TallyError::BaseMismatch {
            expected: oracle.base(),
            got: d.base(),
        });
    }
    let n = big(d.prec() as u64);
    let mut pos = Register::new(meter);
    pos.set(1u32);
    for &dj in d.frac_digits() {
        let p = pos.to_biguint();
        let zero = oracle.query_tally(&pair3(&n, &p, &big(0), meter))?;
        let one = oracle.query_tally(&pair3(&n, &p, &big(1), meter))?;
        let bit = match (zero, one) {
            (true, false) => 0,
            (false, true) => 1,
            _ => {
                return Err(TallyError::InconsistentOracle {
                    n: d.prec() as u64,
                    i: pos.to_u64().unwrap_or(0),
                })
            }
        };
        if bit != dj {
            return Ok(bit > dj);
        }
        pos.incr();
    }
    Ok(true)
}

/// Decides tally membership of `0^len` with a left-cut oracle: find the
/// largest `d` with `m` fractional digits in the cut, then read its `i`-th
/// digit.
pub fn tally_via_leftcut(
    len: &BigUint,
    oracle: &OracleHandle,
    mode: SearchMode,
    meter: &SpaceMeter,
) -> Result<bool, TallyError> {
    let t = unpair3(len, meter)?;
    let base = oracle.base();
    let m = usize::try_from(t.n).map_err(|_| GenError::PrecisionTooLarge(t.n))?;
    let best = match mode {
        SearchMode::Greedy => {
            let mut digits = vec![0u8; m];
            for j in 0..m {
                for c in (1..base as u8).rev() {
                    digits[j] = c;
                    let candidate = Dyadic::from_digits(base, false, vec![0], digits.clone());
                    if oracle.query_leftcut(&candidate)? {
                        break;
                    }
                    digits[j] = 0;
                }
            }
            digits
        }
        SearchMode::Exhaustive => {
            let total = u64::from(base)
                .checked_pow(m as u32)
                .filter(|&t| t <= EXHAUSTIVE_LIMIT)
                .ok_or_else(|| TallyError::ExhaustiveTooLarge(format!("{base}^{m}")))?;
            let mut best = None;
            for v in 0..total {
                let candidate = Dyadic::from_scaled(base, &v.into(), m);
                if oracle.query_leftcut(&candidate)? {
                    best = Some(candidate);
                }
            }
            best.map(|d| d.frac_digits().to_vec()).unwrap_or_else(|| vec![0; m])
        }
    };
    Ok(best[t.i as usize - 1] == t.b)
}

/// Tally membership for the indicator number of `set`: `⟨m, i, b⟩` is a
/// member iff `b = 1` and `i ∈ set`, or `b = 0` and `i ∉ set`.
pub fn indicator_tally_reduce(
    len: &BigUint,
    set: &dyn Membership,
    meter: &SpaceMeter,
) -> Result<bool, TallyError> {
    let t = unpair3(len, meter)?;
    let i = Register::from_value(meter, t.i);
    Ok(set.contains(&i, meter) == (t.b == 1))
}
