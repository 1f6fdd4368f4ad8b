//! Two-way deterministic finite automata with a read-only advice tape.
//!
//! The machine reads `¢0^n$` on its input tape and `¢a_n$` on its advice
//! tape, moving both heads one cell left or right per step and writing at
//! most one output digit per step. Advice strings have bounded length, so
//! for a fixed `n` the configuration space `(state, h1, h2)` is finite and
//! every run either halts or enters a cycle.

mod search;
mod sim;

use std::collections::BTreeMap;
use std::fmt;

use serde::Deserialize;
use thiserror::Error;

pub use search::{random_dfa, refute_two_state, RandomFamily, Refutation};
pub use sim::{
    check_computes, detect_cycle, rational_limit, run, CheckReport, CheckVerdict, Configuration,
    CycleCase, NCheck, PeriodicityWitness, RunOutcome, StopReason, WitnessKind,
};

pub const LEFT_END: char = '¢';
pub const RIGHT_END: char = '$';

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AdvError {
    #[error("no advice string for input length {0}")]
    AdviceMissing(u64),
    #[error("invalid machine: {0}")]
    Invalid(String),
    #[error("malformed machine document: {0}")]
    Json(String),
    #[error("witness is not eventually periodic with a nonempty block")]
    NotPeriodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dir {
    L,
    R,
}

/// A tape symbol as the transition table sees it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sym {
    LeftEnd,
    RightEnd,
    /// Index into the input alphabet.
    Letter(usize),
}

impl Sym {
    fn index(self) -> usize {
        match self {
            Sym::LeftEnd => 0,
            Sym::RightEnd => 1,
            Sym::Letter(i) => i + 2,
        }
    }

    fn from_index(i: usize) -> Self {
        match i {
            0 => Sym::LeftEnd,
            1 => Sym::RightEnd,
            k => Sym::Letter(k - 2),
        }
    }
}

/// One transition: next state, head moves, and an optional output digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Action {
    pub next: usize,
    pub input_move: Dir,
    pub advice_move: Dir,
    pub output: Option<u8>,
}

/// Advice strings by input length, with an optional default.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Advice {
    pub default: Option<Vec<usize>>,
    pub by_length: BTreeMap<u64, Vec<usize>>,
}

impl Advice {
    /// The same advice for every `n`.
    pub fn constant(word: Vec<usize>) -> Self {
        Advice {
            default: Some(word),
            by_length: BTreeMap::new(),
        }
    }

    pub fn for_length(&self, n: u64) -> Option<&[usize]> {
        self.by_length.get(&n).or(self.default.as_ref()).map(Vec::as_slice)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct AdvicedDfa {
    states: Vec<String>,
    start: usize,
    halting: Vec<bool>,
    alphabet: Vec<char>,
    zero: usize,
    base: u32,
    advice_bound: usize,
    advice: Advice,
    table: Vec<Option<Action>>,
}

impl fmt::Debug for AdvicedDfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AdvicedDfa")
            .field("states", &self.states)
            .field("start", &self.start)
            .field("base", &self.base)
            .field("advice_bound", &self.advice_bound)
            .finish()
    }
}

impl AdvicedDfa {
    /// Builds a machine from a transition function defined on every
    /// non-halting state. `alphabet` must contain `'0'`; output digits are
    /// below `base`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_fn(
        state_count: usize,
        start: usize,
        halting: &[usize],
        alphabet: Vec<char>,
        base: u32,
        advice_bound: usize,
        advice: Advice,
        delta: impl Fn(usize, Sym, Sym) -> Action,
    ) -> Result<Self, AdvError> {
        let width = alphabet.len() + 2;
        let mut table = vec![None; state_count * width * width];
        for q in 0..state_count {
            if halting.contains(&q) {
                continue;
            }
            for a in 0..width {
                for b in 0..width {
                    table[(q * width + a) * width + b] = Some(delta(q, Sym::from_index(a), Sym::from_index(b)));
                }
            }
        }
        Self::validated(
            (0..state_count).map(|q| format!("q{}", q + 1)).collect(),
            start,
            (0..state_count).map(|q| halting.contains(&q)).collect(),
            alphabet,
            base,
            advice_bound,
            advice,
            table,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn validated(
        states: Vec<String>,
        start: usize,
        halting: Vec<bool>,
        alphabet: Vec<char>,
        base: u32,
        advice_bound: usize,
        advice: Advice,
        table: Vec<Option<Action>>,
    ) -> Result<Self, AdvError> {
        let bad = |s: String| Err(AdvError::Invalid(s));
        let count = states.len();
        if count == 0 || start >= count {
            return bad("start state out of range".into());
        }
        let Some(zero) = alphabet.iter().position(|&c| c == '0') else {
            return bad("input alphabet must contain 0".into());
        };
        if !(2..=crate::dyadic::MAX_BASE).contains(&base) {
            return bad(format!("output base {base} out of range"));
        }
        let width = alphabet.len() + 2;
        for word in advice.default.iter().chain(advice.by_length.values()) {
            if word.len() > advice_bound {
                return bad(format!("advice of length {} exceeds bound {advice_bound}", word.len()));
            }
            if word.iter().any(|&c| c >= alphabet.len()) {
                return bad("advice uses a symbol outside the alphabet".into());
            }
        }
        for q in 0..count {
            for a in 0..width {
                for b in 0..width {
                    let entry = table[(q * width + a) * width + b];
                    let here = || format!("({}, {}, {})", states[q], show(&alphabet, a), show(&alphabet, b));
                    match entry {
                        None if !halting[q] => return bad(format!("no transition for {}", here())),
                        None => {}
                        Some(act) => {
                            if act.next >= count {
                                return bad(format!("transition {} targets an unknown state", here()));
                            }
                            if act.output.is_some_and(|d| u32::from(d) >= base) {
                                return bad(format!("transition {} outputs a digit not below {base}", here()));
                            }
                            for (sym, mv) in [(a, act.input_move), (b, act.advice_move)] {
                                if (sym == 0 && mv == Dir::L) || (sym == 1 && mv == Dir::R) {
                                    return bad(format!("transition {} moves past an endmarker", here()));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(AdvicedDfa {
            states,
            start,
            halting,
            alphabet,
            zero,
            base,
            advice_bound,
            advice,
            table,
        })
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.states[q]
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_halting(&self, q: usize) -> bool {
        self.halting[q]
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn advice_bound(&self) -> usize {
        self.advice_bound
    }

    pub fn advice(&self) -> &Advice {
        &self.advice
    }

    pub(crate) fn width(&self) -> usize {
        self.alphabet.len() + 2
    }

    pub(crate) fn zero(&self) -> usize {
        self.zero
    }

    pub fn action(&self, q: usize, input: Sym, advice: Sym) -> Option<Action> {
        let w = self.width();
        self.table[(q * w + input.index()) * w + advice.index()]
    }

    /// Size of the configuration space on inputs of length `n`.
    pub fn configuration_bound(&self, n: u64) -> u64 {
        self.states.len() as u64 * (n + 2) * (self.advice_bound as u64 + 2)
    }

    /// Parses the JSON form. See the crate README for the schema.
    pub fn from_json(text: &str) -> Result<Self, AdvError> {
        let doc: DfaDoc = serde_json::from_str(text).map_err(|e| AdvError::Json(e.to_string()))?;
        doc.build()
    }
}

fn show(alphabet: &[char], i: usize) -> char {
    match Sym::from_index(i) {
        Sym::LeftEnd => LEFT_END,
        Sym::RightEnd => RIGHT_END,
        Sym::Letter(k) => alphabet[k],
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DfaDoc {
    states: Vec<String>,
    start: String,
    #[serde(default)]
    halting: Vec<String>,
    #[serde(default = "default_alphabet")]
    input_alphabet: Vec<String>,
    output_alphabet: Vec<String>,
    #[serde(default)]
    advice_bound: usize,
    #[serde(default)]
    advice: AdviceDoc,
    transitions: Vec<EntryDoc>,
}

fn default_alphabet() -> Vec<String> {
    vec!["0".into()]
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct AdviceDoc {
    #[serde(default)]
    default: Option<String>,
    #[serde(default)]
    by_length: BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryDoc {
    state: String,
    #[serde(default = "wildcard")]
    input: String,
    #[serde(default = "wildcard")]
    advice: String,
    next: String,
    moves: [String; 2],
    #[serde(default)]
    output: Option<String>,
}

fn wildcard() -> String {
    "*".into()
}

/// A move as written in the document. `LB` and `RB` bounce: they move
/// left (right) except on the endmarker that forbids it.
#[derive(Clone, Copy)]
enum MoveDoc {
    L,
    R,
    LBounce,
    RBounce,
}

impl MoveDoc {
    fn parse(s: &str) -> Result<Self, AdvError> {
        Ok(match s {
            "L" => MoveDoc::L,
            "R" => MoveDoc::R,
            "LB" => MoveDoc::LBounce,
            "RB" => MoveDoc::RBounce,
            other => return Err(AdvError::Json(format!("unknown move {other:?}"))),
        })
    }

    fn resolve(self, sym: usize) -> Dir {
        match (self, sym) {
            (MoveDoc::L, _) => Dir::L,
            (MoveDoc::R, _) => Dir::R,
            (MoveDoc::LBounce, 0) => Dir::R,
            (MoveDoc::LBounce, _) => Dir::L,
            (MoveDoc::RBounce, 1) => Dir::L,
            (MoveDoc::RBounce, _) => Dir::R,
        }
    }
}

impl DfaDoc {
    fn build(self) -> Result<AdvicedDfa, AdvError> {
        let json = |s: String| AdvError::Json(s);
        let alphabet: Vec<char> = self
            .input_alphabet
            .iter()
            .map(|s| single_char(s).ok_or_else(|| json(format!("alphabet symbol {s:?} is not one character"))))
            .collect::<Result<_, _>>()?;
        let digits: Vec<u8> = self
            .output_alphabet
            .iter()
            .map(|s| {
                single_char(s)
                    .and_then(|c| c.to_digit(36))
                    .map(|d| d as u8)
                    .ok_or_else(|| json(format!("output symbol {s:?} is not a digit")))
            })
            .collect::<Result<_, _>>()?;
        let base = digits.len() as u32;
        if digits.iter().enumerate().any(|(i, &d)| d as usize != i) {
            return Err(json("output alphabet must be the digits 0..b-1 in order".into()));
        }
        let state = |name: &str| {
            self.states
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| json(format!("unknown state {name:?}")))
        };
        let letter = |c: char| alphabet.iter().position(|&a| a == c);
        let word = |s: &str| {
            s.chars()
                .map(|c| letter(c).ok_or_else(|| json(format!("advice symbol {c:?} not in alphabet"))))
                .collect::<Result<Vec<_>, _>>()
        };
        let width = alphabet.len() + 2;
        let symbols = |s: &str| -> Result<Vec<usize>, AdvError> {
            match s {
                "*" => Ok((0..width).collect()),
                _ => match single_char(s) {
                    Some(LEFT_END) => Ok(vec![0]),
                    Some(RIGHT_END) => Ok(vec![1]),
                    Some(c) => letter(c)
                        .map(|k| vec![k + 2])
                        .ok_or_else(|| json(format!("symbol {s:?} not in alphabet"))),
                    None => Err(json(format!("symbol {s:?} is not one character"))),
                },
            }
        };

        let start = state(&self.start)?;
        let mut halting = vec![false; self.states.len()];
        for h in &self.halting {
            halting[state(h)?] = true;
        }
        let mut table = vec![None; self.states.len() * width * width];
        // later entries override earlier ones
        for e in &self.transitions {
            let q = state(&e.state)?;
            let next = state(&e.next)?;
            let (mi, ma) = (MoveDoc::parse(&e.moves[0])?, MoveDoc::parse(&e.moves[1])?);
            let output = match &e.output {
                None => None,
                Some(s) if s.is_empty() => None,
                Some(s) => Some(
                    single_char(s)
                        .and_then(|c| c.to_digit(36))
                        .filter(|&d| d < base)
                        .ok_or_else(|| json(format!("output {s:?} is not an output digit")))?
                        as u8,
                ),
            };
            for a in symbols(&e.input)? {
                for b in symbols(&e.advice)? {
                    table[(q * width + a) * width + b] = Some(Action {
                        next,
                        input_move: mi.resolve(a),
                        advice_move: ma.resolve(b),
                        output,
                    });
                }
            }
        }
        let advice = Advice {
            default: self.advice.default.as_deref().map(word).transpose()?,
            by_length: self
                .advice
                .by_length
                .iter()
                .map(|(k, v)| {
                    let n = k.parse::<u64>().map_err(|_| json(format!("advice key {k:?} is not a length")))?;
                    Ok((n, word(v)?))
                })
                .collect::<Result<_, AdvError>>()?,
        };
        AdvicedDfa::validated(
            self.states,
            start,
            halting,
            alphabet,
            base,
            self.advice_bound,
            advice,
            table,
        )
    }
}

fn single_char(s: &str) -> Option<char> {
    let mut it = s.chars();
    let c = it.next()?;
    it.next().is_none().then_some(c)
}

/// Small machines used in examples and tests.
pub mod machines {
    use super::*;

    fn bounce(sym: Sym, preferred: Dir) -> Dir {
        match sym {
            Sym::LeftEnd => Dir::R,
            Sym::RightEnd => Dir::L,
            Sym::Letter(_) => preferred,
        }
    }

    /// Emits `0101…` forever, ignoring its input: the value `1/3`.
    pub fn alternator() -> AdvicedDfa {
        AdvicedDfa::from_fn(2, 0, &[], vec!['0'], 2, 0, Advice::constant(vec![]), |q, a, b| Action {
            next: 1 - q,
            input_move: bounce(a, Dir::R),
            advice_move: bounce(b, Dir::R),
            output: Some(q as u8),
        })
        .expect("valid")
    }

    /// Halts before doing anything.
    pub fn halt_immediately() -> AdvicedDfa {
        AdvicedDfa::from_fn(1, 0, &[0], vec!['0'], 2, 0, Advice::constant(vec![]), |_, _, _| {
            unreachable!("halting start state")
        })
        .expect("valid")
    }

    /// Writes `digit` for each input cell, then halts at `$`.
    pub fn one_per_cell(digit: u8) -> AdvicedDfa {
        AdvicedDfa::from_fn(2, 0, &[1], vec!['0'], 2, 0, Advice::constant(vec![]), move |_, a, b| {
            let advice_move = bounce(b, Dir::R);
            match a {
                Sym::LeftEnd => Action { next: 0, input_move: Dir::R, advice_move, output: None },
                Sym::Letter(_) => Action { next: 0, input_move: Dir::R, advice_move, output: Some(digit) },
                Sym::RightEnd => Action { next: 1, input_move: Dir::L, advice_move, output: None },
            }
        })
        .expect("valid")
    }

    /// Bounces its input head between the endmarkers without writing.
    pub fn silent_shuttle() -> AdvicedDfa {
        AdvicedDfa::from_fn(1, 0, &[], vec!['0'], 2, 0, Advice::constant(vec![]), |_, a, b| Action {
            next: 0,
            input_move: bounce(a, Dir::R),
            advice_move: bounce(b, Dir::R),
            output: None,
        })
        .expect("valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALTERNATOR: &str = r#"{
        "states": ["even", "odd"],
        "start": "even",
        "output_alphabet": ["0", "1"],
        "transitions": [
            {"state": "even", "next": "odd", "moves": ["RB", "RB"], "output": "0"},
            {"state": "odd", "next": "even", "moves": ["RB", "RB"], "output": "1"}
        ]
    }"#;

    #[test]
    fn json_matches_builder() {
        let parsed = AdvicedDfa::from_json(ALTERNATOR).unwrap();
        let built = machines::alternator();
        for q in 0..2 {
            for a in 0..3 {
                for b in 0..3 {
                    let (a, b) = (Sym::from_index(a), Sym::from_index(b));
                    assert_eq!(parsed.action(q, a, b), built.action(q, a, b));
                }
            }
        }
    }

    #[test]
    fn validation_errors() {
        let no_fallback = ALTERNATOR.replace(r#""moves": ["RB", "RB"], "output": "1""#, r#""input": "0", "moves": ["R", "R"], "output": "1""#);
        assert!(matches!(AdvicedDfa::from_json(&no_fallback), Err(AdvError::Invalid(_))));
        let past_end = ALTERNATOR.replace(r#"["RB", "RB"], "output": "0""#, r#"["L", "RB"], "output": "0""#);
        assert!(matches!(AdvicedDfa::from_json(&past_end), Err(AdvError::Invalid(_))));
        let bad_digit = ALTERNATOR.replace(r#""output": "1""#, r#""output": "2""#);
        assert!(matches!(AdvicedDfa::from_json(&bad_digit), Err(AdvError::Json(_))));
        assert!(matches!(AdvicedDfa::from_json("[]"), Err(AdvError::Json(_))));
        let long_advice = ALTERNATOR.replace(r#""start": "even","#, r#""start": "even", "advice": {"default": "00"}, "advice_bound": 1,"#);
        assert!(matches!(AdvicedDfa::from_json(&long_advice), Err(AdvError::Invalid(_))));
    }

    #[test]
    fn advice_lookup() {
        let mut advice = Advice::constant(vec![0]);
        advice.by_length.insert(3, vec![]);
        assert_eq!(advice.for_length(2), Some(&[0][..]));
        assert_eq!(advice.for_length(3), Some(&[][..]));
        assert_eq!(Advice::default().for_length(1), None);
    }
}
