use std::ops::ControlFlow;

use rand::Rng;

use super::sim::{simulate, witness_from, End, Reference, GUARD_DIGITS};
use super::{Action, Advice, AdvicedDfa, CheckVerdict, Dir, Sym};
use crate::dyadic::DigitGenerator;

/// Parameters of the randomized machine family.
#[derive(Debug, Clone, Copy)]
pub struct RandomFamily {
    pub max_states: usize,
    pub max_advice: usize,
    pub base: u32,
    /// Probability that a non-start state is halting.
    pub halt_prob: f64,
    /// Probability that a transition writes nothing.
    pub silent_prob: f64,
}

impl Default for RandomFamily {
    fn default() -> Self {
        RandomFamily {
            max_states: 6,
            max_advice: 3,
            base: 2,
            halt_prob: 0.15,
            silent_prob: 0.4,
        }
    }
}

fn legal(sym: Sym, wanted: Dir) -> Dir {
    match sym {
        Sym::LeftEnd => Dir::R,
        Sym::RightEnd => Dir::L,
        Sym::Letter(_) => wanted,
    }
}

/// A random machine over the input alphabet `{0, 1}` with a random default
/// advice string and a few per-length overrides for `n < 64`.
pub fn random_dfa<R: Rng>(rng: &mut R, family: RandomFamily) -> AdvicedDfa {
    let states = rng.gen_range(1..=family.max_states);
    let halting: Vec<usize> = (1..states).filter(|_| rng.gen_bool(family.halt_prob)).collect();
    let advice_bound = rng.gen_range(0..=family.max_advice);
    let word = |rng: &mut R| -> Vec<usize> {
        let len = rng.gen_range(0..=advice_bound);
        (0..len).map(|_| rng.gen_range(0..2)).collect()
    };
    let mut advice = Advice::constant(word(rng));
    for _ in 0..rng.gen_range(0..4) {
        let n = rng.gen_range(0..64);
        advice.by_length.insert(n, word(rng));
    }
    let width = 4;
    let dir = |rng: &mut R| if rng.gen_bool(0.5) { Dir::L } else { Dir::R };
    let table: Vec<Action> = (0..states * width * width)
        .map(|i| {
            let (a, b) = (Sym::from_index((i / width) % width), Sym::from_index(i % width));
            Action {
                next: rng.gen_range(0..states),
                input_move: legal(a, dir(rng)),
                advice_move: legal(b, dir(rng)),
                output: if rng.gen_bool(family.silent_prob) {
                    None
                } else {
                    Some(rng.gen_range(0..family.base) as u8)
                },
            }
        })
        .collect();
    AdvicedDfa::from_fn(
        states,
        0,
        &halting,
        vec!['0', '1'],
        family.base,
        advice_bound,
        advice,
        |q, a, b| table[(q * width + a.index()) * width + b.index()],
    )
    .expect("random machines are valid by construction")
}

/// Result of the exhaustive search over small machines.
#[derive(Debug, Clone, Default)]
pub struct Refutation {
    /// Partial transition tables visited.
    pub nodes: u64,
    /// A machine passing every `n <= n_max`, if one was found. The search
    /// stops at the first.
    pub counterexample: Option<AdvicedDfa>,
    /// Machines with no definite failure but at least one undecided `n`.
    pub undecided: Vec<AdvicedDfa>,
}

impl Refutation {
    /// Every machine in the family fails for some `n <= n_max`.
    pub fn refuted(&self) -> bool {
        self.counterexample.is_none() && self.undecided.is_empty()
    }
}

const STATES: usize = 2;
const WIDTH: usize = 3;

/// Searches every machine with at most two states, input alphabet `{0}`,
/// output digits `{0, 1}` and empty advice for one that computes `g` for all
/// `n <= n_max`.
///
/// Transition entries are chosen lazily: a run that reaches an undefined
/// entry branches over every legal action for it. A branch is cut as soon
/// as some `n` fails, either on a finished run or because the digits
/// written so far already rule out every continuation.
pub fn refute_two_state(g: &DigitGenerator, n_max: u64) -> Refutation {
    assert_eq!(g.base(), 2, "binary output only");
    let reference = Reference::new(g, n_max as usize + GUARD_DIGITS).expect("reference digits");
    let mut result = Refutation::default();
    for halting_mask in 0..(1u8 << STATES) {
        let halting = [halting_mask & 1 != 0, halting_mask & 2 != 0];
        let mut table = [None; STATES * WIDTH * WIDTH];
        if explore(&mut table, &halting, &reference, n_max, &mut result).is_break() {
            break;
        }
    }
    result
}

fn slot(q: usize, a: Sym, b: Sym) -> usize {
    (q * WIDTH + a.index()) * WIDTH + b.index()
}

fn options(a: Sym, b: Sym) -> Vec<Action> {
    let moves = |s: Sym| match s {
        Sym::LeftEnd => vec![Dir::R],
        Sym::RightEnd => vec![Dir::L],
        Sym::Letter(_) => vec![Dir::L, Dir::R],
    };
    let mut out = Vec::new();
    for next in 0..STATES {
        for &input_move in &moves(a) {
            for &advice_move in &moves(b) {
                for output in [None, Some(0), Some(1)] {
                    out.push(Action { next, input_move, advice_move, output });
                }
            }
        }
    }
    out
}

fn explore(
    table: &mut [Option<Action>; STATES * WIDTH * WIDTH],
    halting: &[bool; STATES],
    reference: &Reference,
    n_max: u64,
    result: &mut Refutation,
) -> ControlFlow<()> {
    result.nodes += 1;
    let mut decided = true;
    // the largest n is the most demanding, so try it first
    for n in (0..=n_max).rev() {
        let mut doomed = false;
        let t = {
            let lookup = |q: usize, a: Sym, b: Sym| table[slot(q, a, b)];
            let mut watch = |out: &[u8]| {
                let p = num_bigint::BigUint::from_radix_be(out, 2).expect("binary digits");
                let q = num_bigint::BigUint::from(2u32).pow(out.len() as u32);
                doomed = reference.prefix_fails(&p.into(), &q, n as usize);
                !doomed
            };
            simulate(&lookup, &|q| halting[q], 0, 0, n, &[], None, true, &mut watch)
        };
        if doomed {
            return ControlFlow::Continue(());
        }
        if let End::Missing(q, a, b) = t.end {
            let at = slot(q, a, b);
            for act in options(a, b) {
                table[at] = Some(act);
                explore(table, halting, reference, n_max, result)?;
            }
            table[at] = None;
            return ControlFlow::Continue(());
        }
        let w = witness_from(t).expect("finished run");
        let (p, q) = w.value(2);
        match reference.verdict(&p, &q, n as usize) {
            CheckVerdict::Fail => return ControlFlow::Continue(()),
            CheckVerdict::Undecided => decided = false,
            CheckVerdict::Pass => {}
        }
    }
    let dfa = complete(table, halting);
    if decided {
        result.counterexample = Some(dfa);
        ControlFlow::Break(())
    } else {
        result.undecided.push(dfa);
        ControlFlow::Continue(())
    }
}

/// Fills the unreached entries of a partial table so it becomes a valid
/// machine.
fn complete(table: &[Option<Action>; STATES * WIDTH * WIDTH], halting: &[bool; STATES]) -> AdvicedDfa {
    let halting: Vec<usize> = (0..STATES).filter(|&q| halting[q]).collect();
    AdvicedDfa::from_fn(STATES, 0, &halting, vec!['0'], 2, 0, Advice::constant(vec![]), |q, a, b| {
        table[slot(q, a, b)].unwrap_or(Action {
            next: q,
            input_move: legal(a, Dir::R),
            advice_move: legal(b, Dir::R),
            output: None,
        })
    })
    .expect("valid")
}
