use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{check_base, GenError};
use crate::dyadic::UnaryProgram;
use crate::meter::{DigitSink, Flow, InputHead, InputSymbol, OutSym, Register, SpaceMeter};

/// A deterministic automaton with output reading radix-`k` numerals
/// most significant digit first and emitting base-`b` digits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomatonSpec {
    k: u32,
    b: u32,
    states: Vec<String>,
    start: usize,
    transition: Vec<Vec<usize>>,
    output: Vec<u8>,
}

#[derive(Debug, Serialize, Deserialize)]
struct AutomatonDoc {
    k: u32,
    b: u32,
    start: String,
    transitions: BTreeMap<String, BTreeMap<String, String>>,
    output: BTreeMap<String, u8>,
}

impl AutomatonSpec {
    /// `transition[s][d]` is the state after reading digit `d` in state `s`.
    /// The table must be total, outputs must be below `b`, and reading a
    /// leading zero from `start` must stay in `start`.
    pub fn new(
        k: u32,
        b: u32,
        states: Vec<String>,
        start: usize,
        transition: Vec<Vec<usize>>,
        output: Vec<u8>,
    ) -> Result<Self, GenError> {
        let bad = |why: String| Err(GenError::InvalidAutomaton(why));
        check_base(b)?;
        if !(2..=36).contains(&k) {
            return bad(format!("input radix {k} out of range"));
        }
        let count = states.len();
        if count == 0 || start >= count {
            return bad("start state is not a state".into());
        }
        if transition.len() != count || output.len() != count {
            return bad("transition and output tables must cover every state".into());
        }
        for (s, row) in transition.iter().enumerate() {
            if row.len() != k as usize {
                return bad(format!("state {} lacks transitions for some digits", states[s]));
            }
            if let Some(&t) = row.iter().find(|&&t| t >= count) {
                return bad(format!("transition to unknown state index {t}"));
            }
        }
        if let Some(&o) = output.iter().find(|&&o| u32::from(o) >= b) {
            return bad(format!("output digit {o} not below {b}"));
        }
        if transition[start][0] != start {
            return bad("start state must loop on digit 0".into());
        }
        Ok(AutomatonSpec {
            k,
            b,
            states,
            start,
            transition,
            output,
        })
    }

    /// Parses the JSON form:
    /// `{"k":2,"b":2,"start":"even","transitions":{"even":{"0":"even","1":"odd"},…},"output":{"even":0,…}}`.
    pub fn from_json(text: &str) -> Result<Self, GenError> {
        let doc: AutomatonDoc =
            serde_json::from_str(text).map_err(|e| GenError::InvalidSpec(e.to_string()))?;
        let states: Vec<String> = doc.transitions.keys().cloned().collect();
        let index = |name: &str| {
            states
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| GenError::InvalidAutomaton(format!("unknown state {name:?}")))
        };
        let start = index(&doc.start)?;
        let mut transition = Vec::with_capacity(states.len());
        let mut output = Vec::with_capacity(states.len());
        for s in &states {
            let row = &doc.transitions[s];
            let mut targets = Vec::with_capacity(doc.k as usize);
            for d in 0..doc.k {
                let key = crate::dyadic::digit_char(d as u8).to_string();
                let target = row.get(&key).ok_or_else(|| {
                    GenError::InvalidAutomaton(format!("state {s:?} has no transition on {key}"))
                })?;
                targets.push(index(target)?);
            }
            transition.push(targets);
            let o = doc
                .output
                .get(s)
                .ok_or_else(|| GenError::InvalidAutomaton(format!("state {s:?} has no output")))?;
            output.push(*o);
        }
        Self::new(doc.k, doc.b, states, start, transition, output)
    }

    pub fn to_json(&self) -> String {
        let doc = AutomatonDoc {
            k: self.k,
            b: self.b,
            start: self.states[self.start].clone(),
            transitions: self
                .states
                .iter()
                .zip(&self.transition)
                .map(|(s, row)| {
                    let row = row
                        .iter()
                        .enumerate()
                        .map(|(d, &t)| {
                            (crate::dyadic::digit_char(d as u8).to_string(), self.states[t].clone())
                        })
                        .collect();
                    (s.clone(), row)
                })
                .collect(),
            output: self.states.iter().cloned().zip(self.output.iter().copied()).collect(),
        };
        serde_json::to_string(&doc).expect("serializable")
    }

    pub fn input_radix(&self) -> u32 {
        self.k
    }

    pub fn output_base(&self) -> u32 {
        self.b
    }

    /// The output for the radix-`k` numeral `digits`, most significant first.
    pub fn eval_digits(&self, digits: &[u8]) -> u8 {
        let state = digits
            .iter()
            .fold(self.start, |s, &d| self.transition[s][d as usize]);
        self.output[state]
    }

    /// `a_i`, evaluated directly.
    pub fn term(&self, i: u64) -> u8 {
        let digits = num_bigint::BigUint::from(i).to_radix_be(self.k);
        self.eval_digits(&digits)
    }

    fn two_state(names: [&str; 2], out: [u8; 2]) -> Self {
        Self::new(
            2,
            2,
            names.iter().map(|s| s.to_string()).collect(),
            0,
            vec![vec![0, 1], vec![1, 0]],
            out.to_vec(),
        )
        .expect("valid")
    }

    /// Parity of the number of one bits.
    pub fn thue_morse() -> Self {
        Self::two_state(["even", "odd"], [0, 1])
    }

    /// Parity of the 2-adic valuation of `i`, as `1` for even valuation.
    pub fn period_doubling() -> Self {
        // nothing read yet, even or odd number of trailing zeros
        Self::new(
            2,
            2,
            vec!["start".into(), "even".into(), "odd".into()],
            0,
            vec![vec![0, 1], vec![2, 1], vec![1, 1]],
            vec![0, 1, 0],
        )
        .expect("valid")
    }

    /// Every term equals `digit`.
    pub fn constant(b: u32, digit: u8) -> Result<Self, GenError> {
        Self::new(2, b, vec!["q".into()], 0, vec![vec![0, 0]], vec![digit])
    }
}

/// Emits `0.a_1 a_2 … a_n`. A radix-`k` counter register holds `i`; for each
/// input symbol it is incremented and its digits are fed to the automaton.
#[derive(Debug, Clone)]
pub struct AutomaticProgram {
    spec: AutomatonSpec,
}

impl AutomaticProgram {
    pub fn new(spec: AutomatonSpec) -> Self {
        AutomaticProgram { spec }
    }
}

impl UnaryProgram for AutomaticProgram {
    fn base(&self) -> u32 {
        self.spec.b
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
        let mut count = Register::with_radix(meter, self.spec.k);
        count.set(0u32);
        while input.scan() == InputSymbol::Zero {
            count.incr();
            let digit = self.spec.eval_digits(&count.digits_msd());
            if out.emit(OutSym::Digit(digit)) == Flow::Stop {
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
    use crate::generators::gen_automatic;

    fn run(spec: &AutomatonSpec, n: usize) -> String {
        gen_automatic(spec, n, &SpaceMeter::new()).unwrap().to_string()
    }

    #[test]
    fn examples() {
        assert_eq!(run(&AutomatonSpec::thue_morse(), 8), "0.11010011");
        assert_eq!(run(&AutomatonSpec::period_doubling(), 6), "0.101110");
        assert_eq!(run(&AutomatonSpec::constant(2, 0).unwrap(), 5), "0.00000");
        assert_eq!(run(&AutomatonSpec::thue_morse(), 0), "0");
    }

    #[test]
    fn period_doubling_matches_valuation_parity() {
        let spec = AutomatonSpec::period_doubling();
        for i in 1..2000u64 {
            let expected = u8::from(i.trailing_zeros() % 2 == 0);
            assert_eq!(spec.term(i), expected, "i = {i}");
        }
    }

    #[test]
    fn validation() {
        let bad_start = AutomatonSpec::new(2, 2, vec!["a".into(), "b".into()], 0, vec![vec![1, 0], vec![1, 0]], vec![0, 1]);
        assert!(matches!(bad_start, Err(GenError::InvalidAutomaton(_))));
        let partial = AutomatonSpec::new(2, 2, vec!["a".into()], 0, vec![vec![0]], vec![0]);
        assert!(partial.is_err());
        let big_output = AutomatonSpec::new(2, 2, vec!["a".into()], 0, vec![vec![0, 0]], vec![2]);
        assert!(big_output.is_err());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"k":2,"b":2,"start":"even",
            "transitions":{"even":{"0":"even","1":"odd"},"odd":{"0":"odd","1":"even"}},
            "output":{"even":0,"odd":1}}"#;
        let spec = AutomatonSpec::from_json(text).unwrap();
        assert_eq!(run(&spec, 8), "0.11010011");
        let again = AutomatonSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(again, spec);
        let missing = r#"{"k":2,"b":2,"start":"a","transitions":{"a":{"0":"a"}},"output":{"a":0}}"#;
        assert!(matches!(AutomatonSpec::from_json(missing), Err(GenError::InvalidAutomaton(_))));
        assert!(matches!(AutomatonSpec::from_json("{"), Err(GenError::InvalidSpec(_))));
    }

    #[test]
    fn counter_space_is_logarithmic() {
        let m = SpaceMeter::new();
        gen_automatic(&AutomatonSpec::thue_morse(), 4096, &m).unwrap();
        assert_eq!(m.peak_cells(), 13);
    }
}
