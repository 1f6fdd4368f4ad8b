use std::collections::VecDeque;
use std::fmt::Write as _;
use std::fs;

use num_bigint::BigUint;
use serde_json::json;

use realspace::advdfa::{check_computes, detect_cycle, rational_limit, run, AdvError, AdvicedDfa, WitnessKind};
use realspace::dyadic::Dyadic;
use realspace::generators::nth_digit;
use realspace::meter::SpaceMeter;
use realspace::pairing::{self, TallyTriple};
use realspace::profiler::{algebraic_grid, classify, default_grid, sample, GrowthClass};
use realspace::tally::{
    digits_from_tally, leftcut_member, leftcut_via_tally, tally_member, tally_via_leftcut, OracleHandle,
    ScanMode, SearchMode, TallyError,
};

use crate::selector::{self, Selected};
use crate::{CliError, Direction, Format, Scan, Search};

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn from_tally(e: TallyError) -> CliError {
    match e {
        TallyError::InconsistentOracle { .. } => CliError::Failure(format!("{e}\n")),
        other => usage(other),
    }
}

fn words(v: Vec<String>) -> VecDeque<String> {
    v.into()
}

/// Resolves the selector and insists nothing is left over.
fn only_selector(number: Vec<String>, base: Option<u32>) -> Result<Selected, CliError> {
    let mut w = words(number);
    let s = selector::take(&mut w, base)?;
    match w.front() {
        Some(extra) => Err(usage(format!("unexpected argument {extra:?}"))),
        None => Ok(s),
    }
}

fn json_line(v: serde_json::Value) -> String {
    format!("{v}\n")
}

fn answer(member: bool) -> &'static str {
    if member {
        "member"
    } else {
        "non-member"
    }
}

pub fn digits(number: Vec<String>, n: usize, base: Option<u32>, meter: bool, format: Format) -> Result<String, CliError> {
    let g = only_selector(number, base)?.generator;
    let m = SpaceMeter::new();
    let d = g.eval(n, &m).map_err(usage)?;
    Ok(match format {
        Format::Json => json_line(json!({
            "number": g.label(),
            "n": n,
            "digits": d.to_string(),
            "peak_cells": m.peak_cells(),
        })),
        Format::Csv => format!("number,n,digits,peak_cells\n{},{n},{d},{}\n", g.label(), m.peak_cells()),
        Format::Text if meter => format!("{d}\npeak_cells: {}\n", m.peak_cells()),
        Format::Text => format!("{d}\n"),
    })
}

pub fn nth(number: Vec<String>, i: usize, base: Option<u32>, meter: bool) -> Result<String, CliError> {
    let g = only_selector(number, base)?.generator;
    let m = SpaceMeter::new();
    let d = nth_digit(&g, i, &m).map_err(usage)?;
    let digit = realspace::dyadic::digit_char(d);
    Ok(if meter {
        format!("{digit}\npeak_cells: {}\n", m.peak_cells())
    } else {
        format!("{digit}\n")
    })
}

pub fn profile(number: Vec<String>, grid: Option<Vec<u64>>, base: Option<u32>, format: Format) -> Result<String, CliError> {
    let sel = only_selector(number, base)?;
    let grid = grid.unwrap_or_else(|| if sel.algebraic { algebraic_grid() } else { default_grid() });
    let g = &sel.generator;
    let samples = sample(|n, m| g.eval(n as usize, m).map(drop), &grid).map_err(usage)?;
    let verdict = classify(&samples, &GrowthClass::ALL).map_err(usage)?;
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str("n,peak_cells\n");
            for s in &samples {
                writeln!(out, "{},{}", s.n, s.peak_cells).unwrap();
            }
        }
        Format::Json => out = json_line(json!({ "number": g.label(), "samples": samples, "verdict": verdict })),
        Format::Text => {
            writeln!(out, "{:>8}  peak_cells", "n").unwrap();
            for s in &samples {
                writeln!(out, "{:>8}  {}", s.n, s.peak_cells).unwrap();
            }
            writeln!(out, "best_class: {}", verdict.best_class).unwrap();
            writeln!(out, "fit_constant: {:.4}", verdict.fit_constant).unwrap();
            writeln!(out, "residual: {:.6}", verdict.residual).unwrap();
            writeln!(out, "margin: {:.2}", verdict.margin).unwrap();
        }
    }
    Ok(out)
}

fn parse_u64(s: &str, what: &str) -> Result<u64, CliError> {
    s.parse().map_err(|_| usage(format!("{what} must be a non-negative integer, got {s:?}")))
}

fn parse_len(s: &str) -> Result<BigUint, CliError> {
    s.parse().map_err(|_| usage(format!("length must be a non-negative integer, got {s:?}")))
}

fn triple_len(t: TallyTriple) -> BigUint {
    pairing::encode_triple(t, &SpaceMeter::new())
}

fn take_triple(w: &mut VecDeque<String>) -> Result<TallyTriple, CliError> {
    let mut next = |what: &str| {
        let s = w.pop_front().ok_or_else(|| usage(format!("missing {what}")))?;
        parse_u64(&s, what)
    };
    let (n, i, b) = (next("N")?, next("I")?, next("B")?);
    let b = u8::try_from(b).map_err(|_| usage("B must be 0 or 1"))?;
    Ok(TallyTriple { n, i, b })
}

pub fn tally(args: Vec<String>, len: Option<String>, base: Option<u32>, format: Format) -> Result<String, CliError> {
    let mut w = words(args);
    let g = selector::take(&mut w, base)?.generator;
    let len = match len {
        Some(l) => parse_len(&l)?,
        None => triple_len(take_triple(&mut w)?),
    };
    if let Some(extra) = w.front() {
        return Err(usage(format!("unexpected argument {extra:?}")));
    }
    let m = SpaceMeter::new();
    let member = tally_member(&len, &g, &m).map_err(from_tally)?;
    let triple = pairing::unpair3(&len, &SpaceMeter::new()).ok();
    let shown = triple.map_or_else(|| "invalid".to_string(), |t| t.to_string());
    Ok(match format {
        Format::Json => json_line(json!({
            "member": member,
            "length": len.to_string(),
            "triple": triple,
            "peak_cells": m.peak_cells(),
        })),
        Format::Csv => format!("length,triple,member,peak_cells\n{len},\"{shown}\",{},{}\n", u8::from(member), m.peak_cells()),
        Format::Text => format!("{}\nlength: {len}\ntriple: {shown}\npeak_cells: {}\n", answer(member), m.peak_cells()),
    })
}

pub fn leftcut(args: Vec<String>, base: Option<u32>, format: Format) -> Result<String, CliError> {
    let mut w = words(args);
    let g = selector::take(&mut w, base)?.generator;
    let text = w.pop_front().ok_or_else(|| usage("missing dyadic D"))?;
    if let Some(extra) = w.front() {
        return Err(usage(format!("unexpected argument {extra:?}")));
    }
    let d = Dyadic::parse(&text, g.base()).map_err(usage)?;
    let m = SpaceMeter::new();
    let member = leftcut_member(&d, &g, &m).map_err(from_tally)?;
    Ok(match format {
        Format::Json => json_line(json!({ "member": member, "dyadic": d.to_string(), "peak_cells": m.peak_cells() })),
        Format::Csv => format!("dyadic,member,peak_cells\n{d},{},{}\n", u8::from(member), m.peak_cells()),
        Format::Text => format!("{}\npeak_cells: {}\n", answer(member), m.peak_cells()),
    })
}

pub fn recover(number: Vec<String>, n: usize, scan: Scan, base: Option<u32>) -> Result<String, CliError> {
    let g = only_selector(number, base)?.generator;
    let oracle = OracleHandle::tally(&g);
    let mode = match scan {
        Scan::Fast => ScanMode::Fast,
        Scan::Faithful => ScanMode::Faithful,
    };
    let m = SpaceMeter::new();
    let d = digits_from_tally(&oracle, n, mode, &m).map_err(from_tally)?;
    Ok(format!("{d}\nqueries: {}\npeak_cells: {}\n", oracle.query_count(), m.peak_cells()))
}

pub struct Instance {
    pub triple: Option<Vec<u64>>,
    pub len: Option<String>,
    pub dyadic: Option<String>,
}

pub fn reduce(
    direction: Direction,
    number: Vec<String>,
    instance: Instance,
    search: Search,
    base: Option<u32>,
    format: Format,
) -> Result<String, CliError> {
    let g = only_selector(number, base)?.generator;
    let m = SpaceMeter::new();
    let (oracle, member) = match direction {
        Direction::T2L => {
            let len = match (instance.triple, instance.len) {
                (Some(t), None) => {
                    let b = u8::try_from(t[2]).map_err(|_| usage("B must be 0 or 1"))?;
                    triple_len(TallyTriple { n: t[0], i: t[1], b })
                }
                (None, Some(l)) => parse_len(&l)?,
                _ => return Err(usage("T2L needs exactly one of --triple N I B or --len L")),
            };
            let mode = match search {
                Search::Greedy => SearchMode::Greedy,
                Search::Exhaustive => SearchMode::Exhaustive,
            };
            let oracle = OracleHandle::leftcut(&g).with_transcript();
            let member = tally_via_leftcut(&len, &oracle, mode, &m).map_err(from_tally)?;
            (oracle, member)
        }
        Direction::L2T => {
            let text = instance.dyadic.ok_or_else(|| usage("L2T needs --dyadic D"))?;
            let d = Dyadic::parse(&text, g.base()).map_err(usage)?;
            let oracle = OracleHandle::tally(&g).with_transcript();
            let member = leftcut_via_tally(&d, &oracle, &m).map_err(from_tally)?;
            (oracle, member)
        }
    };
    let mut csv = Vec::new();
    oracle.write_transcript_csv(&mut csv).expect("writing to memory");
    let csv = String::from_utf8(csv).expect("ascii");
    Ok(match format {
        Format::Csv => csv,
        Format::Json => {
            let transcript: Vec<_> = oracle
                .transcript()
                .into_iter()
                .map(|(q, a)| json!({ "query": q, "answer": a }))
                .collect();
            json_line(json!({ "member": member, "queries": oracle.query_count(), "transcript": transcript }))
        }
        Format::Text => format!("{}\nqueries: {}\n{csv}", answer(member), oracle.query_count()),
    })
}

fn load_dfa(path: &str) -> Result<AdvicedDfa, CliError> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))?;
    AdvicedDfa::from_json(&text).map_err(|e| CliError::Spec(format!("{path}: {e}")))
}

fn adv(e: AdvError) -> CliError {
    usage(e)
}

pub fn dfa(path: &str, n: u64, limit: usize, check: Option<String>, format: Format) -> Result<String, CliError> {
    let dfa = load_dfa(path)?;
    let outcome = run(&dfa, n, limit).map_err(adv)?;
    let witness = detect_cycle(&dfa, n).map_err(adv)?;
    let limit_value = match witness.kind {
        WitnessKind::EventuallyPeriodicInfinite => Some(rational_limit(&witness, dfa.base()).map_err(adv)?.to_string()),
        _ => None,
    };
    let report = match check {
        Some(name) => {
            let g = only_selector(name.split_whitespace().map(String::from).collect(), Some(dfa.base()))?.generator;
            Some(check_computes(&dfa, &g, n).map_err(adv)?)
        }
        None => None,
    };
    let kind = serde_json::to_value(witness.kind).expect("enum");
    let kind = kind.as_str().unwrap_or_default();
    let out = match format {
        Format::Json => json_line(json!({
            "output": outcome.text(),
            "halted": outcome.halted,
            "steps": outcome.steps,
            "witness": { "w1": witness.w1, "w2": witness.w2, "kind": kind, "steps": witness.steps },
            "limit": limit_value,
            "check": report,
        })),
        Format::Text | Format::Csv => {
            let mut s = String::new();
            writeln!(s, "output: {}", outcome.text()).unwrap();
            writeln!(s, "halted: {}", outcome.halted).unwrap();
            writeln!(s, "witness: {witness} {kind}").unwrap();
            writeln!(s, "steps: {}", witness.steps).unwrap();
            if let Some(v) = &limit_value {
                writeln!(s, "limit: {v}").unwrap();
            }
            if let Some(r) = &report {
                for c in &r.checks {
                    let verdict = serde_json::to_value(c.verdict).expect("enum");
                    writeln!(s, "n={} {} {}", c.n, c.output, verdict.as_str().unwrap_or_default()).unwrap();
                }
                match r.first_failure {
                    Some(f) => writeln!(s, "first failure: n={f}").unwrap(),
                    None => writeln!(s, "first failure: none").unwrap(),
                }
            }
            s
        }
    };
    match report {
        Some(r) if !r.all_pass() => Err(CliError::Failure(out)),
        _ => Ok(out),
    }
}

fn parse_big(s: &str) -> Result<BigUint, CliError> {
    s.parse().map_err(|_| usage(format!("expected a non-negative integer, got {s:?}")))
}

pub fn pair_encode(values: &[String]) -> Result<String, CliError> {
    let v: Vec<BigUint> = values.iter().map(|s| parse_big(s)).collect::<Result<_, _>>()?;
    let m = SpaceMeter::new();
    let h = match v.as_slice() {
        [i, j] => pairing::pair(i, j, &m),
        [n, i, b] => pairing::pair3(n, i, b, &m),
        _ => return Err(usage("encode takes two or three values")),
    };
    Ok(format!("{h}\n"))
}

pub fn pair_decode(h: &str, triple: bool) -> Result<String, CliError> {
    let h = parse_big(h)?;
    let m = SpaceMeter::new();
    Ok(if triple {
        let (n, i, b) = pairing::unpair3_raw(&h, &m);
        format!("({n},{i},{b})\n")
    } else {
        let (i, j) = pairing::unpair(&h, &m);
        format!("({i},{j})\n")
    })
}
