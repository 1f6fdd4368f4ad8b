use std::cell::{Cell, RefCell};
use std::fmt;
use std::io::Write;
use std::sync::Arc;

use num_bigint::BigUint;

use super::{leftcut_member, tally_member, TallyError};
use crate::dyadic::{DigitGenerator, Dyadic};
use crate::meter::SpaceMeter;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    /// Answers "is `0^len` in the tally set?", given `len`.
    Tally,
    /// Answers "is `d <= φ(prec(d))`?".
    LeftCut,
}

impl fmt::Display for OracleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleKind::Tally => "tally",
            OracleKind::LeftCut => "leftcut",
        })
    }
}

type TallyFn = Arc<dyn Fn(&BigUint) -> bool + Send + Sync>;
type LeftCutFn = Arc<dyn Fn(&Dyadic) -> bool + Send + Sync>;

#[derive(Clone)]
enum Backing {
    Generator(DigitGenerator),
    Tally(TallyFn),
    LeftCut(LeftCutFn),
}

/// A membership oracle with a query counter and an optional transcript.
///
/// Generator-backed answers are computed on a private meter, so a query
/// costs the caller nothing beyond writing the query itself.
pub struct OracleHandle {
    kind: OracleKind,
    base: u32,
    backing: Backing,
    queries: Cell<u64>,
    transcript: RefCell<Option<Vec<(String, bool)>>>,
}

impl fmt::Debug for OracleHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OracleHandle")
            .field("kind", &self.kind)
            .field("base", &self.base)
            .field("queries", &self.queries.get())
            .finish()
    }
}

impl OracleHandle {
    fn new(kind: OracleKind, base: u32, backing: Backing) -> Self {
        OracleHandle {
            kind,
            base,
            backing,
            queries: Cell::new(0),
            transcript: RefCell::new(None),
        }
    }

    /// The tally set of `g`'s fractional digits.
    pub fn tally(g: &DigitGenerator) -> Self {
        Self::new(OracleKind::Tally, g.base(), Backing::Generator(g.clone()))
    }

    /// The left cut of `g`'s truncations.
    pub fn leftcut(g: &DigitGenerator) -> Self {
        Self::new(OracleKind::LeftCut, g.base(), Backing::Generator(g.clone()))
    }

    /// A tally oracle answering with `f(len)`.
    pub fn tally_fn(base: u32, f: impl Fn(&BigUint) -> bool + Send + Sync + 'static) -> Self {
        Self::new(OracleKind::Tally, base, Backing::Tally(Arc::new(f)))
    }

    /// A left-cut oracle answering with `f(d)`.
    pub fn leftcut_fn(base: u32, f: impl Fn(&Dyadic) -> bool + Send + Sync + 'static) -> Self {
        Self::new(OracleKind::LeftCut, base, Backing::LeftCut(Arc::new(f)))
    }

    /// Starts recording every query and answer.
    pub fn with_transcript(self) -> Self {
        *self.transcript.borrow_mut() = Some(Vec::new());
        self
    }

    pub fn kind(&self) -> OracleKind {
        self.kind
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn query_count(&self) -> u64 {
        self.queries.get()
    }

    pub fn reset_count(&self) {
        self.queries.set(0);
    }

    pub fn transcript(&self) -> Vec<(String, bool)> {
        self.transcript.borrow().clone().unwrap_or_default()
    }

    /// Writes the transcript as CSV with header `query,answer`.
    pub fn write_transcript_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "query,answer")?;
        for (q, a) in self.transcript() {
            writeln!(w, "{q},{}", u8::from(a))?;
        }
        Ok(())
    }

    fn record(&self, query: impl FnOnce() -> String, answer: bool) {
        self.queries.set(self.queries.get() + 1);
        if let Some(t) = self.transcript.borrow_mut().as_mut() {
            t.push((query(), answer));
        }
    }

    fn expect(&self, kind: OracleKind) -> Result<(), TallyError> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(TallyError::WrongOracleKind {
                expected: kind,
                got: self.kind,
            })
        }
    }

    /// Is `0^len` a member?
    pub fn query_tally(&self, len: &BigUint) -> Result<bool, TallyError> {
        self.expect(OracleKind::Tally)?;
        let answer = match &self.backing {
            Backing::Generator(g) => tally_member(len, g, &SpaceMeter::new())?,
            Backing::Tally(f) => f(len),
            Backing::LeftCut(_) => unreachable!("kind checked"),
        };
        self.record(|| len.to_string(), answer);
        Ok(answer)
    }

    /// Is `d` in the left cut?
    pub fn query_leftcut(&self, d: &Dyadic) -> Result<bool, TallyError> {
        self.expect(OracleKind::LeftCut)?;
        let answer = match &self.backing {
            Backing::Generator(g) => leftcut_member(d, g, &SpaceMeter::new())?,
            Backing::LeftCut(f) => f(d),
            Backing::Tally(_) => unreachable!("kind checked"),
        };
        self.record(|| d.to_string(), answer);
        Ok(answer)
    }
}
