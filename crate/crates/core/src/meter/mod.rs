//! Instrumented work storage.
//!
//! Every algorithm in this crate keeps its growing state on metered storage:
//! symbol tapes ([`MeteredTape`]) or binary/radix-k counters ([`Register`]).
//! A single [`SpaceMeter`] per computation records how many cells are
//! currently charged and the high-water mark over the whole run. Finite
//! control (loop flags, automaton states, small constant tables) is not
//! charged.
//!
//! Input, output and oracle-query surfaces are free by default, which is the
//! usual convention for space-bounded machines; [`MeterPolicy`] can opt them in.

mod io;
mod register;
mod tape;

use std::cell::{Cell, RefCell};
use std::fmt;
use std::io::Write;

pub use io::{
    fake_tape_adapter, fake_tape_run, DigitSink, FakeTape, Flow, InputHead, InputSymbol, OutSym,
    OutputTape, UnaryInput,
};
pub use register::Register;
pub use tape::{Alphabet, MeteredTape, Move, Symbol, BLANK};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MeterError {
    #[error("head cannot move left of cell 0")]
    MoveLeftOfOrigin,
    #[error("symbol {0:?} is not in the tape alphabet")]
    SymbolNotInAlphabet(Symbol),
}

/// Which non-work surfaces are charged.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MeterPolicy {
    pub count_input: bool,
    pub count_output: bool,
    pub count_query: bool,
}

/// The kind of storage a footprint lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Surface {
    Work,
    Input,
    Output,
    Query,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TapeId(pub u32);

impl fmt::Display for TapeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One charge or release, as exported by [`SpaceMeter::write_trace_csv`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceEvent {
    pub step: u64,
    pub tape: TapeId,
    /// Positive when cells are charged, negative when a tape is released.
    pub charged: i64,
    pub peak: usize,
}

/// Cell accounting for one computation.
///
/// Invariants: `peak_cells() >= current_cells()` and `peak_cells()` never
/// decreases. Cells are released only when the owning tape is dropped.
pub struct SpaceMeter {
    policy: MeterPolicy,
    current: Cell<usize>,
    peak: Cell<usize>,
    next_id: Cell<u32>,
    step: Cell<u64>,
    trace: RefCell<Option<Vec<TraceEvent>>>,
}

impl Default for SpaceMeter {
    fn default() -> Self {
        Self::new()
    }
}

impl fmt::Debug for SpaceMeter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpaceMeter")
            .field("current_cells", &self.current.get())
            .field("peak_cells", &self.peak.get())
            .field("policy", &self.policy)
            .finish()
    }
}

impl SpaceMeter {
    pub fn new() -> Self {
        Self::with_policy(MeterPolicy::default())
    }

    pub fn with_policy(policy: MeterPolicy) -> Self {
        SpaceMeter {
            policy,
            current: Cell::new(0),
            peak: Cell::new(0),
            next_id: Cell::new(0),
            step: Cell::new(0),
            trace: RefCell::new(None),
        }
    }

    /// Starts recording an event log of every charge and release.
    pub fn with_trace(self) -> Self {
        *self.trace.borrow_mut() = Some(Vec::new());
        self
    }

    pub fn policy(&self) -> MeterPolicy {
        self.policy
    }

    pub fn current_cells(&self) -> usize {
        self.current.get()
    }

    pub fn peak_cells(&self) -> usize {
        self.peak.get()
    }

    pub fn counts(&self, surface: Surface) -> bool {
        match surface {
            Surface::Work => true,
            Surface::Input => self.policy.count_input,
            Surface::Output => self.policy.count_output,
            Surface::Query => self.policy.count_query,
        }
    }

    pub(crate) fn register_tape(&self) -> TapeId {
        let id = self.next_id.get();
        self.next_id.set(id + 1);
        TapeId(id)
    }

    fn record(&self, tape: TapeId, charged: i64) {
        let step = self.step.get();
        self.step.set(step + 1);
        if let Some(log) = self.trace.borrow_mut().as_mut() {
            log.push(TraceEvent {
                step,
                tape,
                charged,
                peak: self.peak.get(),
            });
        }
    }

    pub(crate) fn charge(&self, tape: TapeId, cells: usize) {
        if cells == 0 {
            return;
        }
        let now = self.current.get() + cells;
        self.current.set(now);
        if now > self.peak.get() {
            self.peak.set(now);
        }
        self.record(tape, cells as i64);
    }

    pub(crate) fn release(&self, tape: TapeId, cells: usize) {
        if cells == 0 {
            return;
        }
        self.current.set(self.current.get() - cells);
        self.record(tape, -(cells as i64));
    }

    /// Recorded events, empty unless built with [`SpaceMeter::with_trace`].
    pub fn trace(&self) -> Vec<TraceEvent> {
        self.trace.borrow().clone().unwrap_or_default()
    }

    /// Writes the event log as CSV with header `step,tape,charged,peak`.
    pub fn write_trace_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "step,tape,charged,peak")?;
        for e in self.trace() {
            writeln!(w, "{},{},{},{}", e.step, e.tape, e.charged, e.peak)?;
        }
        Ok(())
    }
}

/// Replays a trace and returns the high-water mark of the running sum.
pub fn replay_peak(events: &[TraceEvent]) -> usize {
    let mut current: i64 = 0;
    let mut peak: i64 = 0;
    for e in events {
        current += e.charged;
        peak = peak.max(current);
    }
    peak as usize
}

/// The charged extent of one tape. Charges grow monotonically while the
/// footprint lives and are returned to the meter on drop.
pub struct Footprint<'m> {
    meter: &'m SpaceMeter,
    id: TapeId,
    surface: Surface,
    extent: usize,
}

impl<'m> Footprint<'m> {
    pub fn new(meter: &'m SpaceMeter, surface: Surface) -> Self {
        Footprint {
            meter,
            id: meter.register_tape(),
            surface,
            extent: 0,
        }
    }

    pub fn id(&self) -> TapeId {
        self.id
    }

    pub fn meter(&self) -> &'m SpaceMeter {
        self.meter
    }

    /// Cells visited so far (whether or not the surface is charged).
    pub fn extent(&self) -> usize {
        self.extent
    }

    pub fn extend_to(&mut self, cells: usize) {
        if cells > self.extent {
            if self.meter.counts(self.surface) {
                self.meter.charge(self.id, cells - self.extent);
            }
            self.extent = cells;
        }
    }
}

impl Drop for Footprint<'_> {
    fn drop(&mut self) {
        if self.meter.counts(self.surface) {
            self.meter.release(self.id, self.extent);
        }
    }
}
