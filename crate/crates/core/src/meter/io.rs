//! Read-only unary input, write-only digit output, and the unary-simulation
//! ("fake tape") adapter that replaces an input of `n` zeros by a binary
//! position counter.

use num_bigint::BigUint;

use super::{Footprint, Register, SpaceMeter, Surface};
use crate::dyadic::{digit_char, Dyadic, DigitGenerator, UnaryProgram};
use crate::generators::GenError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputSymbol {
    Zero,
    Blank,
}

/// The input head of a machine that reads `0^n` followed by blanks.
pub trait InputHead {
    fn scan(&mut self) -> InputSymbol;
    fn advance(&mut self);
    /// Moves left; a no-op at cell 0.
    fn retreat(&mut self);
}

/// A literal input tape holding `0^n`.
pub struct UnaryInput<'m> {
    len: usize,
    head: usize,
    footprint: Footprint<'m>,
}

impl<'m> UnaryInput<'m> {
    pub fn new(len: usize, meter: &'m SpaceMeter) -> Self {
        UnaryInput {
            len,
            head: 0,
            footprint: Footprint::new(meter, Surface::Input),
        }
    }
}

impl InputHead for UnaryInput<'_> {
    fn scan(&mut self) -> InputSymbol {
        self.footprint.extend_to(self.head + 1);
        if self.head < self.len {
            InputSymbol::Zero
        } else {
            InputSymbol::Blank
        }
    }

    fn advance(&mut self) {
        self.head += 1;
    }

    fn retreat(&mut self) {
        self.head = self.head.saturating_sub(1);
    }
}

/// Simulated unary input: only the head position `pos` is stored, in binary,
/// on a metered work register. The length `n` is the adapter's own (binary)
/// input and is read, never copied.
pub struct FakeTape<'a, 'm> {
    len: &'a BigUint,
    pos: Register<'m>,
}

impl<'a, 'm> FakeTape<'a, 'm> {
    pub fn new(len: &'a BigUint, meter: &'m SpaceMeter) -> Self {
        let mut pos = Register::new(meter);
        pos.set(0u32);
        FakeTape { len, pos }
    }

    pub fn position(&self) -> &Register<'m> {
        &self.pos
    }
}

impl InputHead for FakeTape<'_, '_> {
    fn scan(&mut self) -> InputSymbol {
        if self.pos.magnitude() < self.len {
            InputSymbol::Zero
        } else {
            InputSymbol::Blank
        }
    }

    fn advance(&mut self) {
        self.pos.incr();
    }

    fn retreat(&mut self) {
        if !self.pos.is_zero() {
            self.pos.decr();
        }
    }
}

/// One symbol on a generator's output tape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutSym {
    Minus,
    Digit(u8),
    Point,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Continue,
    /// The consumer needs no further output.
    Stop,
}

/// Where a generator writes its output. Sinks see symbols one at a time and
/// never hand them back, so a consumer that keeps no buffer stays lean.
pub trait DigitSink {
    fn emit(&mut self, sym: OutSym) -> Flow;
}

/// Collects a generator's output into a [`Dyadic`], keeping at most
/// `capacity` fractional digits.
pub struct OutputTape<'m> {
    base: u32,
    negative: bool,
    int_digits: Vec<u8>,
    frac_digits: Vec<u8>,
    seen_point: bool,
    capacity: Option<usize>,
    footprint: Footprint<'m>,
}

impl<'m> OutputTape<'m> {
    pub fn new(base: u32, capacity: Option<usize>, meter: &'m SpaceMeter) -> Self {
        OutputTape {
            base,
            negative: false,
            int_digits: Vec::new(),
            frac_digits: Vec::new(),
            seen_point: false,
            capacity,
            footprint: Footprint::new(meter, Surface::Output),
        }
    }

    fn full(&self) -> bool {
        self.seen_point && self.capacity.is_some_and(|c| self.frac_digits.len() >= c)
    }

    pub fn frac_len(&self) -> usize {
        self.frac_digits.len()
    }

    pub fn into_dyadic(self) -> Dyadic {
        Dyadic::from_digits(
            self.base,
            self.negative,
            self.int_digits.clone(),
            self.frac_digits.clone(),
        )
    }

    /// Text written so far, e.g. `-0.0101`.
    pub fn text(&self) -> String {
        let mut s = String::new();
        if self.negative {
            s.push('-');
        }
        s.extend(self.int_digits.iter().map(|&d| digit_char(d)));
        if self.seen_point {
            s.push('.');
            s.extend(self.frac_digits.iter().map(|&d| digit_char(d)));
        }
        s
    }
}

impl DigitSink for OutputTape<'_> {
    fn emit(&mut self, sym: OutSym) -> Flow {
        if self.full() {
            return Flow::Stop;
        }
        match sym {
            OutSym::Minus => self.negative = true,
            OutSym::Point => self.seen_point = true,
            OutSym::Digit(d) if self.seen_point => self.frac_digits.push(d),
            OutSym::Digit(d) => self.int_digits.push(d),
        }
        let written = usize::from(self.negative)
            + self.int_digits.len()
            + usize::from(self.seen_point)
            + self.frac_digits.len();
        self.footprint.extend_to(written);
        if self.full() {
            Flow::Stop
        } else {
            Flow::Continue
        }
    }
}

/// Runs `program` as if on input `0^n`, with `n` supplied in binary.
pub fn fake_tape_run(
    program: &dyn UnaryProgram,
    n: &BigUint,
    sink: &mut dyn DigitSink,
    meter: &SpaceMeter,
) -> Result<(), GenError> {
    let mut input = FakeTape::new(n, meter);
    program.run(&mut input, sink, meter)
}

/// The unary-simulation adapter: evaluates `g` at precision `n` given in
/// binary. The only extra storage is the `pos` counter, about
/// `⌈log2(n+1)⌉` cells.
pub fn fake_tape_adapter(
    g: &DigitGenerator,
    n: u64,
    meter: &SpaceMeter,
) -> Result<Dyadic, GenError> {
    let len = BigUint::from(n);
    let cap = usize::try_from(n).map_err(|_| GenError::PrecisionTooLarge(n))?;
    let mut out = OutputTape::new(g.base(), Some(cap), meter);
    fake_tape_run(g.program(), &len, &mut out, meter)?;
    g.finish(out, cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn output_tape_stops_at_capacity() {
        let meter = SpaceMeter::new();
        let mut out = OutputTape::new(2, Some(2), &meter);
        assert_eq!(out.emit(OutSym::Digit(0)), Flow::Continue);
        assert_eq!(out.emit(OutSym::Point), Flow::Continue);
        assert_eq!(out.emit(OutSym::Digit(1)), Flow::Continue);
        assert_eq!(out.emit(OutSym::Digit(1)), Flow::Stop);
        assert_eq!(out.emit(OutSym::Digit(0)), Flow::Stop);
        assert_eq!(out.text(), "0.11");
        assert_eq!(meter.peak_cells(), 0);
    }

    #[test]
    fn fake_tape_reads_like_unary() {
        let meter = SpaceMeter::new();
        let n = BigUint::from(3u32);
        let mut fake = FakeTape::new(&n, &meter);
        let mut real = UnaryInput::new(3, &meter);
        for _ in 0..5 {
            assert_eq!(fake.scan(), real.scan());
            fake.advance();
            real.advance();
        }
        fake.retreat();
        real.retreat();
        assert_eq!(fake.scan(), real.scan());
        // pos reached 5 = 0b101
        assert_eq!(meter.peak_cells(), 3);
    }
}
