use super::GenError;
use crate::dyadic::DigitGenerator;
use crate::meter::{DigitSink, Flow, InputHead, InputSymbol, OutSym, Register, SpaceMeter, UnaryInput};

/// A sink that counts fractional digits on a register and keeps only the
/// one at position `target`. Integer digits are ignored.
pub struct DigitProbe<'r, 'm> {
    target: &'r Register<'m>,
    counter: Register<'m>,
    in_fraction: bool,
    negative: bool,
    digit: Option<u8>,
}

impl<'r, 'm> DigitProbe<'r, 'm> {
    pub fn new(target: &'r Register<'m>, meter: &'m SpaceMeter) -> Self {
        let mut counter = Register::new(meter);
        counter.set(0u32);
        DigitProbe {
            target,
            counter,
            in_fraction: false,
            negative: false,
            digit: None,
        }
    }

    pub fn digit(&self) -> Option<u8> {
        self.digit
    }

    /// Whether the generator wrote a minus sign.
    pub fn negative(&self) -> bool {
        self.negative
    }

    pub fn seen(&self) -> &Register<'m> {
        &self.counter
    }
}

impl DigitSink for DigitProbe<'_, '_> {
    fn emit(&mut self, sym: OutSym) -> Flow {
        match sym {
            OutSym::Minus => self.negative = true,
            OutSym::Point => self.in_fraction = true,
            OutSym::Digit(d) if self.in_fraction => {
                self.counter.incr();
                if self.counter.cmp_value(self.target).is_eq() {
                    self.digit = Some(d);
                    return Flow::Stop;
                }
            }
            _ => {}
        }
        Flow::Continue
    }
}

/// The `n`-th fractional digit of `g`, from a run of `g` on `0^n` that
/// keeps only a position counter and the target `n` on registers.
pub fn nth_digit(g: &DigitGenerator, n: usize, meter: &SpaceMeter) -> Result<u8, GenError> {
    if n == 0 {
        return Err(GenError::InvalidPosition);
    }
    let mut target = Register::new(meter);
    target.set(0u32);
    let mut input = UnaryInput::new(n, meter);
    while input.scan() == InputSymbol::Zero {
        target.incr();
        input.advance();
    }
    let mut probe = DigitProbe::new(&target, meter);
    g.eval_into(n, &mut probe, meter)?;
    probe.digit().ok_or(GenError::ShortOutput {
        expected: n,
        got: probe.seen().to_u64().unwrap_or(0) as usize,
    })
}
