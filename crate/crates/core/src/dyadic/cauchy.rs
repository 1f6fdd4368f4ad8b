use std::fmt;
use std::sync::Arc;

use super::Dyadic;
use crate::generators::GenError;
use crate::meter::{DigitSink, InputHead, OutputTape, SpaceMeter, UnaryInput};

/// A machine that reads `0^n` and writes an `n`-digit approximation.
///
/// Implementations keep every quantity that grows with `n` on registers of
/// `meter`, read the input only through `input`, and write only through
/// `out`. They must stop writing once the sink returns
/// [`Flow::Stop`](crate::meter::Flow::Stop).
pub trait UnaryProgram: Send + Sync {
    fn base(&self) -> u32;

    fn run(
        &self,
        input: &mut dyn InputHead,
        out: &mut dyn DigitSink,
        meter: &SpaceMeter,
    ) -> Result<(), GenError>;
}

/// A named Cauchy function: `eval(n)` is an `n`-digit number within
/// `base^-n` of the represented real.
///
/// Every built-in emits the truncation of one fixed expansion, so
/// `eval(n)` is a prefix of `eval(m)` for `n <= m`.
#[derive(Clone)]
pub struct DigitGenerator {
    label: String,
    base: u32,
    program: Arc<dyn UnaryProgram>,
}

impl fmt::Debug for DigitGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DigitGenerator")
            .field("label", &self.label)
            .field("base", &self.base)
            .finish()
    }
}

impl DigitGenerator {
    pub fn new(label: impl Into<String>, program: impl UnaryProgram + 'static) -> Self {
        let base = program.base();
        DigitGenerator {
            label: label.into(),
            base,
            program: Arc::new(program),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn program(&self) -> &dyn UnaryProgram {
        self.program.as_ref()
    }

    /// Runs the generator on `0^n`, streaming into `sink`.
    pub fn eval_into(
        &self,
        n: usize,
        sink: &mut dyn DigitSink,
        meter: &SpaceMeter,
    ) -> Result<(), GenError> {
        let mut input = UnaryInput::new(n, meter);
        self.program.run(&mut input, sink, meter)
    }

    /// `φ(n)`: the approximation with exactly `n` fractional digits.
    pub fn eval(&self, n: usize, meter: &SpaceMeter) -> Result<Dyadic, GenError> {
        let mut out = OutputTape::new(self.base, Some(n), meter);
        self.eval_into(n, &mut out, meter)?;
        self.finish(out, n)
    }

    /// Checks that a collected output has precision `n`.
    pub(crate) fn finish(&self, out: OutputTape<'_>, n: usize) -> Result<Dyadic, GenError> {
        let got = out.frac_len();
        if got != n {
            return Err(GenError::ShortOutput { expected: n, got });
        }
        Ok(out.into_dyadic())
    }

    /// `eval` on a throwaway meter.
    pub fn approx(&self, n: usize) -> Result<Dyadic, GenError> {
        self.eval(n, &SpaceMeter::new())
    }
}
