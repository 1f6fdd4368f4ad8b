use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

use super::{check_base, GenError};
use crate::dyadic::UnaryProgram;
use crate::meter::{DigitSink, Flow, InputHead, InputSymbol, OutSym, Register, SpaceMeter};
use crate::ratarith::long_division;

/// A decision procedure for a set of positive integers. Any storage that
/// grows with `p` must live on registers of `meter`.
pub trait Membership: Send + Sync {
    fn contains(&self, p: &Register<'_>, meter: &SpaceMeter) -> bool;

    fn label(&self) -> String {
        "set".into()
    }
}

/// Trial division by `d = 2, 3, …` while `d² <= p`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Primes;

impl Membership for Primes {
    fn contains(&self, p: &Register<'_>, meter: &SpaceMeter) -> bool {
        let mut d = Register::new(meter);
        let mut square = Register::new(meter);
        d.set(2u32);
        if p.magnitude() < d.magnitude() {
            return false;
        }
        loop {
            square.set(d.value() * d.value());
            if square.cmp_value(p).is_gt() {
                return true;
            }
            let (_, rem) = long_division(p.magnitude(), d.magnitude(), meter).expect("d >= 2");
            if rem.is_zero() {
                return false;
            }
            d.incr();
        }
    }

    fn label(&self) -> String {
        "primes".into()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EmptySet;

impl Membership for EmptySet {
    fn contains(&self, _: &Register<'_>, _: &SpaceMeter) -> bool {
        false
    }

    fn label(&self) -> String {
        "empty".into()
    }
}

/// A finite set, held in the finite control.
#[derive(Debug, Clone, Default)]
pub struct FiniteSet(pub BTreeSet<u64>);

impl FiniteSet {
    pub fn new(items: impl IntoIterator<Item = u64>) -> Self {
        FiniteSet(items.into_iter().collect())
    }
}

impl Membership for FiniteSet {
    fn contains(&self, p: &Register<'_>, _: &SpaceMeter) -> bool {
        p.to_u64().is_some_and(|v| self.0.contains(&v))
    }

    fn label(&self) -> String {
        format!("{:?}", self.0)
    }
}

/// An unmetered predicate, for tests and oracles.
#[derive(Clone)]
pub struct PredicateSet {
    label: String,
    test: Arc<dyn Fn(&BigUint) -> bool + Send + Sync>,
}

impl PredicateSet {
    pub fn new(label: impl Into<String>, test: impl Fn(&BigUint) -> bool + Send + Sync + 'static) -> Self {
        PredicateSet {
            label: label.into(),
            test: Arc::new(test),
        }
    }
}

impl fmt::Debug for PredicateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("PredicateSet").field(&self.label).finish()
    }
}

impl Membership for PredicateSet {
    fn contains(&self, p: &Register<'_>, _: &SpaceMeter) -> bool {
        (self.test)(p.magnitude())
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

/// Emits `Σ_{p ∈ A} base^-p`: digit `p` is 1 exactly when `p ∈ A`.
#[derive(Clone)]
pub struct IndicatorProgram {
    set: Arc<dyn Membership>,
    base: u32,
}

impl fmt::Debug for IndicatorProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IndicatorProgram")
            .field("set", &self.set.label())
            .field("base", &self.base)
            .finish()
    }
}

impl IndicatorProgram {
    pub fn new(set: Arc<dyn Membership>, base: u32) -> Result<Self, GenError> {
        check_base(base)?;
        Ok(IndicatorProgram { set, base })
    }
}

impl UnaryProgram for IndicatorProgram {
    fn base(&self) -> u32 {
        self.base
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
        let mut p = Register::new(meter);
        p.set(0u32);
        while input.scan() == InputSymbol::Zero {
            p.incr();
            let digit = u8::from(self.set.contains(&p, meter));
            if out.emit(OutSym::Digit(digit)) == Flow::Stop {
                return Ok(());
            }
            input.advance();
        }
        Ok(())
    }
}
