use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};

use super::{Footprint, SpaceMeter, Surface, TapeId};

/// An integer kept on a metered work tape in radix `radix`.
///
/// The tape is charged for the largest number of digits the register has
/// ever held (at least one digit once written, plus one sign cell for signed
/// registers). Arithmetic is expressed as "compute into this register":
/// the destination is the only storage a schoolbook routine needs beyond a
/// constant number of logarithmic counters.
pub struct Register<'m> {
    value: BigInt,
    radix: u32,
    signed: bool,
    footprint: Footprint<'m>,
}

impl fmt::Debug for Register<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Register")
            .field("value", &self.value)
            .field("radix", &self.radix)
            .field("cells", &self.footprint.extent())
            .finish()
    }
}

/// Number of radix-`radix` digits of `|v|`, with zero taking one digit.
pub(crate) fn digit_count(v: &BigInt, radix: u32) -> usize {
    let bits = v.magnitude().bits() as usize;
    if bits == 0 {
        return 1;
    }
    if radix.is_power_of_two() {
        let per = radix.trailing_zeros() as usize;
        bits.div_ceil(per)
    } else {
        v.magnitude().to_radix_be(radix).len()
    }
}

impl<'m> Register<'m> {
    /// A binary natural-number register with nothing written yet.
    pub fn new(meter: &'m SpaceMeter) -> Self {
        Self::with_radix(meter, 2)
    }

    pub fn with_radix(meter: &'m SpaceMeter, radix: u32) -> Self {
        assert!(radix >= 2, "radix must be at least 2");
        Register {
            value: BigInt::zero(),
            radix,
            signed: false,
            footprint: Footprint::new(meter, Surface::Work),
        }
    }

    /// A binary register that may hold negative values (one extra sign cell).
    pub fn signed(meter: &'m SpaceMeter) -> Self {
        let mut r = Self::new(meter);
        r.signed = true;
        r
    }

    /// A binary register initialised to `v`.
    pub fn from_value(meter: &'m SpaceMeter, v: impl Into<BigInt>) -> Self {
        let mut r = Self::new(meter);
        r.set(v);
        r
    }

    pub fn id(&self) -> TapeId {
        self.footprint.id()
    }

    pub fn meter(&self) -> &'m SpaceMeter {
        self.footprint.meter()
    }

    pub fn radix(&self) -> u32 {
        self.radix
    }

    /// Cells charged by this register so far.
    pub fn cells(&self) -> usize {
        self.footprint.extent()
    }

    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn magnitude(&self) -> &BigUint {
        self.value.magnitude()
    }

    pub fn to_biguint(&self) -> BigUint {
        self.value.magnitude().clone()
    }

    /// The value as `u64`, if it is non-negative and fits.
    pub fn to_u64(&self) -> Option<u64> {
        if self.value.sign() == Sign::Minus {
            return None;
        }
        u64::try_from(self.value.magnitude()).ok()
    }

    pub fn set(&mut self, v: impl Into<BigInt>) {
        let v = v.into();
        debug_assert!(
            self.signed || !v.is_negative(),
            "negative value in a natural register"
        );
        let cells = digit_count(&v, self.radix) + usize::from(self.signed);
        self.value = v;
        self.footprint.extend_to(cells);
    }

    pub fn copy_from(&mut self, other: &Register<'_>) {
        self.set(other.value.clone());
    }

    pub fn incr(&mut self) {
        let v = &self.value + 1u32;
        self.set(v);
    }

    pub fn decr(&mut self) {
        let v = &self.value - 1u32;
        self.set(v);
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    pub fn cmp_value(&self, other: &Register<'_>) -> Ordering {
        self.value.cmp(&other.value)
    }

    /// Radix digits, most significant first. Reading a register does not
    /// need extra storage: it is a left-to-right scan of its tape.
    pub fn digits_msd(&self) -> Vec<u8> {
        let mut d = self.value.magnitude().to_radix_be(self.radix);
        if d.is_empty() {
            d.push(0);
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charges_high_water_of_bit_length() {
        let meter = SpaceMeter::new();
        let mut r = Register::new(&meter);
        assert_eq!(meter.peak_cells(), 0);
        r.set(0u32);
        assert_eq!(r.cells(), 1);
        r.set(255u32);
        assert_eq!(r.cells(), 8);
        r.set(1u32);
        assert_eq!(r.cells(), 8);
        assert_eq!(meter.current_cells(), 8);
        drop(r);
        assert_eq!(meter.current_cells(), 0);
        assert_eq!(meter.peak_cells(), 8);
    }

    #[test]
    fn signed_register_has_sign_cell() {
        let meter = SpaceMeter::new();
        let mut r = Register::signed(&meter);
        r.set(-5);
        assert_eq!(r.cells(), 4);
    }

    #[test]
    fn radix_counts_digits() {
        let meter = SpaceMeter::new();
        let mut r = Register::with_radix(&meter, 3);
        r.set(26u32);
        assert_eq!(r.cells(), 3);
        r.set(27u32);
        assert_eq!(r.cells(), 4);
        assert_eq!(r.digits_msd(), vec![1, 0, 0, 0]);
        let mut h = Register::with_radix(&meter, 16);
        h.set(255u32);
        assert_eq!(h.cells(), 2);
    }
}
