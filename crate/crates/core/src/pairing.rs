//! Integer square root and the Cantor pairing bijections `ℕ² → ℕ`,
//! `ℕ³ → ℕ`, with inverses that need only a floor square root.
//!
//! `pair(i, j) = (i+j)(i+j+1)/2 + j` and `pair3(n, i, b) = pair(pair(n, i), b)`.
//! Every intermediate value lives on a register of the caller's meter, so the
//! space of an inversion is a constant number of `O(log h)`-bit counters.

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::meter::{Register, SpaceMeter};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairingError {
    #[error("{0} does not decode to a triple ⟨n,i,b⟩ with 1 <= i <= n and b in {{0,1}}")]
    InvalidTriple(BigUint),
}

/// Which integer square root routine to run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum IsqrtPath {
    /// Increment a floor/ceiling pair until `floor² <= v < ceiling²`.
    /// Logarithmic space, but `√v` iterations.
    Incremental,
    /// Exponential then binary search. Logarithmic space and time.
    #[default]
    Fast,
}

/// A decoded tally index `⟨n, i, b⟩`: digit `i` of the `n`-digit
/// approximation is `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TallyTriple {
    pub n: u64,
    pub i: u64,
    pub b: u8,
}

impl std::fmt::Display for TallyTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.n, self.i, self.b)
    }
}

/// `floor(√v)` by the incremental floor/ceiling loop.
pub fn isqrt_incremental(v: &BigUint, meter: &SpaceMeter) -> BigUint {
    let mut floor = Register::new(meter);
    let mut ceiling = Register::new(meter);
    let mut number = Register::new(meter);
    let mut lower = Register::new(meter);
    let mut upper = Register::new(meter);
    floor.set(0u32);
    ceiling.set(1u32);
    number.set(BigInt::from(v.clone()));
    loop {
        lower.set(floor.value() * floor.value());
        upper.set(ceiling.value() * ceiling.value());
        if lower.value() <= number.value() && number.value() < upper.value() {
            return floor.to_biguint();
        }
        floor.incr();
        ceiling.incr();
    }
}

/// `floor(√v)` by doubling an upper bound and bisecting.
pub fn isqrt_fast(v: &BigUint, meter: &SpaceMeter) -> BigUint {
    let mut number = Register::new(meter);
    let mut lo = Register::new(meter);
    let mut hi = Register::new(meter);
    let mut mid = Register::new(meter);
    let mut square = Register::new(meter);
    number.set(BigInt::from(v.clone()));
    // invariant: lo² <= v < hi²
    lo.set(0u32);
    hi.set(1u32);
    loop {
        square.set(hi.value() * hi.value());
        if square.value() > number.value() {
            break;
        }
        lo.copy_from(&hi);
        hi.set(hi.value() << 1u32);
    }
    loop {
        mid.set(lo.value() + hi.value());
        mid.set(mid.value() >> 1u32);
        if mid.value() == lo.value() {
            return lo.to_biguint();
        }
        square.set(mid.value() * mid.value());
        if square.value() <= number.value() {
            lo.copy_from(&mid);
        } else {
            hi.copy_from(&mid);
        }
    }
}

pub fn isqrt(v: &BigUint, meter: &SpaceMeter) -> BigUint {
    isqrt_with(v, IsqrtPath::Fast, meter)
}

pub fn isqrt_with(v: &BigUint, path: IsqrtPath, meter: &SpaceMeter) -> BigUint {
    match path {
        IsqrtPath::Incremental => isqrt_incremental(v, meter),
        IsqrtPath::Fast => isqrt_fast(v, meter),
    }
}

pub fn pair(i: &BigUint, j: &BigUint, meter: &SpaceMeter) -> BigUint {
    let mut w = Register::new(meter);
    let mut t = Register::new(meter);
    w.set(BigInt::from(i + j));
    t.set(w.value() * (w.value() + 1u32));
    t.set((t.value() >> 1u32) + BigInt::from(j.clone()));
    t.to_biguint()
}

/// Inverse of [`pair`]: with `w = ⌊(√(8h+1) − 1)/2⌋` and `Δ(w) = w(w+1)/2`,
/// `j = h − Δ(w)` and `i = w − j`.
pub fn unpair_with(h: &BigUint, path: IsqrtPath, meter: &SpaceMeter) -> (BigUint, BigUint) {
    let mut t = Register::new(meter);
    t.set(BigInt::from(h.clone()) * 8u32 + 1u32);
    let root = isqrt_with(t.magnitude(), path, meter);
    let mut w = Register::new(meter);
    w.set((BigInt::from(root) - 1u32) >> 1u32);
    let mut tri = Register::new(meter);
    tri.set(w.value() * (w.value() + 1u32));
    tri.set(tri.value() >> 1u32);
    let mut j = Register::new(meter);
    j.set(BigInt::from(h.clone()) - tri.value());
    let mut i = Register::new(meter);
    i.set(w.value() - j.value());
    (i.to_biguint(), j.to_biguint())
}

pub fn unpair(h: &BigUint, meter: &SpaceMeter) -> (BigUint, BigUint) {
    unpair_with(h, IsqrtPath::Fast, meter)
}

pub fn pair3(n: &BigUint, i: &BigUint, b: &BigUint, meter: &SpaceMeter) -> BigUint {
    let inner = pair(n, i, meter);
    pair(&inner, b, meter)
}

/// Decodes `h = ⟨⟨n, i⟩, b⟩` without validation by inverting the pairing twice.
pub fn unpair3_raw(h: &BigUint, meter: &SpaceMeter) -> (BigUint, BigUint, BigUint) {
    let (inner, b) = unpair(h, meter);
    let (n, i) = unpair(&inner, meter);
    (n, i, b)
}

pub fn encode_triple(t: TallyTriple, meter: &SpaceMeter) -> BigUint {
    pair3(&t.n.into(), &t.i.into(), &t.b.into(), meter)
}

/// Decodes `h` and checks `1 <= i <= n`, `b ∈ {0, 1}`.
pub fn unpair3(h: &BigUint, meter: &SpaceMeter) -> Result<TallyTriple, PairingError> {
    let (n, i, b) = unpair3_raw(h, meter);
    let invalid = || PairingError::InvalidTriple(h.clone());
    if i.is_zero() || i > n || b > BigUint::from(1u32) {
        return Err(invalid());
    }
    Ok(TallyTriple {
        n: n.to_u64().ok_or_else(invalid)?,
        i: i.to_u64().ok_or_else(invalid)?,
        b: b.to_u8().ok_or_else(invalid)?,
    })
}

/// Convenience wrappers on a throwaway meter.
pub mod plain {
    use super::*;

    pub fn pair(i: u64, j: u64) -> BigUint {
        super::pair(&i.into(), &j.into(), &SpaceMeter::new())
    }

    pub fn unpair(h: u64) -> (u64, u64) {
        let (i, j) = super::unpair(&h.into(), &SpaceMeter::new());
        (i.to_u64().unwrap(), j.to_u64().unwrap())
    }

    pub fn pair3(n: u64, i: u64, b: u64) -> u64 {
        super::pair3(&n.into(), &i.into(), &b.into(), &SpaceMeter::new())
            .to_u64()
            .expect("fits u64")
    }
}
