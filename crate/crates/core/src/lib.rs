//! Space-metered computable reals.
//!
//! Every machine in this crate runs against a [`meter::SpaceMeter`] that
//! records the peak number of work cells in use. Numbers are produced by
//! [`dyadic::DigitGenerator`]s, queried through tally and left-cut oracles,
//! and profiled for asymptotic space growth.

pub mod advdfa;
pub mod dyadic;
pub mod generators;
pub mod meter;
pub mod pairing;
pub mod profiler;
pub mod ratarith;
pub mod tally;
