//! Quasi-alternating prime series.
//!
//! Primes coprime to an even modulus `e` are signed by their residue class
//! modulo `e`, with equally many `+` and `-` classes. This crate streams
//! those series, tracks their exact partial sums, searches for zeros and
//! sign changes, composes block-flipped series from several sign
//! assignments, and classifies moduli by the zero witnesses found.

pub mod arith;
pub mod classify;
pub mod composed;
pub mod error;
pub mod forms;
pub mod series;
pub mod sieve;
pub mod store;

pub use classify::{
    candidate_set, classify, extend, Aggregate, CandidateReport, ClassificationVerdict,
    ClassifyConfig, CyclePlan, Outcome, SchedulePlan,
};
pub use composed::{compose, scan_composed, BlockSchedule, ComposedScanReport, ScheduleMode};
pub use error::{Error, Result};
pub use forms::{
    count_alternatives, enumerate_alternatives, enumerate_forms, identity_report, FormSpec, Sign,
    SignAssignment,
};
pub use series::{
    census, crossings, find_zeros, partial_sums, scan, table2_relations, Bounds, Crossing,
    ScanOptions, ScanReport, Scanner, SeriesTerm, Zero, ENGINE_VERSION,
};
pub use sieve::{primes_upto, stream, PrimeCursor, SieveConfig};
