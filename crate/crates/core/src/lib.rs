//! Combinatorial derivations `Δ(A) = {g : |gA ∩ A| = ∞}` of subsets of ℤ, ℤ²
//! and the free group F(a,b).
//!
//! Eventually periodic subsets of ℤ are handled exactly. Everything else is
//! handled through windowed multiplicity counts, and every such result
//! carries a [`Verdict::Evidence`] tag naming its window and threshold.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cert;
pub mod cover;
pub mod delta;
pub mod error;
pub mod group;
pub mod partition;
pub mod sequence;
pub mod set;
pub mod taxonomy;

pub use cert::Verdict;
pub use error::{Error, ParseError};
pub use group::{Element, Group, Letter, Window, Word};
pub use set::{parse_set_spec, FiniteSet, Generator, Periodic, SetRepr};

/// Default multiplicity threshold.
pub const DEFAULT_THRESHOLD: u64 = 20;
/// Default window radius in ℤ.
pub const DEFAULT_WINDOW_Z: u64 = 10_000;
/// Default window radius in F(a,b) and ℤ².
pub const DEFAULT_WINDOW_WORDS: u64 = 8;

/// Default window for a group.
pub fn default_window(group: Group) -> Window {
    match group {
        Group::Z => Window(DEFAULT_WINDOW_Z),
        _ => Window(DEFAULT_WINDOW_WORDS),
    }
}
