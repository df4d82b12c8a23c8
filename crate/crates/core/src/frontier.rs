//! Even and odd-composite frontiers.
//!
//! The even frontier at step `n` is `[m_E, M_E]` where `m_E` is the smallest
//! even number not yet used and `M_E` is two more than the largest even term
//! so far. The odd-composite frontier `[m_C, M_C]` is the same construction
//! over odd composite values: `M_C` is the smallest unused odd composite
//! above the largest type-C term (odd composites that are not the geyser two
//! steps after a prime). A geyser can sit right at the edge of the odd
//! frontier, in which case `M_C` steps over it.

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::generator::SequenceState;
use crate::numtheory::SieveTable;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrontierSnapshot {
    pub n: usize,
    pub even_low: u64,
    pub even_high: u64,
    pub odd_composite_low: u64,
    pub odd_composite_high: u64,
    /// Fraction of the even values in `[even_low, even_high]` already used.
    pub even_gap_fill: f64,
}

impl FrontierSnapshot {
    pub fn even_width(&self) -> u64 {
        self.even_high - self.even_low
    }

    pub fn odd_composite_width(&self) -> u64 {
        self.odd_composite_high - self.odd_composite_low
    }

    /// The even frontier lies strictly below the odd-composite one.
    pub fn separated(&self) -> bool {
        self.even_high < self.odd_composite_low
    }
}

/// Streaming frontier state, updated once per emitted term.
#[derive(Clone, Debug)]
pub(crate) struct FrontierTracker {
    even_low: u64,
    max_even: Option<u64>,
    evens_used: u64,
    odd_low: u64,
    max_c: Option<u64>,
}

impl Default for FrontierTracker {
    fn default() -> Self {
        FrontierTracker {
            even_low: 2,
            max_even: None,
            evens_used: 0,
            odd_low: 9,
            max_c: None,
        }
    }
}

impl FrontierTracker {
    /// `value` has already been inserted into `used`.
    pub(crate) fn record(&mut self, value: u64, is_c_type: bool, used: &BitSet, sieve: &SieveTable) {
        if value % 2 == 0 {
            self.evens_used += 1;
            self.max_even = Some(self.max_even.map_or(value, |m| m.max(value)));
            while used.contains(self.even_low) {
                self.even_low += 2;
            }
        } else {
            if is_c_type {
                self.max_c = Some(self.max_c.map_or(value, |m| m.max(value)));
            }
            if value == self.odd_low {
                self.odd_low = next_unused_odd_composite(self.odd_low, used, sieve);
            }
        }
    }

    pub(crate) fn snapshot(&self, n: usize, used: &BitSet, sieve: &SieveTable) -> FrontierSnapshot {
        let even_high = self.max_even.map_or(self.even_low, |m| (m + 2).max(self.even_low));
        let odd_high = self
            .max_c
            .map_or(self.odd_low, |m| next_unused_odd_composite(m + 2, used, sieve).max(self.odd_low));
        // every even below even_low is used
        let below = self.even_low / 2 - 1;
        let slots = (even_high - self.even_low) / 2 + 1;
        let inside = self.evens_used - below;
        FrontierSnapshot {
            n,
            even_low: self.even_low,
            even_high,
            odd_composite_low: self.odd_low,
            odd_composite_high: odd_high,
            even_gap_fill: inside as f64 / slots as f64,
        }
    }
}

fn next_unused_odd_composite(from: u64, used: &BitSet, sieve: &SieveTable) -> u64 {
    let mut v = from;
    while v < 9 || used.contains(v) || sieve.is_prime(v) {
        v += 2;
    }
    v
}

/// Recomputes the frontiers after term `at` directly from the prefix,
/// independent of the streaming tracker the generator maintains.
pub fn frontier_track(state: &SequenceState, at: usize) -> Result<FrontierSnapshot> {
    if at > state.len() {
        return Err(Error::InvalidArgument(format!(
            "frontier requested at {at} but only {} terms exist",
            state.len()
        )));
    }
    let terms = &state.terms()[..at];
    let sieve = state.sieve();

    let mut used = BitSet::with_capacity(terms.iter().copied().max().unwrap_or(0) + 3);
    for &v in terms {
        used.insert(v);
    }

    let mut even_low = 2;
    while used.contains(even_low) {
        even_low += 2;
    }
    let max_even = terms.iter().copied().filter(|v| v % 2 == 0).max();
    let even_high = max_even.map_or(even_low, |m| (m + 2).max(even_low));

    let mut odd_low = 9;
    while used.contains(odd_low) || sieve.is_prime(odd_low) {
        odd_low += 2;
    }
    let max_c = terms
        .iter()
        .enumerate()
        .filter(|&(i, &v)| {
            v % 2 == 1 && v > 1 && !sieve.is_prime(v) && !(i >= 2 && sieve.is_prime(terms[i - 2]))
        })
        .map(|(_, &v)| v)
        .max();
    let odd_high = max_c.map_or(odd_low, |m| {
        let mut v = m + 2;
        while used.contains(v) || sieve.is_prime(v) {
            v += 2;
        }
        v.max(odd_low)
    });

    let mut slots = 0u64;
    let mut filled = 0u64;
    let mut v = even_low;
    while v <= even_high {
        slots += 1;
        if used.contains(v) {
            filled += 1;
        }
        v += 2;
    }

    Ok(FrontierSnapshot {
        n: at,
        even_low,
        even_high,
        odd_composite_low: odd_low,
        odd_composite_high: odd_high,
        even_gap_fill: filled as f64 / slots as f64,
    })
}
