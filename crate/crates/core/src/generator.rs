//! The greedy generator.
//!
//! After the start terms, each new term is the smallest unused domain element
//! that shares a factor with the term two back and is coprime to the previous
//! term. Candidates are found through per-prime cursors: for every prime `q`
//! of `a(n-2)` we walk the multiples of `q` from the smallest one not yet used,
//! and keep the minimum over all `q`.
//!
//! Cursors are split by parity (even and odd multiples of each odd prime).
//! The even terms are consumed roughly up to `0.96 n` while the odd composites
//! run ahead near `1.09 n`, so a single cursor per prime would spend most of
//! its time crossing the gap between the two frontiers.

use std::fmt;
use std::str::FromStr;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::frontier::{FrontierSnapshot, FrontierTracker};
use crate::numtheory::{gcd, SieveTable};

/// Hard ceiling on term count unless a config asks for less.
pub const DEFAULT_TERM_LIMIT: usize = 1_000_000_000;

/// Default cap on multiples inspected for one prime during a single step.
pub const DEFAULT_SCAN_BOUND: u64 = 100_000_000;

const MIN_SIEVE: u64 = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    AllPositive,
    OddOnly,
}

impl Domain {
    #[inline]
    pub fn contains(self, v: u64) -> bool {
        match self {
            Domain::AllPositive => v >= 1,
            Domain::OddOnly => v % 2 == 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Domain::AllPositive => "all",
            Domain::OddOnly => "odd",
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" | "all-positive" | "positive" => Ok(Domain::AllPositive),
            "odd" | "odd-only" => Ok(Domain::OddOnly),
            other => Err(Error::InvalidArgument(format!(
                "unsupported domain {other:?}; expected \"all\" or \"odd\""
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariantConfig {
    pub start_terms: Vec<u64>,
    pub domain: Domain,
    /// Maximum number of terms this configuration may generate.
    pub limit: usize,
}

impl Default for VariantConfig {
    fn default() -> Self {
        VariantConfig {
            start_terms: vec![1, 2, 3],
            domain: Domain::AllPositive,
            limit: DEFAULT_TERM_LIMIT,
        }
    }
}

impl VariantConfig {
    pub fn new(start_terms: Vec<u64>, domain: Domain) -> Result<Self> {
        let config = VariantConfig {
            start_terms,
            domain,
            limit: DEFAULT_TERM_LIMIT,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_limit(mut self, limit: usize) -> Self {
        self.limit = limit;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let s = &self.start_terms;
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if s.len() < 2 {
            return bad(format!("need at least two start terms, got {s:?}"));
        }
        if let Some(&v) = s.iter().find(|&&v| !self.domain.contains(v) || v == 0) {
            return bad(format!("start term {v} is not in the {} domain", self.domain));
        }
        for (i, v) in s.iter().enumerate() {
            if s[..i].contains(v) {
                return bad(format!("start term {v} is repeated"));
            }
        }
        if !s.contains(&1) {
            return bad("1 belongs to the domain, so it must be a start term".into());
        }
        if s[s.len() - 2] == 1 {
            return bad(format!(
                "the second-to-last start term is 1, so no later term can share a factor with it ({s:?})"
            ));
        }
        if s.len() == 3 && s[0] == 1 && gcd(s[1], s[2]) != 1 {
            return bad(format!("start 1,{},{} needs gcd({}, {}) = 1", s[1], s[2], s[1], s[2]));
        }
        if s.len() > self.limit {
            return bad(format!("{} start terms exceed the limit {}", s.len(), self.limit));
        }
        Ok(())
    }
}

/// A generated prefix with everything needed to extend it.
#[derive(Clone, Debug)]
pub struct SequenceState {
    config: VariantConfig,
    terms: Vec<u64>,
    /// value -> 1-based index, 0 when the value has not appeared
    index_of: Vec<u32>,
    used: BitSet,
    sieve: SieveTable,
    /// By prime ordinal: next candidate among the even and the odd multiples.
    cursors: Vec<[u64; 2]>,
    frontier: FrontierTracker,
    scan_bound: u64,
}

pub fn generate(config: &VariantConfig, n: usize) -> Result<SequenceState> {
    let mut state = SequenceState::new(config.clone())?;
    if n < config.start_terms.len() {
        return Err(Error::InvalidArgument(format!(
            "requested {n} terms but the configuration has {} start terms",
            config.start_terms.len()
        )));
    }
    state.reserve_for(n)?;
    state.extend_to(n)?;
    Ok(state)
}

impl SequenceState {
    /// A state holding just the start terms.
    pub fn new(config: VariantConfig) -> Result<Self> {
        config.validate()?;
        let max_start = *config.start_terms.iter().max().unwrap();
        let sieve = SieveTable::build(MIN_SIEVE.max(4 * max_start))?;
        let mut state = SequenceState {
            used: BitSet::with_capacity(sieve.limit() + 1),
            index_of: vec![0; sieve.limit() as usize + 1],
            config,
            terms: Vec::new(),
            sieve,
            cursors: Vec::new(),
            frontier: FrontierTracker::default(),
            scan_bound: DEFAULT_SCAN_BOUND,
        };
        for v in state.config.start_terms.clone() {
            state.push(v)?;
        }
        Ok(state)
    }

    pub fn set_scan_bound(&mut self, bound: u64) {
        self.scan_bound = bound;
    }

    /// Pre-sizes the value-space tables for a run of `n` terms.
    pub fn reserve_for(&mut self, n: usize) -> Result<()> {
        let want = (2 * n as u64).max(MIN_SIEVE);
        if want > self.sieve.limit() {
            self.grow_sieve(want)?;
        }
        Ok(())
    }

    pub fn config(&self) -> &VariantConfig {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    /// `a(n)`, 1-based.
    pub fn term(&self, n: usize) -> Option<u64> {
        n.checked_sub(1).and_then(|i| self.terms.get(i)).copied()
    }

    /// The index `n` with `a(n) = value`, if the value has been emitted.
    pub fn inverse_position(&self, value: u64) -> Option<usize> {
        match self.index_of.get(value as usize) {
            Some(&i) if i != 0 => Some(i as usize),
            _ => None,
        }
    }

    pub fn is_used(&self, value: u64) -> bool {
        self.used.contains(value)
    }

    /// Sieve covering every emitted value.
    pub fn sieve(&self) -> &SieveTable {
        &self.sieve
    }

    /// Streaming frontier snapshot as of the last term.
    pub fn frontier(&self) -> FrontierSnapshot {
        self.frontier.snapshot(self.len(), &self.used, &self.sieve)
    }

    pub fn heap_bytes(&self) -> usize {
        self.terms.capacity() * 8
            + self.index_of.capacity() * 4
            + self.used.heap_bytes()
            + self.cursors.capacity() * 16
            + (self.sieve.limit() as usize + 1) * 8
    }

    pub fn extend_to(&mut self, n: usize) -> Result<()> {
        if n > self.config.limit {
            return Err(Error::ResourceLimit(format!(
                "{n} terms requested, configuration limit is {}",
                self.config.limit
            )));
        }
        if n > u32::MAX as usize {
            return Err(Error::ResourceLimit(format!("{n} terms exceed 32-bit indexing")));
        }
        self.terms.reserve(n.saturating_sub(self.terms.len()));
        while self.terms.len() < n {
            self.next_term()?;
        }
        Ok(())
    }

    /// Computes, appends and returns the next term.
    pub fn next_term(&mut self) -> Result<u64> {
        let len = self.terms.len();
        if len < 2 {
            return Err(Error::InvalidArgument("need two terms before extending".into()));
        }
        if len >= self.config.limit {
            return Err(Error::ResourceLimit(format!(
                "configuration limit of {} terms reached",
                self.config.limit
            )));
        }
        let two_back = self.terms[len - 2];
        let prev = self.terms[len - 1];
        let shared = self.sieve.distinct_primes(two_back);
        let avoid = self.sieve.distinct_primes(prev);
        let allow_even = prev % 2 == 1 && self.config.domain == Domain::AllPositive;

        let mut best = u64::MAX;
        for &q in shared.as_slice() {
            let slot = self.sieve.pi_unchecked(q) as usize - 1;
            if slot >= self.cursors.len() {
                self.cursors.resize(slot + 1, [0, 0]);
            }
            for class in 0..2 {
                // class 0: even multiples, class 1: odd multiples
                if class == 0 && !allow_even {
                    continue;
                }
                if class == 1 && q == 2 {
                    continue;
                }
                let step = if q == 2 { 2 } else { 2 * q };
                let mut c = self.cursors[slot][class];
                if c == 0 {
                    c = if class == 0 && q != 2 { 2 * q } else { q };
                }
                while self.used.contains(c) {
                    c += step;
                }
                self.cursors[slot][class] = c;

                let mut v = c;
                let mut scanned = 0u64;
                while v < best {
                    if !self.used.contains(v) && avoid.coprime_to(v) {
                        best = v;
                        break;
                    }
                    v += step;
                    scanned += 1;
                    if scanned > self.scan_bound {
                        return Err(Error::InternalLimit(format!(
                            "scanned {scanned} multiples of {q} from {c} at n={} (a(n-2)={two_back}, a(n-1)={prev})",
                            len + 1
                        )));
                    }
                }
            }
        }
        if best == u64::MAX {
            return Err(Error::Inconsistent(format!(
                "no candidate for n={} after {two_back}, {prev}",
                len + 1
            )));
        }
        self.push(best)?;
        Ok(best)
    }

    fn grow_sieve(&mut self, at_least: u64) -> Result<()> {
        let target = at_least.max(2 * self.sieve.limit());
        let target = target.min(u32::MAX as u64 - 1);
        if target < at_least {
            return Err(Error::ResourceLimit(format!(
                "value {at_least} exceeds the 32-bit value space"
            )));
        }
        log::debug!("growing sieve from {} to {target}", self.sieve.limit());
        self.sieve = SieveTable::build(target)?;
        Ok(())
    }

    fn push(&mut self, v: u64) -> Result<()> {
        // headroom keeps the streaming odd-composite frontier inside the sieve
        if v + 64 > self.sieve.limit() {
            self.grow_sieve(2 * v + 64)?;
        }
        if v as usize >= self.index_of.len() {
            let size = (v as usize + 1).max(2 * self.index_of.len());
            self.index_of.resize(size, 0);
        }
        let len = self.terms.len();
        let is_c_type = v % 2 == 1
            && v > 1
            && !self.sieve.is_prime(v)
            && !(len >= 2 && self.sieve.is_prime(self.terms[len - 2]));
        self.terms.push(v);
        self.index_of[v as usize] = self.terms.len() as u32;
        self.used.insert(v);
        self.frontier.record(v, is_c_type, &self.used, &self.sieve);
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub index: usize,
    pub expected: u64,
    pub found: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub checked: usize,
    pub first_mismatch: Option<Mismatch>,
}

impl VerificationReport {
    pub fn matches(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Re-derives the first `upto` terms with a plain linear scan and compares.
pub fn verify_prefix(state: &SequenceState, upto: usize) -> Result<VerificationReport> {
    verify_terms(state.config(), state.terms(), upto)
}

/// Oracle for the fast generator: for each `n`, tries every unused domain
/// element from the bottom up and tests both gcd conditions directly.
pub fn verify_terms(config: &VariantConfig, terms: &[u64], upto: usize) -> Result<VerificationReport> {
    if upto > terms.len() {
        return Err(Error::InvalidArgument(format!(
            "cannot verify {upto} terms, only {} given",
            terms.len()
        )));
    }
    let start = &config.start_terms;
    let mut seen = BitSet::with_capacity(1024);
    let mut lowest = 1u64;
    for n in 1..=upto {
        let expected = if n <= start.len() {
            start[n - 1]
        } else {
            let (a2, a1) = (terms[n - 3], terms[n - 2]);
            while seen.contains(lowest) || !config.domain.contains(lowest) {
                lowest += 1;
            }
            let mut k = lowest;
            loop {
                if !seen.contains(k) && config.domain.contains(k) && gcd(k, a2) > 1 && gcd(k, a1) == 1 {
                    break k;
                }
                k += 1;
            }
        };
        let found = terms[n - 1];
        if found != expected {
            return Ok(VerificationReport {
                checked: n,
                first_mismatch: Some(Mismatch { index: n, expected, found }),
            });
        }
        seen.insert(found);
    }
    Ok(VerificationReport { checked: upto, first_mismatch: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_twenty() {
        let s = generate(&VariantConfig::default(), 20).unwrap();
        assert_eq!(
            s.terms(),
            &[1, 2, 3, 4, 9, 8, 15, 14, 5, 6, 25, 12, 35, 16, 7, 10, 21, 20, 27, 22]
        );
    }

    #[test]
    fn five_term_window_at_213() {
        let s = generate(&VariantConfig::default(), 217).unwrap();
        assert_eq!(&s.terms()[212..217], &[202, 275, 101, 198, 505]);
        assert_eq!(s.inverse_position(505), Some(217));
        assert_eq!(s.inverse_position(1), Some(1));
        assert_eq!(s.inverse_position(47), Some(101));
        assert_eq!(s.inverse_position(100_000), None);
    }

    #[test]
    fn greedy_steps_from_table() {
        // ..., 14, 5 -> 6 and 5, 6 -> 25
        let mut s = generate(&VariantConfig::default(), 9).unwrap();
        assert_eq!(&s.terms()[7..9], &[14, 5]);
        assert_eq!(s.next_term().unwrap(), 6);
        assert_eq!(s.next_term().unwrap(), 25);
    }

    #[test]
    fn odd_variant_prefix() {
        let c = VariantConfig::new(vec![1, 3, 5], Domain::OddOnly).unwrap();
        let s = generate(&c, 5).unwrap();
        assert_eq!(s.terms(), &[1, 3, 5, 9, 25]);
        assert!(verify_prefix(&generate(&c, 2000).unwrap(), 2000).unwrap().matches());
    }

    #[test]
    fn start_149_prefix() {
        let c = VariantConfig::new(vec![1, 4, 9], Domain::AllPositive).unwrap();
        let s = generate(&c, 8).unwrap();
        assert_eq!(s.terms(), &[1, 4, 9, 2, 3, 8, 15, 14]);
    }

    #[test]
    fn config_validation() {
        let e = |v: Vec<u64>, d| VariantConfig::new(v, d).is_err();
        assert!(e(vec![1, 4, 6], Domain::AllPositive));
        assert!(e(vec![1, 2, 2], Domain::AllPositive));
        assert!(e(vec![1, 3, 4], Domain::OddOnly));
        assert!(e(vec![1], Domain::AllPositive));
        assert!(e(vec![1, 2], Domain::AllPositive));
        assert!(e(vec![2, 3, 5], Domain::AllPositive));
        assert!(!e(vec![1, 3, 2], Domain::AllPositive));
        assert!(!e(vec![1, 2, 5], Domain::AllPositive));
        assert!("squarefree".parse::<Domain>().is_err());
        assert!(generate(&VariantConfig::default(), 2).is_err());
    }

    #[test]
    fn limit_is_enforced() {
        let c = VariantConfig::default().with_limit(50);
        let mut s = generate(&c, 50).unwrap();
        assert!(matches!(s.next_term(), Err(Error::ResourceLimit(_))));
        assert!(matches!(s.extend_to(51), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn scan_bound_surfaces_as_internal_limit() {
        let mut s = generate(&VariantConfig::default(), 1000).unwrap();
        s.set_scan_bound(0);
        let mut hit = false;
        for _ in 0..1000 {
            match s.next_term() {
                Ok(_) => {}
                Err(Error::InternalLimit(_)) => {
                    hit = true;
                    break;
                }
                Err(e) => panic!("{e}"),
            }
        }
        assert!(hit);
    }

    #[test]
    fn tampered_prefix_is_caught() {
        let s = generate(&VariantConfig::default(), 50).unwrap();
        let mut terms = s.terms().to_vec();
        terms[4] = 8;
        let r = verify_terms(s.config(), &terms, 50).unwrap();
        assert_eq!(r.first_mismatch, Some(Mismatch { index: 5, expected: 9, found: 8 }));
    }

    #[test]
    fn extension_is_deterministic() {
        let whole = generate(&VariantConfig::default(), 5000).unwrap();
        let mut stepped = generate(&VariantConfig::default(), 10).unwrap();
        for n in [11, 300, 301, 2500, 5000] {
            stepped.extend_to(n).unwrap();
        }
        assert_eq!(whole.terms(), stepped.terms());
    }
}
