//! Term types and the alternation structure seen from term 213 on.
//!
//! Every term gets one of five kinds. A term two places after a prime is a
//! geyser (`KappaP`) regardless of parity; otherwise primes are `PrimeType`,
//! even numbers `EvenType`, and the remaining odd composites `OddComposite`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::generator::SequenceState;
use crate::numtheory::{least_odd_prime_not_dividing, SieveTable};

/// Terms `1..=212` do not follow the alternation pattern.
pub const EXCEPTIONAL_PREFIX: usize = 212;
pub const HYPOTHESIS_A_START: usize = EXCEPTIONAL_PREFIX + 1;
/// Fewest geyser events from which a multiplier distribution is reported.
pub const MIN_KAPPA_EVENTS: u64 = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermKind {
    InitialOne,
    EvenType,
    PrimeType,
    KappaP,
    OddComposite,
}

impl TermKind {
    pub fn label(self) -> &'static str {
        match self {
            TermKind::InitialOne => "one",
            TermKind::EvenType => "E",
            TermKind::PrimeType => "p",
            TermKind::KappaP => "kp",
            TermKind::OddComposite => "C",
        }
    }
}

impl fmt::Display for TermKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TermClass {
    pub kind: TermKind,
    /// `a(i+2) / a(i)` for a geyser at `i+2`, when the division is exact.
    pub kappa: Option<u64>,
}

impl TermClass {
    const fn plain(kind: TermKind) -> Self {
        TermClass { kind, kappa: None }
    }
}

/// A geyser position whose value is not a multiple of the prime two back.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassAnomaly {
    pub index: usize,
    pub prime: u64,
    pub value: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassCounts {
    pub initial_one: usize,
    pub even: usize,
    pub prime: usize,
    pub kappa_p: usize,
    pub odd_composite: usize,
}

impl ClassCounts {
    pub fn total(&self) -> usize {
        self.initial_one + self.even + self.prime + self.kappa_p + self.odd_composite
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub classes: Vec<TermClass>,
    pub anomalies: Vec<ClassAnomaly>,
}

impl Classification {
    /// Class of `a(n)`, 1-based.
    pub fn get(&self, n: usize) -> Option<TermClass> {
        n.checked_sub(1).and_then(|i| self.classes.get(i)).copied()
    }

    pub fn counts(&self, upto: usize) -> ClassCounts {
        let mut c = ClassCounts::default();
        for class in &self.classes[..upto.min(self.classes.len())] {
            match class.kind {
                TermKind::InitialOne => c.initial_one += 1,
                TermKind::EvenType => c.even += 1,
                TermKind::PrimeType => c.prime += 1,
                TermKind::KappaP => c.kappa_p += 1,
                TermKind::OddComposite => c.odd_composite += 1,
            }
        }
        c
    }

    /// Multiplier counts over geysers with index greater than `after`.
    pub fn kappa_histogram(&self, after: usize) -> BTreeMap<u64, u64> {
        let mut hist = BTreeMap::new();
        for class in self.classes.iter().skip(after) {
            if let (TermKind::KappaP, Some(k)) = (class.kind, class.kappa) {
                *hist.entry(k).or_insert(0) += 1;
            }
        }
        hist
    }
}

pub fn classify_sequence(state: &SequenceState) -> Result<Classification> {
    classify_terms(state.terms(), state.sieve())
}

pub fn classify_terms(terms: &[u64], sieve: &SieveTable) -> Result<Classification> {
    if terms.is_empty() {
        return Err(Error::InvalidArgument("cannot classify an empty sequence".into()));
    }
    let mut classes = Vec::with_capacity(terms.len());
    let mut anomalies = Vec::new();
    for (i, &v) in terms.iter().enumerate() {
        let class = if v == 1 {
            TermClass::plain(TermKind::InitialOne)
        } else if sieve.is_prime(v) {
            TermClass::plain(TermKind::PrimeType)
        } else if i >= 2 && sieve.is_prime(terms[i - 2]) {
            let p = terms[i - 2];
            if v % p == 0 {
                TermClass { kind: TermKind::KappaP, kappa: Some(v / p) }
            } else {
                let index = i + 1;
                if index > EXCEPTIONAL_PREFIX {
                    log::warn!("geyser anomaly at {index}: a({index}) = {v} is not a multiple of {p}");
                }
                anomalies.push(ClassAnomaly { index, prime: p, value: v });
                TermClass::plain(TermKind::KappaP)
            }
        } else if v % 2 == 0 {
            TermClass::plain(TermKind::EvenType)
        } else {
            TermClass::plain(TermKind::OddComposite)
        };
        classes.push(class);
    }
    Ok(Classification { classes, anomalies })
}

/// What the alternation rule expected where it found something else.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expected {
    /// An ordinary even term must be followed by an odd composite.
    OddCompositeAfterEven,
    /// An odd composite must be followed by an even term.
    EvenAfterOddComposite,
    /// `2p, 2i+1, p, 2j, kp` with `k` the least odd prime not dividing `j`.
    FiveTermWindow,
    /// The window must be followed by an even term.
    EvenAfterWindow,
    /// Odd primes and 1 only occur inside a window.
    NoStrayOdd,
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Expected::OddCompositeAfterEven => "odd-composite-after-even",
            Expected::EvenAfterOddComposite => "even-after-odd-composite",
            Expected::FiveTermWindow => "five-term-window",
            Expected::EvenAfterWindow => "even-after-window",
            Expected::NoStrayOdd => "no-stray-odd",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub index: usize,
    pub expected: Expected,
    pub observed: Vec<u64>,
}

/// One `2p, 2i+1, p, 2j, kp` window; `index` is the position of `2p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FiveTermEvent {
    pub index: usize,
    pub prime: u64,
    pub j: u64,
    pub kappa: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisAReport {
    /// Inclusive, 1-based.
    pub checked_range: (usize, usize),
    pub violations: Vec<Violation>,
    pub events: Vec<FiveTermEvent>,
    pub kappa_histogram: BTreeMap<u64, u64>,
}

impl HypothesisAReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn five_term_events(&self) -> usize {
        self.events.len()
    }

    /// Indices of the two even terms (`2p` and `2j`) in each window.
    pub fn window_even_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.events.iter().flat_map(|e| [e.index, e.index + 3])
    }
}

pub fn check_hypothesis_a(state: &SequenceState, start: usize) -> Result<HypothesisAReport> {
    check_hypothesis_a_range(state, start, state.len())
}

fn is_odd_composite(v: u64, sieve: &SieveTable) -> bool {
    v % 2 == 1 && v > 1 && !sieve.is_prime(v)
}

pub fn check_hypothesis_a_range(state: &SequenceState, start: usize, end: usize) -> Result<HypothesisAReport> {
    if start == 0 || start + 5 > state.len() + 1 || end > state.len() || end < start + 4 {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= start, start + 4 <= end <= {} (got start {start}, end {end})",
            state.len()
        )));
    }
    let sieve = state.sieve();
    let a = |n: usize| state.terms()[n - 1];
    let mut violations = Vec::new();
    let mut events = Vec::new();
    let mut hist = BTreeMap::new();

    let mut pos = start;
    let mut last_checked = start;
    while pos <= end {
        last_checked = pos;
        let v = a(pos);
        if v % 2 == 0 {
            let half = v / 2;
            if half > 2 && sieve.is_prime(half) {
                if pos + 4 > end {
                    last_checked = pos - 1;
                    break;
                }
                let w = [v, a(pos + 1), a(pos + 2), a(pos + 3), a(pos + 4)];
                let p = half;
                let shape = is_odd_composite(w[1], sieve) && w[2] == p && w[3] % 2 == 0;
                let kappa = if shape { Some(least_odd_prime_not_dividing(w[3] / 2)) } else { None };
                match kappa {
                    Some(k) if k < p && w[4] == k * p => {
                        events.push(FiveTermEvent { index: pos, prime: p, j: w[3] / 2, kappa: k });
                        *hist.entry(k).or_insert(0) += 1;
                        last_checked = pos + 4;
                        if pos + 5 <= end && a(pos + 5) % 2 != 0 {
                            violations.push(Violation {
                                index: pos + 5,
                                expected: Expected::EvenAfterWindow,
                                observed: vec![w[4], a(pos + 5)],
                            });
                        }
                        pos += 5;
                    }
                    _ => {
                        violations.push(Violation {
                            index: pos,
                            expected: Expected::FiveTermWindow,
                            observed: w.to_vec(),
                        });
                        pos += 1;
                    }
                }
                continue;
            }
            if pos < end && !is_odd_composite(a(pos + 1), sieve) {
                violations.push(Violation {
                    index: pos + 1,
                    expected: Expected::OddCompositeAfterEven,
                    observed: vec![v, a(pos + 1)],
                });
            }
        } else if !is_odd_composite(v, sieve) {
            violations.push(Violation { index: pos, expected: Expected::NoStrayOdd, observed: vec![v] });
        } else if pos < end && a(pos + 1) % 2 != 0 {
            violations.push(Violation {
                index: pos + 1,
                expected: Expected::EvenAfterOddComposite,
                observed: vec![v, a(pos + 1)],
            });
        }
        pos += 1;
    }

    Ok(HypothesisAReport {
        checked_range: (start, last_checked),
        violations,
        events,
        kappa_histogram: hist,
    })
}

/// Empirical distribution of the geyser multiplier over odd primes.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Sigma(BTreeMap<u64, f64>);

impl Sigma {
    pub fn new(map: BTreeMap<u64, f64>) -> Result<Self> {
        for (&k, &s) in &map {
            if k < 3 || k % 2 == 0 || !(3..k).step_by(2).all(|d| d * d > k || k % d != 0) {
                return Err(Error::InvalidArgument(format!("multiplier {k} is not an odd prime")));
            }
            if !(s >= 0.0 && s.is_finite()) {
                return Err(Error::InvalidArgument(format!("sigma({k}) = {s} is not a probability")));
            }
        }
        let total: f64 = map.values().sum();
        if total > 1.0 + 1e-9 {
            return Err(Error::InvalidArgument(format!("sigma sums to {total} > 1")));
        }
        Ok(Sigma(map))
    }

    /// Empirical values: sigma(3) = 0.334, sigma(5) = 0.451, sigma(7) = 0.174.
    pub fn published() -> Self {
        Sigma(BTreeMap::from([(3, 0.334), (5, 0.451), (7, 0.174)]))
    }

    pub fn from_counts(counts: &BTreeMap<u64, u64>, min_events: u64) -> Result<Self> {
        let total: u64 = counts.values().sum();
        if total < min_events.max(1) {
            return Err(Error::InsufficientData(format!(
                "{total} geyser events, at least {} needed",
                min_events.max(1)
            )));
        }
        let map = counts.iter().map(|(&k, &c)| (k, c as f64 / total as f64)).collect();
        Sigma::new(map)
    }

    pub fn get(&self, kappa: u64) -> f64 {
        self.0.get(&kappa).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.0.iter().map(|(&k, &s)| (k, s))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.0.values().sum()
    }
}

impl FromStr for Sigma {
    type Err = Error;

    /// `3:0.334,5:0.451,7:0.174`
    fn from_str(s: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once(':')
                .ok_or_else(|| Error::InvalidArgument(format!("expected kappa:sigma, got {part:?}")))?;
            let k: u64 = k.trim().parse().map_err(|_| Error::InvalidArgument(format!("bad kappa {k:?}")))?;
            let v: f64 = v.trim().parse().map_err(|_| Error::InvalidArgument(format!("bad sigma {v:?}")))?;
            map.insert(k, v);
        }
        Sigma::new(map)
    }
}

/// Multiplier frequencies over geysers after the exceptional prefix.
pub fn kappa_distribution(state: &SequenceState) -> Result<Sigma> {
    let classes = classify_sequence(state)?;
    Sigma::from_counts(&classes.kappa_histogram(EXCEPTIONAL_PREFIX), MIN_KAPPA_EVENTS)
}

/// Classification plus the alternation report, computed once per snapshot.
#[derive(Clone, Debug)]
pub struct Annotation {
    pub classes: Classification,
    pub hypothesis: HypothesisAReport,
}

impl Annotation {
    pub fn new(state: &SequenceState) -> Result<Self> {
        let classes = classify_sequence(state)?;
        let hypothesis = check_hypothesis_a(state, HYPOTHESIS_A_START)?;
        Ok(Annotation { classes, hypothesis })
    }

    pub fn sigma(&self) -> Result<Sigma> {
        Sigma::from_counts(&self.classes.kappa_histogram(EXCEPTIONAL_PREFIX), MIN_KAPPA_EVENTS)
    }
}
