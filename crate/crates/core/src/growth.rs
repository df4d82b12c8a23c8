//! Growth curves for the term types.
//!
//! Even terms sit near `f_E(x)`, the solution of `y + pi(y/2) = x`. Type-C
//! terms sit near `f_C(x)`, the solution of
//!
//! ```text
//! y - 2 pi(y) - 2 sum_k sigma(k) pi(y / k) = x - 3 pi(f_E(x) / 2)
//! ```
//!
//! with `k` over odd primes `<= sqrt(y)`. Primes follow `f_E / 2` and geysers
//! with multiplier `k` follow `k f_E / 2`.
//!
//! Both equations are solved over the integers: the answer is the smallest
//! `y` whose left side reaches the right side. The `f_E` side is strictly
//! increasing so a bisection is exact. The `f_C` side dips by one at every
//! prime, so it is bisected through its running maximum, which is monotone
//! and has the same first crossing.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use crate::classify::{Annotation, Sigma, TermKind, HYPOTHESIS_A_START};
use crate::error::{Error, Result};
use crate::generator::SequenceState;
use crate::numtheory::SieveTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Curve {
    Even,
    Prime,
    OddComposite,
    KappaP(u64),
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Curve::Even => f.write_str("fE"),
            Curve::Prime => f.write_str("fp"),
            Curve::OddComposite => f.write_str("fC"),
            Curve::KappaP(k) => write!(f, "f{k}p"),
        }
    }
}

impl FromStr for Curve {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fE" | "E" | "even" => Ok(Curve::Even),
            "fp" | "p" | "prime" => Ok(Curve::Prime),
            "fC" | "C" | "odd-composite" => Ok(Curve::OddComposite),
            other => {
                let k = other
                    .strip_prefix('f')
                    .unwrap_or(other)
                    .strip_suffix('p')
                    .and_then(|k| k.parse::<u64>().ok())
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown curve {other:?}")))?;
                Ok(Curve::KappaP(k))
            }
        }
    }
}

pub struct GrowthModel {
    sieve: SieveTable,
    sigma: Sigma,
    /// Running maximum of the f_C left side over `0..=limit`.
    envelope: Vec<f64>,
}

impl GrowthModel {
    pub fn new(sieve: SieveTable, sigma: Sigma) -> Self {
        let limit = sieve.limit();
        let kappas: Vec<(u64, f64)> = sigma.iter().collect();
        let mut envelope = Vec::with_capacity(limit as usize + 1);
        let mut best = f64::NEG_INFINITY;
        for y in 0..=limit {
            let mut lhs = y as f64 - 2.0 * sieve.pi_unchecked(y) as f64;
            for &(k, s) in &kappas {
                if k * k <= y {
                    lhs -= 2.0 * s * sieve.pi_unchecked(y / k) as f64;
                }
            }
            best = best.max(lhs);
            envelope.push(best);
        }
        GrowthModel { sieve, sigma, envelope }
    }

    /// A model whose sieve covers every curve value for `x <= max_x`.
    pub fn for_range(max_x: u64, sigma: Sigma) -> Result<Self> {
        let sieve = SieveTable::build(2 * max_x.max(64) + 1024)?;
        Ok(Self::new(sieve, sigma))
    }

    pub fn sieve(&self) -> &SieveTable {
        &self.sieve
    }

    pub fn sigma(&self) -> &Sigma {
        &self.sigma
    }

    fn even_lhs(&self, y: u64) -> u64 {
        y + self.sieve.pi_unchecked(y / 2)
    }

    /// Smallest `y` with `y + pi(y/2) >= x`.
    pub fn solve_fe(&self, x: u64) -> Result<u64> {
        if x == 0 {
            return Err(Error::InvalidArgument("curves are defined for x >= 1".into()));
        }
        if x / 2 > self.sieve.limit() {
            return Err(Error::OutOfRange { value: x / 2, limit: self.sieve.limit(), required: x / 2 });
        }
        let (mut lo, mut hi) = (1u64, x);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.even_lhs(mid) >= x {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(lo)
    }

    /// Right side of the f_C equation.
    fn odd_rhs(&self, x: u64) -> Result<i64> {
        let fe = self.solve_fe(x)?;
        Ok(x as i64 - 3 * self.sieve.pi_unchecked(fe / 2) as i64)
    }

    /// Smallest `y >= 1` whose f_C left side reaches the right side at `x`.
    pub fn solve_fc(&self, x: u64) -> Result<u64> {
        let rhs = self.odd_rhs(x)? as f64;
        let limit = self.sieve.limit();
        if self.envelope[limit as usize] < rhs {
            return Err(Error::OutOfRange {
                value: x,
                limit,
                required: (2 * limit).max(2 * x),
            });
        }
        let (mut lo, mut hi) = (1u64, limit);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.envelope[mid as usize] >= rhs {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(lo)
    }

    pub fn curve_value(&self, curve: Curve, x: u64) -> Result<u64> {
        match curve {
            Curve::Even => self.solve_fe(x),
            Curve::Prime => Ok(self.solve_fe(x)? / 2),
            Curve::KappaP(k) => Ok(k * self.solve_fe(x)? / 2),
            Curve::OddComposite => self.solve_fc(x),
        }
    }
}

/// `1/2 + 2 sum sigma(k) / k` over the multipliers present.
pub fn alpha_estimate(sigma: &Sigma) -> f64 {
    0.5 + 2.0 * sigma.iter().map(|(k, s)| s / k as f64).sum::<f64>()
}

/// Which terms a residual series covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermFilter {
    /// Even terms outside the five-term windows.
    NormalEven,
    /// The `2p` and `2j` terms of each window.
    FiveTermEven,
    OddComposite,
    Prime,
    KappaP(u64),
}

impl TermFilter {
    pub fn default_curve(self) -> Curve {
        match self {
            TermFilter::NormalEven | TermFilter::FiveTermEven => Curve::Even,
            TermFilter::OddComposite => Curve::OddComposite,
            TermFilter::Prime => Curve::Prime,
            TermFilter::KappaP(k) => Curve::KappaP(k),
        }
    }
}

impl FromStr for TermFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "normal-even" => Ok(TermFilter::NormalEven),
            "five-term-even" => Ok(TermFilter::FiveTermEven),
            "odd-composite" => Ok(TermFilter::OddComposite),
            "prime" => Ok(TermFilter::Prime),
            other => other
                .strip_prefix("kappa-")
                .and_then(|k| k.parse().ok())
                .map(TermFilter::KappaP)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown term filter {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResidualPoint {
    pub n: usize,
    pub value: u64,
    pub curve: u64,
    pub residual: i64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualSummary {
    pub count: usize,
    pub max_abs: u64,
    pub max_abs_at: usize,
    /// Quantiles of `|residual| / sqrt(n)`.
    pub scaled_median: f64,
    pub scaled_p90: f64,
    pub scaled_p99: f64,
    pub scaled_max: f64,
}

#[derive(Clone, Debug)]
pub struct ResidualSeries {
    pub curve: Curve,
    pub filter: TermFilter,
    pub points: Vec<ResidualPoint>,
    pub summary: ResidualSummary,
}

/// Residuals `a(n) - curve(n)` for the terms matching `filter` with `n` in
/// `range`. Indices before 213 are outside the model and always skipped.
pub fn residuals(
    state: &SequenceState,
    annotation: &Annotation,
    model: &GrowthModel,
    curve: Curve,
    filter: TermFilter,
    range: RangeInclusive<usize>,
) -> Result<ResidualSeries> {
    let lo = (*range.start()).max(HYPOTHESIS_A_START);
    let hi = (*range.end()).min(state.len());
    let mut window_even = vec![false; state.len() + 1];
    for i in annotation.hypothesis.window_even_indices() {
        if i <= state.len() {
            window_even[i] = true;
        }
    }

    let mut points = Vec::new();
    for n in lo..=hi {
        let class = annotation.classes.classes[n - 1];
        let keep = match filter {
            TermFilter::NormalEven => class.kind == TermKind::EvenType && !window_even[n],
            TermFilter::FiveTermEven => window_even[n],
            TermFilter::OddComposite => class.kind == TermKind::OddComposite,
            TermFilter::Prime => class.kind == TermKind::PrimeType,
            TermFilter::KappaP(k) => class.kind == TermKind::KappaP && class.kappa == Some(k),
        };
        if !keep {
            continue;
        }
        let value = state.terms()[n - 1];
        let c = model.curve_value(curve, n as u64)?;
        points.push(ResidualPoint { n, value, curve: c, residual: value as i64 - c as i64 });
    }
    if points.is_empty() {
        return Err(Error::InsufficientData(format!("no {filter:?} terms in {lo}..={hi}")));
    }
    let summary = summarize(&points);
    Ok(ResidualSeries { curve, filter, points, summary })
}

fn summarize(points: &[ResidualPoint]) -> ResidualSummary {
    let (max_abs, max_abs_at) = points
        .iter()
        .map(|p| (p.residual.unsigned_abs(), p.n))
        .max_by_key(|&(r, n)| (r, std::cmp::Reverse(n)))
        .unwrap();
    let mut scaled: Vec<f64> = points
        .iter()
        .map(|p| p.residual.unsigned_abs() as f64 / (p.n as f64).sqrt())
        .collect();
    scaled.sort_by(f64::total_cmp);
    let q = |f: f64| scaled[((scaled.len() - 1) as f64 * f).round() as usize];
    ResidualSummary {
        count: points.len(),
        max_abs,
        max_abs_at,
        scaled_median: q(0.5),
        scaled_p90: q(0.9),
        scaled_p99: q(0.99),
        scaled_max: *scaled.last().unwrap(),
    }
}
