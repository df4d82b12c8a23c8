//! Sieve-backed number theory: smallest prime factors, exact prime counting,
//! factorization, and the small helpers the generator and classifier share.

use crate::error::{Error, Result};

/// Default cap on sieve memory. Each entry costs 8 bytes (factor + count).
pub const DEFAULT_SIEVE_BUDGET_BYTES: u64 = 4 << 30;

const BYTES_PER_ENTRY: u64 = 8;

/// Smallest-prime-factor table together with the cumulative prime count,
/// covering every integer in `0..=limit`.
///
/// Immutable once built; share it freely between readers.
#[derive(Clone, Debug)]
pub struct SieveTable {
    limit: u64,
    spf: Vec<u32>,
    pi: Vec<u32>,
}

pub fn build_sieve(limit: u64) -> Result<SieveTable> {
    SieveTable::build(limit)
}

impl SieveTable {
    pub fn build(limit: u64) -> Result<Self> {
        Self::build_with_budget(limit, DEFAULT_SIEVE_BUDGET_BYTES)
    }

    pub fn build_with_budget(limit: u64, budget_bytes: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::InvalidArgument(format!(
                "sieve limit must be at least 2, got {limit}"
            )));
        }
        if limit >= u32::MAX as u64 {
            return Err(Error::ResourceLimit(format!(
                "sieve limit {limit} exceeds the 32-bit factor table"
            )));
        }
        let bytes = (limit + 1).saturating_mul(BYTES_PER_ENTRY);
        if bytes > budget_bytes {
            return Err(Error::ResourceLimit(format!(
                "a sieve up to {limit} needs {bytes} bytes, budget is {budget_bytes}"
            )));
        }

        let len = limit as usize + 1;
        let mut spf = vec![0u32; len];
        let mut i = 2usize;
        while i < len {
            if spf[i] == 0 {
                spf[i] = i as u32;
                if let Some(sq) = i.checked_mul(i) {
                    let mut j = sq;
                    while j < len {
                        if spf[j] == 0 {
                            spf[j] = i as u32;
                        }
                        j += i;
                    }
                }
            }
            i += 1;
        }

        let mut pi = vec![0u32; len];
        let mut count = 0u32;
        for (n, slot) in pi.iter_mut().enumerate() {
            if n >= 2 && spf[n] as usize == n {
                count += 1;
            }
            *slot = count;
        }

        Ok(SieveTable { limit, spf, pi })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    fn check(&self, n: u64) -> Result<usize> {
        if n > self.limit {
            Err(Error::OutOfRange {
                value: n,
                limit: self.limit,
                required: n,
            })
        } else {
            Ok(n as usize)
        }
    }

    /// Smallest prime factor of `n`; `None` for 0 and 1 or when out of range.
    pub fn smallest_prime_factor(&self, n: u64) -> Option<u64> {
        if n < 2 || n > self.limit {
            None
        } else {
            Some(self.spf[n as usize] as u64)
        }
    }

    /// Primality for `n <= limit`. Panics past the limit; use
    /// [`SieveTable::try_is_prime`] when the bound is not known.
    #[inline]
    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && self.spf[n as usize] as u64 == n
    }

    pub fn try_is_prime(&self, n: u64) -> Result<bool> {
        self.check(n)?;
        Ok(self.is_prime(n))
    }

    /// Number of primes `<= x`. Refuses to extrapolate past the table.
    pub fn prime_pi(&self, x: u64) -> Result<u64> {
        let i = self.check(x)?;
        Ok(self.pi[i] as u64)
    }

    #[inline]
    pub(crate) fn pi_unchecked(&self, x: u64) -> u64 {
        self.pi[x as usize] as u64
    }

    /// Prime factorization as `(prime, exponent)` pairs, primes increasing.
    /// `factorize(1)` is empty.
    pub fn factorize(&self, n: u64) -> Result<Vec<(u64, u32)>> {
        if n == 0 {
            return Err(Error::InvalidArgument("cannot factorize 0".into()));
        }
        self.check(n)?;
        let mut out: Vec<(u64, u32)> = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = self.spf[m as usize] as u64;
            m /= p;
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
        Ok(out)
    }

    /// Distinct prime divisors of `n` (which must be within range).
    pub fn distinct_primes(&self, n: u64) -> PrimeSet {
        let mut set = PrimeSet::default();
        let mut m = n;
        while m > 1 {
            let p = self.spf[m as usize] as u64;
            set.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        set
    }
}

/// Distinct primes of a 32-bit integer; at most nine exist.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PrimeSet {
    primes: [u64; 10],
    len: usize,
}

impl PrimeSet {
    fn push(&mut self, p: u64) {
        self.primes[self.len] = p;
        self.len += 1;
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.primes[..self.len]
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// True when no member divides `k`.
    #[inline]
    pub fn coprime_to(&self, k: u64) -> bool {
        self.as_slice().iter().all(|&p| k % p != 0)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn is_prime_small(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Odd primes 3, 5, 7, 11, ... by trial division. Only used for short scans.
pub fn odd_primes() -> impl Iterator<Item = u64> {
    (3u64..).step_by(2).filter(|&n| is_prime_small(n))
}

/// The smallest odd prime that does not divide `j`.
pub fn least_odd_prime_not_dividing(j: u64) -> u64 {
    debug_assert!(j >= 1);
    odd_primes()
        .find(|&k| j % k != 0)
        .expect("odd primes are unbounded")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trial_pi(x: u64) -> u64 {
        (0..=x).filter(|&n| is_prime_small(n)).count() as u64
    }

    #[test]
    fn spf_of_first_eleven() {
        let t = SieveTable::build(10).unwrap();
        let spf: Vec<Option<u64>> = (0..=10).map(|n| t.smallest_prime_factor(n)).collect();
        let want = [None, None, Some(2), Some(3), Some(2), Some(5), Some(2), Some(7), Some(2), Some(3), Some(2)];
        assert_eq!(spf, want);
        assert_eq!(t.prime_pi(10).unwrap(), 4);
    }

    #[test]
    fn rejects_tiny_and_oversized_limits() {
        assert!(matches!(SieveTable::build(1), Err(Error::InvalidArgument(_))));
        assert!(matches!(SieveTable::build(0), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            SieveTable::build_with_budget(1_000_000, 1024),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn pi_small_values() {
        let t = SieveTable::build(1000).unwrap();
        assert_eq!(t.prime_pi(0).unwrap(), 0);
        assert_eq!(t.prime_pi(1).unwrap(), 0);
        assert_eq!(t.prime_pi(2).unwrap(), 1);
        assert_eq!(t.prime_pi(1000).unwrap(), 168);
        assert_eq!(trial_pi(1000), 168);
    }

    #[test]
    fn pi_refuses_out_of_range() {
        let t = SieveTable::build(100).unwrap();
        match t.prime_pi(101) {
            Err(Error::OutOfRange { value, limit, .. }) => {
                assert_eq!((value, limit), (101, 100));
            }
            other => panic!("expected out-of-range, got {other:?}"),
        }
    }

    #[test]
    fn pi_of_a_million() {
        // Frozen from an independent trial-division count over 1..=10^6.
        let t = SieveTable::build(1_000_000).unwrap();
        assert_eq!(t.prime_pi(1_000_000).unwrap(), 78_498);
    }

    #[test]
    fn pi_agrees_with_trial_division_to_ten_thousand() {
        let t = SieveTable::build(10_000).unwrap();
        let mut count = 0;
        for x in 0..=10_000u64 {
            if is_prime_small(x) {
                count += 1;
            }
            assert_eq!(t.prime_pi(x).unwrap(), count, "pi({x})");
        }
    }

    #[test]
    fn sieve_invariants() {
        let t = SieveTable::build(20_000).unwrap();
        for n in 2..=20_000u64 {
            let p = t.smallest_prime_factor(n).unwrap();
            assert_eq!(n % p, 0);
            assert!(is_prime_small(p));
            assert_eq!(p == n, is_prime_small(n));
            let step = t.prime_pi(n).unwrap() - t.prime_pi(n - 1).unwrap();
            assert_eq!(step == 1, t.is_prime(n));
        }
    }

    #[test]
    fn factorize_examples() {
        let t = SieveTable::build(1000).unwrap();
        assert_eq!(t.factorize(198).unwrap(), vec![(2, 1), (3, 2), (11, 1)]);
        assert_eq!(t.factorize(2).unwrap(), vec![(2, 1)]);
        assert_eq!(t.factorize(329).unwrap(), vec![(7, 1), (47, 1)]);
        assert!(t.factorize(1).unwrap().is_empty());
        assert!(matches!(t.factorize(1001), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn distinct_primes_match_factorization() {
        let t = SieveTable::build(5000).unwrap();
        for n in 1..=5000u64 {
            let ps: Vec<u64> = t.factorize(n).unwrap().into_iter().map(|(p, _)| p).collect();
            assert_eq!(t.distinct_primes(n).as_slice(), ps.as_slice());
        }
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(14, 6), 2);
        assert_eq!(gcd(25, 35), 5);
        assert_eq!(gcd(505, 101), 101);
        assert_eq!(gcd(1, 97), 1);
    }

    #[test]
    fn kappa_selector_examples() {
        assert_eq!(least_odd_prime_not_dividing(1), 3);
        assert_eq!(least_odd_prime_not_dividing(99), 5);
        assert_eq!(least_odd_prime_not_dividing(105), 11);
        assert_eq!(least_odd_prime_not_dividing(15015), 17);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn factorization_recomposes(n in 1u64..=200_000) {
            thread_local! {
                static T: SieveTable = SieveTable::build(200_000).unwrap();
            }
            T.with(|t| {
                let f = t.factorize(n).unwrap();
                let prod: u64 = f.iter().map(|&(p, e)| p.pow(e)).product();
                prop_assert_eq!(prod, n);
                prop_assert!(f.windows(2).all(|w| w[0].0 < w[1].0));
                Ok(())
            })?;
        }

        #[test]
        fn kappa_selector_is_least(j in 1u64..10_000_000) {
            let k = least_odd_prime_not_dividing(j);
            prop_assert!(j % k != 0);
            for q in odd_primes().take_while(|&q| q < k) {
                prop_assert_eq!(j % q, 0);
            }
        }

        #[test]
        fn gcd_divides_both(a in 1u64..1_000_000, b in 1u64..1_000_000) {
            let g = gcd(a, b);
            prop_assert_eq!(a % g, 0);
            prop_assert_eq!(b % g, 0);
            prop_assert_eq!(gcd(a / g, b / g), 1);
        }
    }
}
