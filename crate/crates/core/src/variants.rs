//! Generalized start triples and merge detection.
//!
//! Two sequences built by the same greedy rule coincide from index `m - 1`
//! onwards exactly when their first `m - 2` terms form the same set and they
//! agree at `m - 1` and `m`: the rule only looks at the used set and the last
//! two terms.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::generator::{Domain, SequenceState, VariantConfig};
use crate::numtheory::gcd;

/// The `1, x, y` start over `domain`.
pub fn make_variant(x: u64, y: u64, domain: Domain) -> Result<VariantConfig> {
    if x <= 1 || y <= 1 {
        return Err(Error::InvalidArgument(format!("start 1,{x},{y} needs x > 1 and y > 1")));
    }
    if gcd(x, y) != 1 {
        return Err(Error::InvalidArgument(format!("start 1,{x},{y}: gcd({x}, {y}) = {}", gcd(x, y))));
    }
    VariantConfig::new(vec![1, x, y], domain)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MergeResult {
    pub merged: bool,
    /// Smallest `m` satisfying the merge criterion.
    pub merge_index: Option<usize>,
    /// First index from which the two agree through the horizon.
    pub agreement_from: Option<usize>,
    pub horizon: usize,
}

pub fn detect_merge(a: &SequenceState, b: &SequenceState, horizon: usize) -> Result<MergeResult> {
    if horizon > a.len() || horizon > b.len() {
        return Err(Error::InvalidArgument(format!(
            "horizon {horizon} exceeds generated lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    let (ta, tb) = (a.terms(), b.terms());

    // balance[v] = (#v in prefix of a) - (#v in prefix of b); `unequal`
    // counts values with a nonzero balance
    let mut balance: HashMap<u64, i32> = HashMap::new();
    let mut unequal = 0usize;
    let mut bump = |v: u64, d: i32, unequal: &mut usize| {
        let e = balance.entry(v).or_insert(0);
        let before = *e;
        *e += d;
        match (before == 0, *e == 0) {
            (true, false) => *unequal += 1,
            (false, true) => *unequal -= 1,
            _ => {}
        }
    };

    let mut merge_index = None;
    for m in 3..=horizon {
        // prefix through m - 2
        bump(ta[m - 3], 1, &mut unequal);
        bump(tb[m - 3], -1, &mut unequal);
        if unequal == 0 && ta[m - 2] == tb[m - 2] && ta[m - 1] == tb[m - 1] {
            merge_index = Some(m);
            break;
        }
    }

    let agreement_from = {
        let mut k = horizon;
        while k >= 1 && ta[k - 1] == tb[k - 1] {
            k -= 1;
        }
        (k < horizon).then_some(k + 1)
    };

    if let Some(m) = merge_index {
        if let Some(i) = (m - 1..=horizon).find(|&i| ta[i - 1] != tb[i - 1]) {
            return Err(Error::Inconsistent(format!(
                "merge criterion met at {m} but the sequences differ at {i}"
            )));
        }
    }

    Ok(MergeResult {
        merged: merge_index.is_some(),
        merge_index,
        agreement_from,
        horizon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::generate;

    #[test]
    fn named_variants() {
        assert_eq!(make_variant(3, 2, Domain::AllPositive).unwrap().start_terms, vec![1, 3, 2]);
        assert_eq!(make_variant(2, 5, Domain::AllPositive).unwrap().start_terms, vec![1, 2, 5]);
        assert!(make_variant(4, 6, Domain::AllPositive).is_err());
        assert!(make_variant(3, 5, Domain::OddOnly).is_ok());
        assert!(make_variant(3, 4, Domain::OddOnly).is_err());
        assert!(make_variant(1, 4, Domain::AllPositive).is_err());
    }

    #[test]
    fn merge_with_149() {
        let main = generate(&VariantConfig::default(), 100).unwrap();
        let other = generate(&make_variant(4, 9, Domain::AllPositive).unwrap(), 100).unwrap();
        let r = detect_merge(&main, &other, 100).unwrap();
        // {1,2,3,4,9} both ways after five terms, then 8, 15 in both
        assert_eq!(r.merge_index, Some(7));
        assert_eq!(r.agreement_from, Some(6));
        assert_eq!(r, detect_merge(&other, &main, 100).unwrap());
    }

    #[test]
    fn identical_merge_at_three() {
        let a = generate(&VariantConfig::default(), 50).unwrap();
        let r = detect_merge(&a, &a.clone(), 50).unwrap();
        assert_eq!(r.merge_index, Some(3));
        assert_eq!(r.agreement_from, Some(1));
    }

    #[test]
    fn horizon_must_fit() {
        let a = generate(&VariantConfig::default(), 50).unwrap();
        let b = generate(&VariantConfig::default(), 40).unwrap();
        assert!(detect_merge(&a, &b, 45).is_err());
    }
}
