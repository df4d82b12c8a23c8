//! Orbits of `n -> a(n)`: fixed points, finite cycles, and bounded traces of
//! orbits that leave the generated prefix.

use crate::error::{Error, Result};
use crate::generator::SequenceState;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitStatus {
    FixedPoint,
    Cycle { length: usize, min_element: u64 },
    EscapedHorizon,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    pub start: u64,
    /// `start, a(start), a(a(start)), ...`; a closed cycle is listed once.
    pub forward_path: Vec<u64>,
    /// `start, a^-1(start), ...`
    pub backward_path: Vec<u64>,
    pub status: OrbitStatus,
    pub horizon: usize,
    pub note: Option<String>,
}

impl OrbitReport {
    /// Orbit points with the smallest value seen at offset 0; backward steps
    /// get negative offsets.
    pub fn plot_points(&self) -> Vec<(i64, u64)> {
        let mut seq: Vec<u64> = match self.status {
            OrbitStatus::EscapedHorizon => self
                .backward_path
                .iter()
                .skip(1)
                .rev()
                .chain(self.forward_path.iter())
                .copied()
                .collect(),
            _ => self.forward_path.clone(),
        };
        if seq.is_empty() {
            seq.push(self.start);
        }
        let zero = seq
            .iter()
            .enumerate()
            .min_by_key(|&(_, v)| *v)
            .map(|(i, _)| i)
            .unwrap();
        seq.iter()
            .enumerate()
            .map(|(i, &v)| (i as i64 - zero as i64, v))
            .collect()
    }
}

fn forward(state: &SequenceState, v: u64, horizon: usize) -> Option<u64> {
    if v as usize > horizon {
        None
    } else {
        state.term(v as usize)
    }
}

fn backward(state: &SequenceState, v: u64, horizon: usize) -> Option<u64> {
    if v as usize > horizon {
        return None;
    }
    state.inverse_position(v).map(|i| i as u64)
}

/// Follows `start` both ways until the orbit closes or leaves the horizon.
/// A horizon past the generated prefix is clamped, and the report says so.
pub fn trace_orbit(state: &SequenceState, start: u64, horizon: usize) -> Result<OrbitReport> {
    if start == 0 {
        return Err(Error::InvalidArgument("orbits start at a positive integer".into()));
    }
    let mut note = None;
    let mut horizon = horizon;
    if horizon > state.len() {
        note = Some(format!(
            "horizon {horizon} clamped to the {} generated terms",
            state.len()
        ));
        horizon = state.len();
    }
    if start as usize > horizon {
        return Ok(OrbitReport {
            start,
            forward_path: vec![start],
            backward_path: vec![start],
            status: OrbitStatus::EscapedHorizon,
            horizon,
            note: Some(format!("start {start} is beyond horizon {horizon}")),
        });
    }

    let mut forward_path = vec![start];
    let mut v = start;
    let mut closed = false;
    while let Some(next) = forward(state, v, horizon) {
        if next == start {
            closed = true;
            break;
        }
        forward_path.push(next);
        v = next;
    }

    let mut backward_path = vec![start];
    let mut v = start;
    while let Some(prev) = backward(state, v, horizon) {
        if prev == start {
            break;
        }
        backward_path.push(prev);
        v = prev;
    }

    let status = if closed {
        if forward_path.len() == 1 {
            OrbitStatus::FixedPoint
        } else {
            OrbitStatus::Cycle {
                length: forward_path.len(),
                min_element: *forward_path.iter().min().unwrap(),
            }
        }
    } else {
        OrbitStatus::EscapedHorizon
    };
    Ok(OrbitReport { start, forward_path, backward_path, status, horizon, note })
}

/// All `n <= limit` with `a(n) = n`.
pub fn find_fixed_points(state: &SequenceState, limit: usize) -> Result<Vec<u64>> {
    if limit > state.len() {
        return Err(Error::InvalidArgument(format!(
            "limit {limit} exceeds the {} generated terms",
            state.len()
        )));
    }
    Ok(state.terms()[..limit]
        .iter()
        .enumerate()
        .filter(|&(i, &v)| v == i as u64 + 1)
        .map(|(_, &v)| v)
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleRecord {
    pub min_element: u64,
    /// Starting at the minimum, in forward order.
    pub elements: Vec<u64>,
}

impl CycleRecord {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleCensus {
    /// Keyed by minimum element, ascending; fixed points included.
    pub cycles: Vec<CycleRecord>,
    /// Starts `<= search_limit` whose orbit left the prefix, ascending.
    pub unresolved: Vec<u64>,
    pub search_limit: usize,
}

impl CycleCensus {
    pub fn fixed_points(&self) -> impl Iterator<Item = u64> + '_ {
        self.cycles.iter().filter(|c| c.len() == 1).map(|c| c.min_element)
    }

    pub fn nontrivial(&self) -> impl Iterator<Item = &CycleRecord> {
        self.cycles.iter().filter(|c| c.len() > 1)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mark {
    Unseen,
    Cycle,
    Open,
}

/// Every finite cycle with minimum `<= search_limit` that closes inside the
/// generated prefix. Each value is walked at most once overall.
pub fn enumerate_cycles(state: &SequenceState, search_limit: usize) -> Result<CycleCensus> {
    if search_limit > state.len() {
        return Err(Error::InvalidArgument(format!(
            "search limit {search_limit} exceeds the {} generated terms",
            state.len()
        )));
    }
    let len = state.len();
    let mut mark = vec![Mark::Unseen; len + 1];
    let mut cycles = Vec::new();
    let mut unresolved = Vec::new();
    let mut path = Vec::new();

    for s in 1..=search_limit as u64 {
        match mark[s as usize] {
            Mark::Cycle => continue,
            Mark::Open => {
                unresolved.push(s);
                continue;
            }
            Mark::Unseen => {}
        }
        path.clear();
        let mut v = s;
        let outcome = loop {
            path.push(v);
            let next = state.term(v as usize).expect("v <= len");
            if next == s {
                break Mark::Cycle;
            }
            if next as usize > len || mark[next as usize] == Mark::Open {
                break Mark::Open;
            }
            // an orbit is a single path, so meeting a settled cycle value is impossible
            debug_assert!(mark[next as usize] != Mark::Cycle);
            v = next;
        };
        for &p in &path {
            mark[p as usize] = outcome;
        }
        if outcome == Mark::Cycle {
            // s is the first value of this cycle reached, hence its minimum
            cycles.push(CycleRecord { min_element: s, elements: path.clone() });
        } else {
            unresolved.push(s);
        }
    }
    Ok(CycleCensus { cycles, unresolved, search_limit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{generate, VariantConfig};

    fn state(n: usize) -> SequenceState {
        generate(&VariantConfig::default(), n).unwrap()
    }

    #[test]
    fn six_is_on_a_five_cycle() {
        let s = state(1000);
        let r = trace_orbit(&s, 6, 1000).unwrap();
        assert_eq!(r.status, OrbitStatus::Cycle { length: 5, min_element: 6 });
        assert_eq!(r.forward_path, vec![6, 8, 14, 16, 10]);
        for &v in &r.forward_path {
            let mut w = v;
            for _ in 0..5 {
                w = s.term(w as usize).unwrap();
            }
            assert_eq!(w, v);
        }
    }

    #[test]
    fn twelve_is_fixed() {
        let s = state(1000);
        assert_eq!(trace_orbit(&s, 12, 1000).unwrap().status, OrbitStatus::FixedPoint);
    }

    #[test]
    fn fixed_points_small_limits() {
        let s = state(100);
        assert_eq!(find_fixed_points(&s, 4).unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(find_fixed_points(&s, 11).unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(find_fixed_points(&s, 100).unwrap(), vec![1, 2, 3, 4, 12, 50, 86]);
        assert!(find_fixed_points(&s, 101).is_err());
    }

    #[test]
    fn small_census() {
        let s = state(10_000);
        let c = enumerate_cycles(&s, 4).unwrap();
        assert_eq!(c.fixed_points().collect::<Vec<_>>(), vec![1, 2, 3, 4]);
        assert_eq!(c.nontrivial().count(), 0);
        let c = enumerate_cycles(&s, 10).unwrap();
        let six = c.nontrivial().find(|r| r.min_element == 6).unwrap();
        assert_eq!(six.elements, vec![6, 8, 14, 16, 10]);
    }

    #[test]
    fn horizon_is_clamped_with_note() {
        let s = state(500);
        let r = trace_orbit(&s, 11, 10_000).unwrap();
        assert_eq!(r.status, OrbitStatus::EscapedHorizon);
        assert_eq!(r.horizon, 500);
        assert!(r.note.is_some());
    }

    #[test]
    fn plot_offsets_put_minimum_at_zero() {
        let s = state(5000);
        let r = trace_orbit(&s, 11, 5000).unwrap();
        let pts = r.plot_points();
        let (off, v) = pts.iter().min_by_key(|p| p.1).unwrap();
        assert_eq!((*off, *v), (0, 11));
        assert!(pts.windows(2).all(|w| w[1].0 == w[0].0 + 1));
        let cyc = trace_orbit(&s, 14, 5000).unwrap().plot_points();
        assert_eq!(cyc[0], (-3, 14));
    }
}
