//! Exact weighted Davenport constants.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::is_prime;
use crate::engine::GSequence;
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::orbit;
use crate::search::{SearchConfig, ZsfSearch};
use crate::weights::WeightSet;

#[derive(Clone, Debug, Serialize)]
pub struct DavenportResult {
    pub value: u64,
    /// Lexicographically smallest zero-sum-free multiset of length `value - 1`.
    pub witness: GSequence,
    pub nodes_explored: u64,
    #[serde(rename = "elapsed_ms", serialize_with = "ser_millis")]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundedCheckResult {
    pub holds: bool,
    pub counterexample: Option<GSequence>,
    pub nodes_explored: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DualMaxResult {
    pub value: u64,
    pub argmax: WeightSet,
    pub orbits_checked: usize,
    pub nodes_explored: u64,
}

pub(crate) fn ser_millis<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u128(d.as_millis())
}

/// Whether every sequence of length `k` has an `A`-weighted zero-sum
/// subsequence.
pub fn check_dav_at_most(group: &GroupSpec, weights: &WeightSet, k: u64) -> Result<BoundedCheckResult> {
    check_dav_at_most_with(group, weights, k, &SearchConfig::default())
}

pub fn check_dav_at_most_with(
    group: &GroupSpec,
    weights: &WeightSet,
    k: u64,
    config: &SearchConfig,
) -> Result<BoundedCheckResult> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let search = ZsfSearch::new(group, weights, config)?;
    let found = search.find(k as usize, config.max_nodes)?;
    Ok(BoundedCheckResult {
        holds: found.sequence.is_none(),
        counterexample: found
            .sequence
            .map(|s| GSequence::from_indices(group, &s))
            .transpose()?,
        nodes_explored: found.nodes,
    })
}

/// Default cap: `D(Z_n) = n` for cyclic groups, `|G|` otherwise.
pub fn default_cap(group: &GroupSpec) -> u64 {
    group.order()
}

/// `D_A(G)` with a witness of length `D_A(G) - 1`.
pub fn davenport(group: &GroupSpec, weights: &WeightSet, cap: Option<u64>) -> Result<DavenportResult> {
    davenport_with(group, weights, cap, &SearchConfig::default())
}

pub fn davenport_with(
    group: &GroupSpec,
    weights: &WeightSet,
    cap: Option<u64>,
    config: &SearchConfig,
) -> Result<DavenportResult> {
    let start = Instant::now();
    let cap = cap.unwrap_or_else(|| default_cap(group));
    if cap < 2 {
        return Err(Error::InvalidParameter("cap must be at least 2".into()));
    }
    let search = ZsfSearch::new(group, weights, config)?;
    let mut nodes = 0u64;
    let mut witness: Vec<usize> = Vec::new();
    for k in 1..=cap {
        let budget = config.max_nodes.map(|m| m.saturating_sub(nodes));
        let found = search.find(k as usize, budget).map_err(|e| match e {
            Error::BudgetExhausted { nodes: n, .. } => Error::BudgetExhausted {
                limit: config.max_nodes.unwrap_or(0),
                nodes: nodes + n,
            },
            other => other,
        })?;
        nodes += found.nodes;
        match found.sequence {
            Some(seq) => witness = seq,
            None => {
                return Ok(DavenportResult {
                    value: k,
                    witness: GSequence::from_indices(group, &witness)?,
                    nodes_explored: nodes,
                    elapsed: start.elapsed(),
                })
            }
        }
    }
    Err(Error::CapExceeded { cap })
}

/// `max{D_A(Z_p) : |A| = k}` over dilation-orbit representatives.
pub fn max_davenport_over_size(p: u64, k: u64) -> Result<DualMaxResult> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 || k >= p {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= {}", p - 1)));
    }
    let group = GroupSpec::cyclic(p)?;
    let reps: Vec<WeightSet> = orbit::orbit_representatives(p, k as usize)
        .map(|r| WeightSet::new(p, r))
        .collect::<Result<_>>()?;
    let values: Vec<(u64, u64)> = reps
        .par_iter()
        .map(|a| davenport(&group, a, None).map(|d| (d.value, d.nodes_explored)))
        .collect::<Result<_>>()?;
    let (best, _) = values
        .iter()
        .enumerate()
        .fold((0usize, 0u64), |(bi, bv), (i, &(v, _))| if v > bv { (i, v) } else { (bi, bv) });
    Ok(DualMaxResult {
        value: values[best].0,
        argmax: reps[best].clone(),
        orbits_checked: reps.len(),
        nodes_explored: values.iter().map(|&(_, n)| n).sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::has_weighted_zero_sum;

    fn z(n: u64) -> GroupSpec {
        GroupSpec::cyclic(n).unwrap()
    }

    fn dav(n: u64, w: &[u64]) -> u64 {
        davenport(&z(n), &WeightSet::new(n, w.iter().copied()).unwrap(), None)
            .unwrap()
            .value
    }

    #[test]
    fn known_values() {
        assert_eq!(dav(8, &[1, 7]), 4);
        assert_eq!(dav(12, &[1, 5, 7, 11]), 4);
        assert_eq!(dav(10, &[1, 2, 3]), 4);
        assert_eq!(dav(100, &[1, 2, 98, 99]), 5);
        for n in 5..=20 {
            assert_eq!(dav(n, &(1..n).collect::<Vec<_>>()), 2, "n = {n}");
        }
    }

    #[test]
    fn witness_is_valid_and_extremal() {
        let g = z(8);
        let w = WeightSet::new(8, [1, 7]).unwrap();
        let r = davenport(&g, &w, None).unwrap();
        assert_eq!(r.witness.len() as u64, r.value - 1);
        assert!(!has_weighted_zero_sum(&g, &w, &r.witness).unwrap());
        assert!(check_dav_at_most(&g, &w, r.value).unwrap().holds);
        // lexicographically smallest: 1, 2, 4 in Z_8 under ±1
        assert_eq!(r.witness.indices(), vec![1, 2, 4]);
    }

    #[test]
    fn bounded_check_examples() {
        let g = z(7);
        assert!(check_dav_at_most(&g, &WeightSet::new(7, [2, 3, 4]).unwrap(), 2).unwrap().holds);
        let r = check_dav_at_most(&g, &WeightSet::new(7, [1]).unwrap(), 2).unwrap();
        assert!(!r.holds);
        assert_eq!(r.counterexample.unwrap().indices(), vec![1, 1]);
        for (g, w) in [
            (z(9), WeightSet::new(9, [3, 6]).unwrap()),
            (
                GroupSpec::from_invariant_factors(vec![2, 4]).unwrap(),
                WeightSet::new(4, [1, 2, 3]).unwrap(),
            ),
        ] {
            let r = check_dav_at_most(&g, &w, 1).unwrap();
            assert!(!r.holds);
            let ce = r.counterexample.unwrap();
            assert_eq!(g.element_order(&ce.entries()[0]), g.exponent());
        }
        assert!(check_dav_at_most(&g, &WeightSet::new(7, [1]).unwrap(), 0).is_err());
    }

    #[test]
    fn errors() {
        let w = WeightSet::new(7, [1]).unwrap();
        assert!(matches!(
            davenport(&z(8), &w, None),
            Err(Error::ExponentMismatch { .. })
        ));
        let w = WeightSet::new(16, [1]).unwrap();
        assert_eq!(davenport(&z(16), &w, Some(5)).unwrap_err(), Error::CapExceeded { cap: 5 });
        let cfg = SearchConfig::with_max_nodes(Some(3));
        let w = WeightSet::new(64, [1, 2]).unwrap();
        assert!(matches!(
            davenport_with(&z(64), &w, None, &cfg),
            Err(Error::BudgetExhausted { .. })
        ));
    }

    #[test]
    fn noncyclic_groups() {
        // D(Z_2^2) = 3, D(Z_2^3) = 4, D(Z_3^2) = 5
        for (f, d) in [(vec![2, 2], 3), (vec![2, 2, 2], 4), (vec![3, 3], 5), (vec![2, 4], 5)] {
            let g = GroupSpec::from_invariant_factors(f).unwrap();
            let w = WeightSet::new(g.exponent(), [1]).unwrap();
            assert_eq!(davenport(&g, &w, None).unwrap().value, d, "{g}");
        }
    }

    #[test]
    fn dual_max_examples() {
        let r = max_davenport_over_size(7, 2).unwrap();
        assert_eq!(r.value, 4);
        let orbit = crate::orbit::dilation_orbit(7, r.argmax.residues());
        assert!(orbit.contains(&vec![1, 2]));
        assert_eq!(max_davenport_over_size(5, 2).unwrap().value, 3);
        for p in [5, 7, 11] {
            assert_eq!(max_davenport_over_size(p, p - 1).unwrap().value, 2);
        }
        assert_eq!(max_davenport_over_size(9, 2).unwrap_err(), Error::NotPrime(9));
    }

    /// Brute force over all 2-subsets of [1, 4] in Z_5.
    #[test]
    fn dual_max_oracle_p5() {
        use itertools::Itertools;
        let g = z(5);
        let best = (1..5u64)
            .combinations(2)
            .map(|c| davenport(&g, &WeightSet::new(5, c).unwrap(), None).unwrap().value)
            .max()
            .unwrap();
        assert_eq!(best, 3);
    }
}
