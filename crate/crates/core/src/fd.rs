//! The minimum weight-set size `f_G(k) = min{|A| : D_A(G) ≤ k}`.
//!
//! Candidate sizes are tried in ascending order starting from a counting lower
//! bound where one applies; within a size, dilation-orbit representatives are
//! tested in lexicographic order and the first success is the witness. Since
//! `D_A` can only drop when `A` grows, the full set `[1, n-1]` decides
//! finiteness up front: if it fails, every `A` fails.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{ceil_sqrt, floor_root, is_prime};
use crate::davenport::check_dav_at_most_with;
use crate::engine::ratio_criterion;
use crate::error::{Error, Result};
use crate::group::{normalize_group, GroupSpec};
use crate::orbit;
use crate::search::SearchConfig;
use crate::weights::WeightSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FdStatus {
    Finite,
    Infinite,
    Unknown,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub candidates_tested: u64,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct FdResult {
    pub status: FdStatus,
    pub value: Option<u64>,
    pub witness_set: Option<WeightSet>,
    /// Largest size shown to admit no valid weight set.
    pub sizes_excluded: u64,
    pub stats: SearchStats,
}

impl FdResult {
    /// `Some(v)` for finite, `None` for infinite; unknown results are errors.
    pub fn as_extended(&self) -> Result<Option<u64>> {
        match self.status {
            FdStatus::Finite => Ok(self.value),
            FdStatus::Infinite => Ok(None),
            FdStatus::Unknown => Err(Error::BudgetExhausted {
                limit: 0,
                nodes: self.stats.nodes,
            }),
        }
    }
}

/// `⌈m^{1/k} − 1⌉`, clamped to at least 1.
fn counting_bound(m: u64, k: u32) -> u64 {
    let r = floor_root(m, k);
    let exact = r.checked_pow(k) == Some(m);
    let b = if exact { r - 1 } else { r };
    b.max(1)
}

/// Counting lower bound for `f(p, k)`; for `k = 2` the sharper `⌈√(p−1)⌉`.
pub fn fd_lower_bound(p: u64, k: u64) -> Result<u64> {
    if k < 2 {
        return Err(Error::InvalidParameter("k must be at least 2".into()));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 2 {
        return Ok(ceil_sqrt(p - 1).max(1));
    }
    Ok(counting_bound(p, k.min(64) as u32))
}

/// Lower bound used to start the size scan.
fn start_size(group: &GroupSpec, k: u64) -> u64 {
    if let Some(p) = group.prime_cyclic() {
        return fd_lower_bound(p, k).unwrap_or(1);
    }
    if group.elementary_prime().is_some() {
        return counting_bound(group.order(), k.min(64) as u32);
    }
    1
}

#[derive(Clone, Debug, Default)]
pub struct FdConfig {
    pub search: SearchConfig,
    /// Total node budget across all candidate checks.
    pub max_nodes: Option<u64>,
}

impl FdConfig {
    pub fn with_max_nodes(max_nodes: Option<u64>) -> Self {
        Self {
            max_nodes,
            ..Self::default()
        }
    }
}

pub fn fd(group: &GroupSpec, k: u64) -> Result<FdResult> {
    fd_with(group, k, &FdConfig::default())
}

enum Verdict {
    Works,
    Fails,
}

/// Generic size-ascending scan; `test` decides a single candidate.
fn scan_sizes<F>(n: u64, start: u64, max_nodes: Option<u64>, test: F) -> FdResult
where
    F: Fn(&WeightSet, Option<u64>) -> Result<(Verdict, u64)> + Sync,
{
    let t0 = Instant::now();
    let spent = AtomicU64::new(0);
    let mut tested = 0u64;
    let mut excluded = start.saturating_sub(1);
    let finish = |status, value, witness, excluded, tested, nodes| FdResult {
        status,
        value,
        witness_set: witness,
        sizes_excluded: excluded,
        stats: SearchStats {
            nodes,
            candidates_tested: tested,
            elapsed_ms: t0.elapsed().as_millis(),
        },
    };
    for size in start.max(1)..n {
        let reps: Vec<WeightSet> = orbit::orbit_representatives(n, size as usize)
            .map(|r| WeightSet::new(n, r).expect("reps are in range"))
            .collect();
        let verdicts: Vec<Option<Result<(Verdict, u64)>>> = reps
            .par_iter()
            .map(|a| {
                let left = max_nodes.map(|m| m.saturating_sub(spent.load(Ordering::Relaxed)));
                if left == Some(0) {
                    return None;
                }
                let r = test(a, left);
                if let Ok((_, nodes)) = &r {
                    spent.fetch_add(*nodes, Ordering::Relaxed);
                }
                Some(r)
            })
            .collect();
        for (a, v) in reps.iter().zip(verdicts) {
            tested += 1;
            match v {
                Some(Ok((Verdict::Works, _))) => {
                    return finish(
                        FdStatus::Finite,
                        Some(size),
                        Some(a.clone()),
                        size - 1,
                        tested,
                        spent.load(Ordering::Relaxed),
                    )
                }
                Some(Ok((Verdict::Fails, _))) => {}
                _ => {
                    return finish(
                        FdStatus::Unknown,
                        None,
                        None,
                        excluded,
                        tested,
                        spent.load(Ordering::Relaxed),
                    )
                }
            }
        }
        excluded = size;
    }
    // only reachable when the full set was not pre-checked
    finish(
        FdStatus::Infinite,
        None,
        None,
        n - 1,
        tested,
        spent.load(Ordering::Relaxed),
    )
}

pub fn fd_with(group: &GroupSpec, k: u64, config: &FdConfig) -> Result<FdResult> {
    let n = group.exponent();
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let infinite = |nodes| FdResult {
        status: FdStatus::Infinite,
        value: None,
        witness_set: None,
        sizes_excluded: n - 1,
        stats: SearchStats {
            nodes,
            candidates_tested: 1,
            elapsed_ms: 0,
        },
    };
    if k == 1 {
        // a maximal-order element survives every nonzero weight
        return Ok(infinite(0));
    }
    let mut full_cfg = config.search.clone();
    full_cfg.max_nodes = config.max_nodes;
    let full = match check_dav_at_most_with(group, &WeightSet::full(n)?, k, &full_cfg) {
        Ok(r) => r,
        Err(Error::BudgetExhausted { nodes, .. }) => {
            return Ok(FdResult {
                status: FdStatus::Unknown,
                value: None,
                witness_set: None,
                sizes_excluded: 0,
                stats: SearchStats {
                    nodes,
                    ..SearchStats::default()
                },
            })
        }
        Err(e) => return Err(e),
    };
    if !full.holds {
        return Ok(infinite(full.nodes_explored));
    }
    let mut res = scan_sizes(n, start_size(group, k), config.max_nodes, |a, left| {
        let mut cfg = config.search.clone();
        cfg.max_nodes = left;
        let r = check_dav_at_most_with(group, a, k, &cfg)?;
        Ok((if r.holds { Verdict::Works } else { Verdict::Fails }, r.nodes_explored))
    });
    if res.status == FdStatus::Infinite {
        // the size scan stops at n-1, which is the full set
        res.status = FdStatus::Finite;
        res.value = Some(n - 1);
        res.witness_set = Some(WeightSet::full(n)?);
        res.sizes_excluded = n - 2;
    }
    res.stats.nodes += full.nodes_explored;
    Ok(res)
}

/// `f(p, 2)` via `D_A(Z_p) ≤ 2 ⟺ A/A = Z_p*`.
pub fn fd_fast_k2(p: u64) -> Result<FdResult> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let start = fd_lower_bound(p, 2)?;
    let mut res = scan_sizes(p, start, None, |a, _| {
        Ok((
            if ratio_criterion(a)? {
                Verdict::Works
            } else {
                Verdict::Fails
            },
            1,
        ))
    });
    if res.status == FdStatus::Infinite {
        res.status = FdStatus::Finite;
        res.value = Some(p - 1);
        res.witness_set = Some(WeightSet::full(p)?);
        res.sizes_excluded = p - 2;
    }
    Ok(res)
}

/// One computed relation between `f` values of two or more groups.
#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    /// `(group, f value)`; `None` is infinity.
    pub values: Vec<(String, Option<u64>)>,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

fn ext_le(a: Option<u64>, b: Option<u64>) -> bool {
    match (a, b) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(x), Some(y)) => x <= y,
    }
}

fn fd_value(group: &GroupSpec, k: u64) -> Result<Option<u64>> {
    fd(group, k)?.as_extended()
}

/// `f_{Z_{p^m}}(k) = f(p, k)`.
pub fn prime_power_relation(p: u64, m: u32, k: u64) -> Result<RelationCheck> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let big = GroupSpec::cyclic(p.pow(m))?;
    let small = GroupSpec::cyclic(p)?;
    let (a, b) = (fd_value(&big, k)?, fd_value(&small, k)?);
    Ok(RelationCheck {
        relation: format!("f(Z_{}^{m}, {k}) = f(Z_{p}, {k})", p),
        values: vec![(big.to_string(), a), (small.to_string(), b)],
        holds: a == b,
    })
}

/// `f_G(k) ≤ min_i f_{H_i}(k)` for `G = H_1 × ... × H_r` with coprime orders.
pub fn coprime_product_relation(parts: &[u64], k: u64) -> Result<RelationCheck> {
    let whole = normalize_group(parts)?;
    let mut values = vec![(whole.to_string(), fd_value(&whole, k)?)];
    let mut min: Option<u64> = None;
    for &h in parts {
        let g = GroupSpec::cyclic(h)?;
        let v = fd_value(&g, k)?;
        if ext_le(v, min) {
            min = v;
        }
        values.push((g.to_string(), v));
    }
    let holds = ext_le(values[0].1, min);
    Ok(RelationCheck {
        relation: format!("f({whole}, {k}) <= min over factors"),
        values,
        holds,
    })
}

/// `f_{Z_p^1}(k) ≤ f_{Z_p^2}(k) ≤ ... ≤ f_{Z_p^r}(k)`.
pub fn elementary_chain_relation(p: u64, max_rank: usize, k: u64) -> Result<RelationCheck> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut values = Vec::new();
    for r in 1..=max_rank {
        let g = GroupSpec::from_invariant_factors(vec![p; r])?;
        values.push((g.to_string(), fd_value(&g, k)?));
    }
    let holds = values.windows(2).all(|w| ext_le(w[0].1, w[1].1));
    Ok(RelationCheck {
        relation: format!("f(Z_{p}^r, {k}) nondecreasing in r <= {max_rank}"),
        values,
        holds,
    })
}

/// Both sides of the prime-power equality and the elementary-abelian chain
/// up to rank `m` (skipped once `p^m` leaves desk scale).
pub fn fd_relation_checks(p: u64, m: u32, k: u64) -> Result<RelationReport> {
    let mut checks = vec![prime_power_relation(p, m, k)?];
    if p.checked_pow(m).is_some_and(|o| o <= 512) {
        checks.push(elementary_chain_relation(p, m as usize, k)?);
    }
    Ok(RelationReport { checks })
}
