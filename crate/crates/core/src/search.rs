//! Depth-first search for `A`-weighted zero-sum-free sequences of a fixed
//! length.
//!
//! Sequences are enumerated as multisets (nondecreasing element indices),
//! with the zero element excluded. Each stack frame owns one reachable-set
//! bit-vector, extended incrementally from its parent. A prefix whose
//! reachable set contains zero is dead, and so is a prefix whose reachable
//! set is already too large: every further entry adds at least one new
//! reachable value and `0` is never reachable.
//!
//! In cyclic groups the search is restricted by unit scaling. Any multiset
//! can be scaled so that its element `x` of smallest `gcd(x, n)` becomes that
//! gcd `d`; the search therefore starts each multiset at a divisor `d` and
//! only admits later entries with `gcd(y, n) ≥ d`. For `Z_p` this is exactly
//! "the multiset contains 1". The lexicographically smallest multiset of any
//! scaling class survives the restriction, so witnesses are still the
//! lexicographically smallest overall.
//!
//! Top-level prefixes are distributed over the rayon pool. The merge always
//! reports the first successful prefix in lexicographic order, and node
//! counts only include prefixes up to that one, so results do not depend on
//! the number of threads.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{self, gcd};
use crate::bits::BitSet;
use crate::engine::{check_exponent, extend_reachable, weighted_images};
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::weights::WeightSet;

const FLUSH_EVERY: u64 = 1 << 12;

/// How the final entry of a candidate sequence is tested.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LastLevel {
    /// Test `y` directly: it is admissible iff no `a·y` lies in `−R ∪ {0}`.
    #[default]
    Scan,
    /// `Z_p` only: build the killed set `⋃_a −a⁻¹R` as a sumset of discrete
    /// logarithms, then read off the first admissible `y`.
    LogDomain,
    /// Extend the reachable set for the final entry like any other level.
    Full,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchConfig {
    pub max_nodes: Option<u64>,
    pub last_level: LastLevel,
    pub symmetry: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            max_nodes: None,
            last_level: LastLevel::Scan,
            symmetry: true,
        }
    }
}

impl SearchConfig {
    pub fn with_max_nodes(max_nodes: Option<u64>) -> Self {
        Self {
            max_nodes,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Found {
    pub sequence: Option<Vec<usize>>,
    pub nodes: u64,
}

struct Shared {
    stop: AtomicUsize,
    nodes: AtomicU64,
    budget_hit: AtomicBool,
    limit: Option<u64>,
}

struct LogTables {
    log: Vec<usize>,
    // log(-a^-1) for each weight
    shifts: Vec<usize>,
}

pub(crate) struct ZsfSearch<'a> {
    group: &'a GroupSpec,
    order: usize,
    images: Vec<Vec<usize>>,
    neg: Vec<usize>,
    cyclic_n: Option<u64>,
    gcds: Vec<u64>,
    last_level: LastLevel,
    log: Option<LogTables>,
}

impl<'a> ZsfSearch<'a> {
    pub fn new(group: &'a GroupSpec, weights: &WeightSet, config: &SearchConfig) -> Result<Self> {
        check_exponent(group, weights)?;
        let order = group.ensure_flat()?;
        let images = (0..order)
            .map(|x| weighted_images(group, weights, x))
            .collect();
        let neg = (0..order).map(|x| group.neg_index(x)).collect();
        let cyclic_n = (config.symmetry && group.is_cyclic()).then(|| group.order());
        let gcds = match cyclic_n {
            Some(n) => (0..order as u64).map(|y| gcd(y, n)).collect(),
            None => Vec::new(),
        };
        let log = match config.last_level {
            LastLevel::LogDomain => {
                let p = group.prime_cyclic().ok_or(Error::NotPrime(group.order()))?;
                let g = arith::primitive_root(p).expect("prime");
                let mut log = vec![usize::MAX; p as usize];
                let mut x = 1u64;
                for e in 0..(p - 1) as usize {
                    log[x as usize] = e;
                    x = x * g % p;
                }
                let shifts = weights
                    .residues()
                    .iter()
                    .map(|&a| {
                        let inv = arith::inv_mod(a, p).expect("unit");
                        log[(p - inv) as usize]
                    })
                    .collect();
                Some(LogTables { log, shifts })
            }
            _ => None,
        };
        Ok(Self {
            group,
            order,
            images,
            neg,
            cyclic_n,
            gcds,
            last_level: config.last_level,
            log,
        })
    }

    #[inline]
    fn admissible(&self, first: usize, y: usize) -> bool {
        match self.cyclic_n {
            Some(_) => self.gcds[y] >= first as u64,
            None => true,
        }
    }

    fn firsts(&self) -> Vec<usize> {
        match self.cyclic_n {
            Some(n) => arith::divisors(n)
                .into_iter()
                .filter(|&d| d < n)
                .map(|d| d as usize)
                .collect(),
            None => (1..self.order).collect(),
        }
    }

    /// Prefixes of length `min(k, 2)` in lexicographic order.
    fn roots(&self, k: usize) -> Vec<Vec<usize>> {
        let mut roots = Vec::new();
        for f in self.firsts() {
            if k == 1 {
                roots.push(vec![f]);
                continue;
            }
            for y in f..self.order {
                if self.admissible(f, y) {
                    roots.push(vec![f, y]);
                }
            }
        }
        roots
    }

    /// Searches for a zero-sum-free sequence of length `k`; returns the
    /// lexicographically smallest one (as sorted indices) if it exists.
    pub fn find(&self, k: usize, max_nodes: Option<u64>) -> Result<Found> {
        assert!(k >= 1);
        if k >= self.order {
            // |R| grows by one per entry and never holds 0
            return Ok(Found {
                sequence: None,
                nodes: 0,
            });
        }
        let roots = self.roots(k);
        let shared = Shared {
            stop: AtomicUsize::new(usize::MAX),
            nodes: AtomicU64::new(0),
            budget_hit: AtomicBool::new(false),
            limit: max_nodes,
        };
        let outcomes: Vec<(Option<Vec<usize>>, u64, bool)> = roots
            .par_iter()
            .enumerate()
            .map_init(
                || Worker::new(self.order, k),
                |w, (i, root)| w.run(self, &shared, i, root, k),
            )
            .collect();

        let first_hit = outcomes.iter().position(|(s, _, _)| s.is_some());
        let considered = first_hit.map_or(outcomes.len(), |i| i + 1);
        let complete = outcomes[..considered].iter().all(|(_, _, aborted)| !aborted);
        let nodes: u64 = outcomes[..considered].iter().map(|(_, n, _)| n).sum();
        if !complete || max_nodes.is_some_and(|m| nodes > m) {
            return Err(Error::BudgetExhausted {
                limit: max_nodes.unwrap_or(0),
                nodes: shared.nodes.load(Ordering::Relaxed),
            });
        }
        Ok(Found {
            sequence: first_hit.and_then(|i| outcomes[i].0.clone()),
            nodes,
        })
    }
}

struct Worker {
    levels: Vec<BitSet>,
    path: Vec<usize>,
    rlog: BitSet,
    killed: BitSet,
    nodes: u64,
    unflushed: u64,
    aborted: bool,
}

impl Worker {
    fn new(order: usize, k: usize) -> Self {
        Self {
            levels: (0..=k).map(|_| BitSet::new(order)).collect(),
            path: Vec::with_capacity(k),
            rlog: BitSet::new(order.saturating_sub(1).max(1)),
            killed: BitSet::new(order.saturating_sub(1).max(1)),
            nodes: 0,
            unflushed: 0,
            aborted: false,
        }
    }

    fn run(
        &mut self,
        s: &ZsfSearch<'_>,
        shared: &Shared,
        idx: usize,
        root: &[usize],
        k: usize,
    ) -> (Option<Vec<usize>>, u64, bool) {
        self.nodes = 0;
        self.unflushed = 0;
        self.aborted = false;
        self.path.clear();
        if shared.stop.load(Ordering::Relaxed) < idx || shared.budget_hit.load(Ordering::Relaxed) {
            return (None, 0, true);
        }
        self.levels[0].clear();
        for (d, &y) in root.iter().enumerate() {
            self.tick(shared, idx);
            let (lo, hi) = self.levels.split_at_mut(d + 1);
            extend_reachable(s.group, &mut hi[0], &lo[d], &s.images[y]);
            if hi[0].contains(0) {
                return self.finish(shared, None);
            }
            self.path.push(y);
        }
        let found = self.dfs(s, shared, idx, k);
        let seq = found.then(|| self.path.clone());
        if seq.is_some() {
            shared.stop.fetch_min(idx, Ordering::Relaxed);
        }
        self.finish(shared, seq)
    }

    fn finish(&mut self, shared: &Shared, seq: Option<Vec<usize>>) -> (Option<Vec<usize>>, u64, bool) {
        shared.nodes.fetch_add(self.unflushed, Ordering::Relaxed);
        self.unflushed = 0;
        (seq, self.nodes, self.aborted)
    }

    #[inline]
    fn tick(&mut self, shared: &Shared, idx: usize) -> bool {
        self.nodes += 1;
        self.unflushed += 1;
        if self.unflushed >= FLUSH_EVERY {
            let total = shared.nodes.fetch_add(self.unflushed, Ordering::Relaxed) + self.unflushed;
            self.unflushed = 0;
            if let Some(limit) = shared.limit {
                if total > limit {
                    shared.budget_hit.store(true, Ordering::Relaxed);
                }
            }
            if shared.budget_hit.load(Ordering::Relaxed) || shared.stop.load(Ordering::Relaxed) < idx {
                self.aborted = true;
            }
        }
        !self.aborted
    }

    fn dfs(&mut self, s: &ZsfSearch<'_>, shared: &Shared, idx: usize, k: usize) -> bool {
        let d = self.path.len();
        if d == k {
            return true;
        }
        let first = self.path[0];
        let last = *self.path.last().expect("roots are nonempty");
        if d + 1 == k && s.last_level != LastLevel::Full {
            let y = match s.last_level {
                LastLevel::Scan => self.last_scan(s, shared, idx, first, last),
                LastLevel::LogDomain => self.last_log(s, shared, idx, first, last),
                LastLevel::Full => unreachable!(),
            };
            return match y {
                Some(y) => {
                    self.path.push(y);
                    true
                }
                None => false,
            };
        }
        let cap = s.order - 1;
        for y in last..s.order {
            if !s.admissible(first, y) {
                continue;
            }
            if !self.tick(shared, idx) {
                return false;
            }
            let (lo, hi) = self.levels.split_at_mut(d + 1);
            let next = &mut hi[0];
            extend_reachable(s.group, next, &lo[d], &s.images[y]);
            if next.contains(0) || next.count() + (k - d - 1) > cap {
                continue;
            }
            self.path.push(y);
            if self.dfs(s, shared, idx, k) {
                return true;
            }
            self.path.pop();
            if self.aborted {
                return false;
            }
        }
        false
    }

    fn last_scan(&mut self, s: &ZsfSearch<'_>, shared: &Shared, idx: usize, first: usize, last: usize) -> Option<usize> {
        // one node per scan; the scan itself is linear and cheap
        if !self.tick(shared, idx) {
            return None;
        }
        let r = &self.levels[self.path.len()];
        (last..s.order).find(|&y| {
            s.admissible(first, y)
                && s.images[y].iter().all(|&t| t != 0 && !r.contains(s.neg[t]))
        })
    }

    fn last_log(&mut self, s: &ZsfSearch<'_>, shared: &Shared, idx: usize, first: usize, last: usize) -> Option<usize> {
        if !self.tick(shared, idx) {
            return None;
        }
        let tables = s.log.as_ref().expect("log tables");
        let r = &self.levels[self.path.len()];
        self.rlog.clear();
        for x in r.ones() {
            self.rlog.insert(tables.log[x]);
        }
        self.killed.clear();
        for &c in &tables.shifts {
            self.killed.or_rotated(&self.rlog, c);
        }
        (last.max(1)..s.order).find(|&y| s.admissible(first, y) && !self.killed.contains(tables.log[y]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{has_weighted_zero_sum, GSequence};

    fn brute_exists(g: &GroupSpec, w: &WeightSet, k: usize) -> bool {
        use itertools::Itertools;
        (1..g.order() as usize)
            .combinations_with_replacement(k)
            .any(|c| !has_weighted_zero_sum(g, w, &GSequence::from_indices(g, &c).unwrap()).unwrap())
    }

    fn brute_first(g: &GroupSpec, w: &WeightSet, k: usize) -> Option<Vec<usize>> {
        use itertools::Itertools;
        (1..g.order() as usize)
            .combinations_with_replacement(k)
            .find(|c| !has_weighted_zero_sum(g, w, &GSequence::from_indices(g, c).unwrap()).unwrap())
    }

    fn configs() -> Vec<SearchConfig> {
        let mut out = Vec::new();
        for last_level in [LastLevel::Scan, LastLevel::Full] {
            for symmetry in [true, false] {
                out.push(SearchConfig {
                    max_nodes: None,
                    last_level,
                    symmetry,
                });
            }
        }
        out
    }

    #[test]
    fn agrees_with_brute_force() {
        let groups = [
            GroupSpec::cyclic(7).unwrap(),
            GroupSpec::cyclic(9).unwrap(),
            GroupSpec::cyclic(12).unwrap(),
            GroupSpec::from_invariant_factors(vec![2, 4]).unwrap(),
            GroupSpec::from_invariant_factors(vec![3, 3]).unwrap(),
        ];
        for g in &groups {
            let n = g.exponent();
            for w in [
                WeightSet::new(n, [1]).unwrap(),
                WeightSet::symmetric(n, 1).unwrap(),
                WeightSet::new(n, [1, 2]).unwrap(),
            ] {
                for k in 1..=4 {
                    let expect = brute_first(g, &w, k);
                    for cfg in configs() {
                        let s = ZsfSearch::new(g, &w, &cfg).unwrap();
                        let got = s.find(k, None).unwrap().sequence;
                        assert_eq!(got.is_some(), brute_exists(g, &w, k), "{g} {w} {k} {cfg:?}");
                        assert_eq!(got, expect, "{g} {w} k={k} {cfg:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn log_domain_matches_scan() {
        for p in [7u64, 11, 13, 31] {
            let g = GroupSpec::cyclic(p).unwrap();
            for w in [
                WeightSet::new(p, [1, 2]).unwrap(),
                WeightSet::symmetric(p, 2).unwrap(),
                WeightSet::new(p, [2, 3, 5]).unwrap(),
            ] {
                for k in 1..=4 {
                    let scan = ZsfSearch::new(&g, &w, &SearchConfig::default()).unwrap();
                    let log = ZsfSearch::new(
                        &g,
                        &w,
                        &SearchConfig {
                            last_level: LastLevel::LogDomain,
                            ..SearchConfig::default()
                        },
                    )
                    .unwrap();
                    assert_eq!(
                        scan.find(k, None).unwrap().sequence,
                        log.find(k, None).unwrap().sequence,
                        "p={p} {w} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn budget_is_reported() {
        let g = GroupSpec::cyclic(64).unwrap();
        let w = WeightSet::new(64, [1, 2]).unwrap();
        let s = ZsfSearch::new(&g, &w, &SearchConfig::default()).unwrap();
        assert!(matches!(s.find(32, Some(10)), Err(Error::BudgetExhausted { .. })));
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let g = GroupSpec::cyclic(31).unwrap();
        let w = WeightSet::new(31, [1, 5, 25]).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| {
                    let s = ZsfSearch::new(&g, &w, &SearchConfig::default()).unwrap();
                    (1..=6).map(|k| s.find(k, None).unwrap()).collect::<Vec<_>>()
                })
        };
        assert_eq!(run(1), run(4));
    }
}
