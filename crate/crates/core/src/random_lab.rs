//! θ-random weight sets and threshold sweeps over `Z_p`.
//!
//! All logarithms are natural. Trials are seeded individually by
//! [`trial_seed`], so results do not depend on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::is_prime;
use crate::davenport::{check_dav_at_most, davenport};
use crate::engine::{has_weighted_zero_sum, GSequence};
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::search::SearchConfig;
use crate::weights::WeightSet;

/// Each residue of `[1, n-1]` kept independently with probability `theta`;
/// `None` when nothing was kept.
pub fn sample_theta_random<R: Rng + ?Sized>(n: u64, theta: f64, rng: &mut R) -> Option<WeightSet> {
    let picked: Vec<u64> = (1..n).filter(|_| rng.gen_bool(theta.clamp(0.0, 1.0))).collect();
    if picked.is_empty() {
        None
    } else {
        Some(WeightSet::new(n, picked).expect("residues in range"))
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `splitmix64(splitmix64(splitmix64(seed) ^ theta_idx) ^ trial_idx)`.
pub fn trial_seed(seed: u64, theta_idx: u64, trial_idx: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ theta_idx) ^ trial_idx)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum DavClass {
    /// `D_A ≤ k − 1`
    Lt,
    Eq,
    Gt,
}

pub fn classify_dav(p: u64, weights: &WeightSet, k: u64) -> Result<DavClass> {
    classify_dav_with(p, weights, k, &SearchConfig::default())
}

pub fn classify_dav_with(p: u64, weights: &WeightSet, k: u64, config: &SearchConfig) -> Result<DavClass> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if weights.exponent() != p {
        return Err(Error::ExponentMismatch {
            weights: weights.exponent(),
            group: p,
        });
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let g = GroupSpec::cyclic(p)?;
    let check = |len| crate::davenport::check_dav_at_most_with(&g, weights, len, config).map(|r| r.holds);
    if k >= 2 {
        let ones = GSequence::cyclic(&g, &vec![1; (k - 1) as usize])?;
        if has_weighted_zero_sum(&g, weights, &ones)? && check(k - 1)? {
            return Ok(DavClass::Lt);
        }
    }
    Ok(if check(k)? { DavClass::Eq } else { DavClass::Gt })
}

/// Density window `(theta_low, theta_high)` in which `D_A(Z_p) = k` is
/// expected; `omega` serves as both slack functions.
pub fn theoretical_window(p: u64, k: u64, omega: f64) -> Result<(f64, f64)> {
    if k < 2 {
        return Err(Error::InvalidParameter("k must be at least 2".into()));
    }
    let pf = p as f64;
    let lnp = pf.ln();
    if k == 2 {
        return Ok((((2.0 * lnp + omega) / pf).sqrt(), 1.0));
    }
    let kf = k as f64;
    let low = (3.0 * kf * pf * (lnp + omega)).powf(1.0 / kf) / pf;
    let high = if omega > 0.0 {
        (pf.powf(1.0 / (kf - 1.0)) / (pf * omega)).min(1.0)
    } else {
        1.0
    };
    Ok((low, high))
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepConfig {
    pub p: u64,
    pub k: u64,
    pub theta_grid: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub omega: f64,
    /// Node budget for each individual check.
    pub max_nodes: Option<u64>,
}

impl SweepConfig {
    fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(Error::NotPrime(self.p));
        }
        if self.k < 2 {
            return Err(Error::InvalidParameter("k must be at least 2".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if self.theta_grid.iter().any(|t| !(*t > 0.0 && *t < 1.0)) {
            return Err(Error::InvalidParameter("densities must lie in (0, 1)".into()));
        }
        if self.theta_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("density grid must be strictly increasing".into()));
        }
        if self.omega < 0.0 || !self.omega.is_finite() {
            return Err(Error::InvalidParameter("omega must be nonnegative".into()));
        }
        Ok(())
    }
}

/// `steps` evenly spaced densities from `a` to `b` inclusive.
pub fn linear_grid(a: f64, b: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..steps)
            .map(|i| a + (b - a) * i as f64 / (steps - 1) as f64)
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub theta: f64,
    /// Fraction of trials with `D_A ≤ k`.
    pub p_le: f64,
    /// Fraction of trials with `D_A = k`.
    pub p_eq: f64,
    pub mean_size: f64,
    pub empty: u64,
    pub trials: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub p: u64,
    pub k: u64,
    pub seed: u64,
    pub omega: f64,
    pub log: &'static str,
    pub window: (f64, f64),
    pub rows: Vec<SweepRow>,
    /// Set when a budget stopped the sweep before the end of the grid.
    pub partial: bool,
    pub warnings: Vec<String>,
}

/// One trial: `(|A|, class)`; an empty sample never has a zero-sum.
fn run_trial(cfg: &SweepConfig, theta_idx: usize, trial: u64) -> Result<(usize, Option<DavClass>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, theta_idx as u64, trial));
    let Some(a) = sample_theta_random(cfg.p, cfg.theta_grid[theta_idx], &mut rng) else {
        return Ok((0, None));
    };
    let search = SearchConfig::with_max_nodes(cfg.max_nodes);
    let class = classify_dav_with(cfg.p, &a, cfg.k, &search)?;
    Ok((a.len(), Some(class)))
}

pub fn threshold_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let window = theoretical_window(cfg.p, cfg.k, cfg.omega)?;
    let mut report = SweepReport {
        p: cfg.p,
        k: cfg.k,
        seed: cfg.seed,
        omega: cfg.omega,
        log: "natural",
        window,
        rows: Vec::new(),
        partial: false,
        warnings: Vec::new(),
    };
    if cfg.k >= 3 && window.0 >= window.1 {
        report
            .warnings
            .push(format!("density window is empty at p={} (low {:.4} >= high {:.4})", cfg.p, window.0, window.1));
    }
    for idx in 0..cfg.theta_grid.len() {
        let outcomes: Result<Vec<(usize, Option<DavClass>)>> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| run_trial(cfg, idx, t))
            .collect();
        let outcomes = match outcomes {
            Ok(o) => o,
            Err(Error::BudgetExhausted { .. }) => {
                report.partial = true;
                report.warnings.push(format!("budget exhausted at theta index {idx}"));
                break;
            }
            Err(e) => return Err(e),
        };
        let n = cfg.trials as f64;
        let count = |f: fn(&Option<DavClass>) -> bool| outcomes.iter().filter(|o| f(&o.1)).count() as f64;
        report.rows.push(SweepRow {
            theta: cfg.theta_grid[idx],
            p_le: count(|c| matches!(c, Some(DavClass::Lt | DavClass::Eq))) / n,
            p_eq: count(|c| matches!(c, Some(DavClass::Eq))) / n,
            mean_size: outcomes.iter().map(|o| o.0).sum::<usize>() as f64 / n,
            empty: outcomes.iter().filter(|o| o.1.is_none()).count() as u64,
            trials: cfg.trials,
        });
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct PairLemmaViolation {
    pub n: u64,
    pub x: u64,
    pub value: u64,
    pub bound: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairLemmaReport {
    pub n_max: u64,
    pub cases: u64,
    pub violations: Vec<PairLemmaViolation>,
}

impl PairLemmaReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `D_{{x, n−x}}(Z_n) ≤ ⌊log₂ n⌋ + 1` for all `2 ≤ n ≤ n_max`, `1 ≤ x < n`.
pub fn pair_lemma_check(n_max: u64) -> Result<PairLemmaReport> {
    let cases: Vec<(u64, u64)> = (2..=n_max).flat_map(|n| (1..n).map(move |x| (n, x))).collect();
    let results: Vec<Option<PairLemmaViolation>> = cases
        .par_iter()
        .map(|&(n, x)| {
            let bound = n.ilog2() as u64 + 1;
            let g = GroupSpec::cyclic(n)?;
            let w = WeightSet::new(n, [x, n - x])?;
            // D ≤ bound iff every sequence of length `bound` has a zero-sum
            if check_dav_at_most(&g, &w, bound)?.holds {
                return Ok(None);
            }
            let value = davenport(&g, &w, None)?.value;
            Ok(Some(PairLemmaViolation { n, x, value, bound }))
        })
        .collect::<Result<_>>()?;
    Ok(PairLemmaReport {
        n_max,
        cases: cases.len() as u64,
        violations: results.into_iter().flatten().collect(),
    })
}
