//! Bundled verification suites: each line compares a computed value with a
//! closed form or a structural claim.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{big_omega, ceil_sqrt, floor_root, is_prime};
use crate::constructions::{complement_weight_set, interval_weight_set, singer_weight_set};
use crate::davenport::{davenport, max_davenport_over_size};
use crate::engine::ratio_criterion;
use crate::error::{Error, Result};
use crate::fd::{coprime_product_relation, elementary_chain_relation, fd, prime_power_relation, FdStatus};
use crate::gf::{difference_census, singer_difference_set};
use crate::group::GroupSpec;
use crate::random_lab::pair_lemma_check;
use crate::weights::WeightSet;

pub const SUITES: [&str; 7] = [
    "known-formulas",
    "singer",
    "intervals",
    "relations",
    "dual-max",
    "pair-lemma",
    "complement",
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub ok: bool,
}

impl CheckLine {
    fn new(name: impl Into<String>, expected: impl ToString, computed: impl ToString, ok: bool) -> Self {
        Self {
            name: name.into(),
            expected: expected.to_string(),
            computed: computed.to_string(),
            ok,
        }
    }

    fn eq<T: PartialEq + std::fmt::Display>(name: impl Into<String>, expected: T, computed: T) -> Self {
        let ok = expected == computed;
        Self::new(name, expected, computed, ok)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckLine>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str, checks: Vec<CheckLine>) -> Self {
        Self {
            suite: suite.into(),
            checks,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckLine> {
        self.checks.iter().filter(|c| !c.ok)
    }
}

fn dav(n: u64, w: WeightSet) -> Result<u64> {
    Ok(davenport(&GroupSpec::cyclic(n)?, &w, None)?.value)
}

/// Integer `⌊log_b n⌋`.
fn ilog(n: u64, b: u64) -> u64 {
    n.ilog(b) as u64
}

pub const UNIT_MODULI: [u64; 10] = [4, 6, 8, 9, 12, 16, 18, 24, 30, 36];

/// Closed forms for `Z_n`, `2 ≤ n ≤ max_n`.
pub fn known_formulas(max_n: u64) -> Result<SuiteReport> {
    let mut jobs: Vec<(String, u64, WeightSet, u64)> = Vec::new();
    for n in 2..=max_n {
        jobs.push((format!("D_{{1,-1}}(Z_{n})"), n, WeightSet::symmetric(n, 1).or_else(|_| WeightSet::new(n, [1]))?, ilog(n, 2) + 1));
        for r in 1..=6.min(n - 1) {
            jobs.push((format!("D_[1,{r}](Z_{n})"), n, WeightSet::interval(n, r)?, n.div_ceil(r)));
        }
        jobs.push((format!("D_full(Z_{n})"), n, WeightSet::full(n)?, 2));
        if UNIT_MODULI.contains(&n) {
            jobs.push((format!("D_units(Z_{n})"), n, WeightSet::units(n)?, 1 + big_omega(n) as u64));
        }
        for r in (1..=3).filter(|&r| 2 * r + 1 < n) {
            jobs.push((format!("D_+-[1,{r}](Z_{n})"), n, WeightSet::symmetric(n, r)?, ilog(n, r + 1) + 1));
        }
    }
    let checks = jobs
        .into_par_iter()
        .map(|(name, n, w, expected)| Ok(CheckLine::eq(name, expected, dav(n, w)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport::new("known-formulas", checks))
}

/// Difference census, size and ratio criterion for each `q`.
pub fn singer_suite(qs: &[u64]) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    for &q in qs {
        let p = q * q + q + 1;
        let d = singer_difference_set(q)?;
        let census = difference_census(d.v(), d.elements());
        checks.push(CheckLine::new(
            format!("census(q={q})"),
            "1 per nonzero residue",
            format!("{:?}", (census[1..].iter().min(), census[1..].iter().max())),
            census[1..].iter().all(|&c| c == 1),
        ));
        checks.push(CheckLine::eq(format!("|D|(q={q})"), q + 1, d.elements().len() as u64));
        if !is_prime(p) {
            notes.push(format!("q={q}: {p} is not prime, no weight set"));
            continue;
        }
        checks.push(CheckLine::eq(format!("q+1 = ceil(sqrt(p-1)) (p={p})"), q + 1, ceil_sqrt(p - 1)));
        match singer_weight_set(p) {
            Ok(r) => {
                checks.push(CheckLine::eq(format!("|A|(p={p})"), q + 1, r.size as u64));
                checks.push(CheckLine::eq(
                    format!("A/A = Z_{p}*"),
                    true,
                    ratio_criterion(&r.weight_set)?,
                ));
                if let Some((t, s)) = r.construction.parameters.affine {
                    notes.push(format!("q={q}: affine image t={t} s={s}"));
                }
            }
            Err(Error::VerificationFailed(m)) => {
                checks.push(CheckLine::new(format!("A/A = Z_{p}*"), "some Singer image works", m, false));
            }
            Err(e) => return Err(e),
        }
    }
    let mut report = SuiteReport::new("singer", checks);
    report.notes = notes;
    Ok(report)
}

/// Interval construction for every odd prime below `p_max`.
pub fn intervals_suite(p_max: u64) -> Result<SuiteReport> {
    let primes: Vec<u64> = (3..p_max).filter(|&p| is_prime(p)).collect();
    let per: Vec<(Vec<CheckLine>, bool)> = primes
        .par_iter()
        .map(|&p| {
            let r = interval_weight_set(p)?;
            let m = floor_root(p, 2);
            let size = r.size as u64;
            Ok((
                vec![
                    CheckLine::eq(format!("D_A(Z_{p}) = 2"), true, r.verified_bound.is_some()),
                    CheckLine::eq(format!("|A|(p={p})"), 2 * m, size),
                    CheckLine::new(
                        format!("|A| <= 2 sqrt({p})"),
                        format!("<= {:.3}", 2.0 * (p as f64).sqrt()),
                        size,
                        size * size <= 4 * p,
                    ),
                ],
                !r.notes.is_empty(),
            ))
        })
        .collect::<Result<_>>()?;
    let over: Vec<u64> = primes
        .iter()
        .zip(&per)
        .filter(|(_, (_, o))| *o)
        .map(|(p, _)| *p)
        .collect();
    let mut report = SuiteReport::new("intervals", per.into_iter().flat_map(|(c, _)| c).collect());
    report.notes.push(format!(
        "|A| > 2 sqrt(p) - 1 at {} of {} primes (first: {:?})",
        over.len(),
        primes.len(),
        over.first()
    ));
    Ok(report)
}

fn ext(v: Option<u64>) -> String {
    v.map_or("inf".into(), |x| x.to_string())
}

/// Prime-power equality and the elementary-abelian chain for
/// the given `(p, m, k)`.
pub fn relations_suite(p: u64, m: u32, k: u64) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let pp = prime_power_relation(p, m, k)?;
    checks.push(CheckLine::new(
        pp.relation.clone(),
        ext(pp.values[1].1),
        ext(pp.values[0].1),
        pp.holds,
    ));
    if p.checked_pow(m).is_some_and(|o| o <= 512) {
        let ch = elementary_chain_relation(p, m as usize, k)?;
        let vals: Vec<String> = ch.values.iter().map(|(_, v)| ext(*v)).collect();
        checks.push(CheckLine::new(ch.relation, "nondecreasing", vals.join(" <= "), ch.holds));
    }
    Ok(SuiteReport::new("relations", checks))
}

fn fd_line(name: &str, factors: &[u64], k: u64, expected: Option<u64>) -> Result<CheckLine> {
    let g = GroupSpec::from_invariant_factors(factors.to_vec())?;
    let r = fd(&g, k)?;
    let got = match r.status {
        FdStatus::Unknown => "unknown".to_string(),
        _ => ext(r.value),
    };
    Ok(CheckLine::new(name, ext(expected), got.clone(), got == ext(expected)))
}

/// The fixed group-relation instances.
pub fn standard_relations() -> Result<SuiteReport> {
    let mut checks = vec![
        fd_line("f(Z_9, 2)", &[9], 2, Some(2))?,
        fd_line("f(Z_3, 2)", &[3], 2, Some(2))?,
        fd_line("f(Z_8, 2)", &[8], 2, Some(1))?,
        fd_line("f(Z_2, 2)", &[2], 2, Some(1))?,
        fd_line("f(Z_2^2, 2)", &[2, 2], 2, None)?,
        fd_line("f(Z_2^2, 3)", &[2, 2], 3, Some(1))?,
    ];
    let pp = prime_power_relation(5, 2, 2)?;
    checks.push(CheckLine::new(pp.relation, ext(pp.values[1].1), ext(pp.values[0].1), pp.holds));
    for k in [2, 3] {
        let c = coprime_product_relation(&[2, 3], k)?;
        let vals: Vec<String> = c.values.iter().map(|(g, v)| format!("{g}:{}", ext(*v))).collect();
        checks.push(CheckLine::new(c.relation, "<= min", vals.join(" "), c.holds));
    }
    let ch = elementary_chain_relation(2, 3, 4)?;
    let vals: Vec<String> = ch.values.iter().map(|(_, v)| ext(*v)).collect();
    checks.push(CheckLine::new(
        "f(Z_2^n, 4) nondecreasing, n = 1..3",
        "nondecreasing",
        vals.join(" <= "),
        ch.holds,
    ));
    Ok(SuiteReport::new("relations", checks))
}

/// `max{D_A(Z_p) : |A| = k} = ⌈p/k⌉`.
pub fn dual_max_suite(cases: &[(u64, u64)]) -> Result<SuiteReport> {
    let checks = cases
        .iter()
        .map(|&(p, k)| {
            let r = max_davenport_over_size(p, k)?;
            Ok(CheckLine::eq(format!("max D_A(Z_{p}), |A|={k}"), p.div_ceil(k), r.value))
        })
        .collect::<Result<_>>()?;
    Ok(SuiteReport::new("dual-max", checks))
}

pub fn pair_lemma_suite(n_max: u64) -> Result<SuiteReport> {
    let r = pair_lemma_check(n_max)?;
    let mut checks = vec![CheckLine::new(
        format!("D_{{x,-x}}(Z_n) <= floor(log2 n) + 1, n <= {n_max}"),
        format!("{} cases", r.cases),
        format!("{} violations", r.violations.len()),
        r.passed(),
    )];
    for v in &r.violations {
        checks.push(CheckLine::new(format!("n={} x={}", v.n, v.x), format!("<= {}", v.bound), v.value, false));
    }
    Ok(SuiteReport::new("pair-lemma", checks))
}

/// `D_{B_r}(Z_p) = 2` for all `r < (p−1)/4`.
pub fn complement_suite(primes: &[u64]) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for &p in primes {
        for r in (0..p).take_while(|&r| 4 * r < p - 1) {
            let rep = complement_weight_set(p, r)?;
            let d = dav(p, rep.weight_set.clone())?;
            checks.push(CheckLine::eq(format!("D_B{r}(Z_{p})"), 2, d));
        }
    }
    Ok(SuiteReport::new("complement", checks))
}
