//! Explicit weight sets with attached verification.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{self, floor_root, inv_mod, is_prime, mul_mod, primitive_root, projective_plane_order};
use crate::bits::BitSet;
use crate::davenport::{check_dav_at_most_with, davenport};
use crate::engine::ratio_criterion;
use crate::error::{Error, Result};
use crate::gf::{singer_difference_set, PerfectDifferenceSet};
use crate::group::GroupSpec;
use crate::search::{LastLevel, SearchConfig};
use crate::weights::WeightSet;

/// Largest prime for which quartic reports are checked exhaustively.
pub const QUARTIC_EXHAUSTIVE_LIMIT: u64 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerificationMethod {
    Exhaustive,
    RatioCriterion,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VerifiedBound {
    pub k: u64,
    pub method: VerificationMethod,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub l: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c0: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(rename = "J", skip_serializing_if = "Option::is_none")]
    pub j: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primitive_root: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub difference_set: Option<Vec<u64>>,
    /// `(t, s)` of the affine image `t·D + s` actually used.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub affine: Option<(u64, u64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Construction {
    pub name: String,
    pub parameters: Parameters,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metrics {
    pub k: u64,
    /// `|A| / p^{1/k}`.
    pub size_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstructionReport {
    pub weight_set: WeightSet,
    pub construction: Construction,
    pub size: usize,
    pub verified_bound: Option<VerifiedBound>,
    pub metrics: Metrics,
    pub notes: Vec<String>,
}

impl ConstructionReport {
    fn new(name: &str, parameters: Parameters, weight_set: WeightSet, k: u64) -> Self {
        let n = weight_set.exponent() as f64;
        let size = weight_set.len();
        Self {
            construction: Construction {
                name: name.into(),
                parameters,
            },
            size,
            verified_bound: None,
            metrics: Metrics {
                k,
                size_ratio: size as f64 / n.powf(1.0 / k as f64),
            },
            notes: Vec::new(),
            weight_set,
        }
    }
}

fn exhaustive_holds(weights: &WeightSet, k: u64, last_level: LastLevel) -> Result<bool> {
    let g = GroupSpec::cyclic(weights.exponent())?;
    let cfg = SearchConfig {
        last_level,
        ..SearchConfig::default()
    };
    Ok(check_dav_at_most_with(&g, weights, k, &cfg)?.holds)
}

/// `A = {θ^d : d ∈ D}` for `p = q²+q+1`, `θ` the least primitive root.
///
/// The canonical Singer set is tried first, then its affine images `t·D + s`
/// (units `t`, then shifts `s`, ascending) until `A/A = Z_p*`.
pub fn singer_weight_set(p: u64) -> Result<ConstructionReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let q = projective_plane_order(p)
        .ok_or_else(|| Error::InvalidParameter(format!("{p} is not q^2+q+1 for a prime q")))?;
    let theta = primitive_root(p).expect("primes have primitive roots");
    let base = singer_difference_set(q)?;
    let to_weights = |d: &PerfectDifferenceSet| {
        WeightSet::new(p, d.elements().iter().map(|&e| arith::pow_mod(theta, e, p)))
    };
    let mut params = Parameters {
        q: Some(q),
        p: Some(p),
        primitive_root: Some(theta),
        ..Parameters::default()
    };
    for t in arith::units(p) {
        for s in 0..p {
            let d = base.affine_image(t, s)?;
            let a = to_weights(&d)?;
            if a.len() as u64 == q + 1 && ratio_criterion(&a)? {
                params.difference_set = Some(d.elements().to_vec());
                params.affine = Some((t, s));
                let mut report = ConstructionReport::new("singer-weights", params, a, 2);
                report.verified_bound = Some(VerifiedBound {
                    k: 2,
                    method: VerificationMethod::RatioCriterion,
                });
                return Ok(report);
            }
        }
    }
    Err(Error::VerificationFailed(format!(
        "no affine image of the Singer set for q={q} gives A/A = Z_{p}*"
    )))
}

/// `A = [−m, m]_*` with `m = ⌊√p⌋`.
pub fn interval_weight_set(p: u64) -> Result<ConstructionReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Err(Error::InvalidParameter("p must be odd".into()));
    }
    let m = floor_root(p, 2);
    let a = WeightSet::symmetric(p, m)?;
    let params = Parameters {
        p: Some(p),
        r: Some(m),
        ..Parameters::default()
    };
    let mut report = ConstructionReport::new("interval", params, a, 2);
    if ratio_criterion(&report.weight_set)? {
        report.verified_bound = Some(VerifiedBound {
            k: 2,
            method: VerificationMethod::RatioCriterion,
        });
    }
    let size = report.size as f64;
    let root = (p as f64).sqrt();
    if size > 2.0 * root - 1.0 {
        report
            .notes
            .push(format!("|A| = {} exceeds 2*sqrt(p) - 1 = {:.3}", report.size, 2.0 * root - 1.0));
    }
    Ok(report)
}

/// `A = ±[1, r]` in `Z_n`, with `D_A` computed exactly.
pub fn symmetric_range_weight_set(n: u64, r: u64) -> Result<ConstructionReport> {
    if r == 0 || 2 * r + 1 >= n {
        return Err(Error::InvalidParameter(format!("need 1 <= r < (n-1)/2, got r={r}, n={n}")));
    }
    let a = WeightSet::symmetric(n, r)?;
    let d = davenport(&GroupSpec::cyclic(n)?, &a, None)?.value;
    let params = Parameters {
        n: Some(n),
        r: Some(r),
        ..Parameters::default()
    };
    let mut report = ConstructionReport::new("symmetric", params, a, d);
    report.verified_bound = Some(VerifiedBound {
        k: d,
        method: VerificationMethod::Exhaustive,
    });
    Ok(report)
}

/// `B_r = Z_p ∖ {0, ±1, …, ±r}`; verified to have `D = 2` when `4r < p − 1`.
pub fn complement_weight_set(p: u64, r: u64) -> Result<ConstructionReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if 2 * r + 1 >= p {
        return Err(Error::InvalidParameter(format!("B_{r} is empty in Z_{p}")));
    }
    let a = WeightSet::new(p, r + 1..p - r)?;
    let params = Parameters {
        p: Some(p),
        r: Some(r),
        ..Parameters::default()
    };
    let mut report = ConstructionReport::new("complement", params, a, 2);
    if 4 * r < p - 1 {
        if exhaustive_holds(&report.weight_set, 2, LastLevel::Scan)? {
            report.verified_bound = Some(VerifiedBound {
                k: 2,
                method: VerificationMethod::Exhaustive,
            });
        }
    } else {
        report.notes.push("r >= (p-1)/4: no bound claimed".into());
    }
    Ok(report)
}

/// A positive rational, parsed from `"3/2"` or `"1.5"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rational {
    pub num: u64,
    pub den: u64,
}

impl Rational {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::InvalidParameter("rational must be positive".into()));
        }
        let g = arith::gcd(num, den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    fn pow4(self) -> (u128, u128) {
        ((self.num as u128).pow(4), (self.den as u128).pow(4))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("bad rational {s:?}"));
        let s = s.trim();
        if let Some((a, b)) = s.split_once('/') {
            return Rational::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        }
        match s.split_once('.') {
            Some((int, frac)) => {
                if frac.len() > 9 || !frac.bytes().all(|c| c.is_ascii_digit()) {
                    return Err(bad());
                }
                let den = 10u64.pow(frac.len() as u32);
                let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
                let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
                Rational::new(int * den + frac, den)
            }
            None => Rational::new(s.parse().map_err(|_| bad())?, 1),
        }
    }
}

#[derive(Clone, Debug)]
pub struct QuarticParams {
    pub c0: Rational,
    pub s_num: u64,
    pub s_den: u64,
    pub seed: u64,
    /// Maximum number of dilates; `⌈c0⁴/3⌉` when absent.
    pub picks: Option<usize>,
    /// Node budget for the exhaustive check.
    pub max_nodes: Option<u64>,
}

impl Default for QuarticParams {
    fn default() -> Self {
        Self {
            c0: Rational { num: 3, den: 2 },
            s_num: 1,
            s_den: 10,
            seed: 1,
            picks: None,
            max_nodes: None,
        }
    }
}

/// `(c0, seed)` pairs tried by [`quartic_with_schedule`], in order.
pub fn default_quartic_schedule() -> Vec<(Rational, u64)> {
    let c0s = [(3, 2), (2, 1), (5, 2), (3, 1)];
    c0s.iter()
        .flat_map(|&(a, b)| (1..=3).map(move |seed| (Rational { num: a, den: b }, seed)))
        .collect()
}

/// Smallest `L` with `L ≥ c0·p^{1/4}`.
fn quartic_l(p: u64, c0: Rational) -> u64 {
    let (n4, d4) = c0.pow4();
    let target = n4 * p as u128;
    let mut l = (c0.num as f64 / c0.den as f64 * (p as f64).powf(0.25)).floor().max(1.0) as u64;
    while (l as u128).pow(4) * d4 < target {
        l += 1;
    }
    while l > 1 && ((l - 1) as u128).pow(4) * d4 >= target {
        l -= 1;
    }
    l
}

/// The greedy core: returns `(L, η, J)` with `J = [1, x₁⁻¹, …]`.
pub(crate) fn quartic_greedy(p: u64, params: &QuarticParams) -> Result<(u64, u64, Vec<u64>, Vec<u64>)> {
    let c0 = params.c0;
    let l = quartic_l(p, c0);
    if params.s_den == 0 {
        return Err(Error::InvalidParameter("s denominator must be nonzero".into()));
    }
    let eta = (l * params.s_num / params.s_den).max(1);
    if 2 * l >= p || eta >= p {
        return Err(Error::InvalidParameter(format!("L={l} too large for p={p}")));
    }
    // S = [−2L, 2L]_* / [1, η]
    let pu = p as usize;
    let mut s = BitSet::new(pu);
    let inv: Vec<u64> = (1..=eta).map(|b| inv_mod(b, p).expect("p prime")).collect();
    for a in 1..=2 * l {
        for &bi in &inv {
            s.insert(mul_mod(a, bi, p) as usize);
            s.insert(mul_mod(p - a, bi, p) as usize);
        }
    }
    let members: Vec<u64> = s.ones().map(|x| x as u64).collect();
    let mut count = vec![0u64; pu];
    for &s2 in &members {
        let i2 = inv_mod(s2, p).expect("p prime");
        for &s1 in &members {
            count[mul_mod(s1, i2, p) as usize] += 1;
        }
    }
    let (n4, d4) = c0.pow4();
    let normal: Vec<u64> = (1..p).filter(|&x| 6 * count[x as usize] as u128 * d4 <= n4).collect();
    if normal.is_empty() {
        return Err(Error::ConstructionFailed("NORMAL is empty".into()));
    }
    let picks = params.picks.unwrap_or_else(|| n4.div_ceil(3 * d4) as usize).max(1);
    let dilate = |x: u64| {
        let mut out = BitSet::new(pu);
        for &m in &members {
            out.insert(mul_mod(x, m, p) as usize);
        }
        out
    };
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut chosen = vec![normal[rng.gen_range(0..normal.len())]];
    let mut inter = s.clone();
    inter.intersect_with(&dilate(chosen[0]));
    while let Some(a) = inter.first() {
        if chosen.len() >= picks {
            return Err(Error::ConstructionFailed(format!(
                "intersection still has {} elements after {} picks",
                inter.count(),
                chosen.len()
            )));
        }
        // a ∉ xS  ⟺  a·x⁻¹ ∉ S
        let candidates: Vec<u64> = normal
            .iter()
            .copied()
            .filter(|x| !chosen.contains(x))
            .filter(|&x| !s.contains(mul_mod(a as u64, inv_mod(x, p).expect("p prime"), p) as usize))
            .collect();
        if candidates.is_empty() {
            return Err(Error::ConstructionFailed(format!("no NORMAL candidate removes {a}")));
        }
        let x = candidates[rng.gen_range(0..candidates.len())];
        chosen.push(x);
        inter.intersect_with(&dilate(x));
    }
    let mut j = vec![1u64];
    j.extend(chosen.iter().map(|&x| inv_mod(x, p).expect("p prime")));
    Ok((l, eta, chosen, j))
}

/// `A = (⋃_{t∈J} t·[−L, L]) ∖ {0}`.
pub fn interval_union(p: u64, l: u64, j: &[u64]) -> Result<WeightSet> {
    WeightSet::new(
        p,
        j.iter()
            .flat_map(|&t| (1..=l).flat_map(move |i| [mul_mod(i, t, p), p - mul_mod(i, t, p)])),
    )
}

/// Interval-union weight set aimed at `D_A(Z_p) ≤ 4`.
pub fn quartic_weight_set(p: u64, params: &QuarticParams) -> Result<ConstructionReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p < 101 {
        return Err(Error::InvalidParameter("p must be at least 101".into()));
    }
    let (l, eta, chosen, j) = quartic_greedy(p, params)?;
    let a = interval_union(p, l, &j)?;
    let parameters = Parameters {
        p: Some(p),
        l: Some(l),
        eta: Some(eta),
        c0: Some(params.c0.to_string()),
        s: Some(format!("{}/{}", params.s_num, params.s_den)),
        seed: Some(params.seed),
        j: Some(j),
        ..Parameters::default()
    };
    let mut report = ConstructionReport::new("quartic", parameters, a, 4);
    report.notes.push(format!("x = {chosen:?}"));
    if p > QUARTIC_EXHAUSTIVE_LIMIT {
        report.notes.push("above exhaustive threshold; not verified".into());
        return Ok(report);
    }
    let g = GroupSpec::cyclic(p)?;
    let cfg = SearchConfig {
        max_nodes: params.max_nodes,
        ..SearchConfig::default()
    };
    let first = check_dav_at_most_with(&g, &report.weight_set, 4, &cfg)?;
    if !first.holds {
        let ce = first.counterexample.expect("failing check has a witness");
        report.notes.push(format!("zero-sum-free sequence of length 4: {:?}", ce.indices()));
        return Ok(report);
    }
    let second = exhaustive_holds(&report.weight_set, 4, LastLevel::LogDomain)?;
    if !second {
        return Err(Error::VerificationFailed("solvers disagree on D_A <= 4".into()));
    }
    report.verified_bound = Some(VerifiedBound {
        k: 4,
        method: VerificationMethod::Exhaustive,
    });
    Ok(report)
}

/// First verified report over [`default_quartic_schedule`]; the last
/// outcome is returned when none verifies.
pub fn quartic_with_schedule(p: u64, base: &QuarticParams) -> Result<ConstructionReport> {
    let mut last = Err(Error::ConstructionFailed("empty schedule".into()));
    for (c0, seed) in default_quartic_schedule() {
        let params = QuarticParams {
            c0,
            seed,
            ..base.clone()
        };
        last = quartic_weight_set(p, &params);
        if matches!(&last, Ok(r) if r.verified_bound.is_some()) {
            return last;
        }
    }
    last
}
