//! Finite abelian groups in invariant-factor form.
//!
//! A group is stored as its chain `n_1 | n_2 | ... | n_s`. Elements are
//! coordinate vectors, and every element also has a flat index in
//! `[0, |G|)` computed in mixed radix with the *last* invariant factor as the
//! fastest-varying digit. Bit-vector layouts throughout the crate depend on
//! this ordering: in `Z_2 x Z_3`, `(1, 2)` has index `1*3 + 2 = 5`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{self, gcd, reduce};
use crate::error::{Error, Result};

/// Default ceiling on `|G|` for anything that allocates a flat set.
pub const DEFAULT_ORDER_LIMIT: u64 = 1_000_000;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct GroupSpec {
    factors: Vec<u64>,
    order: u64,
    strides: Vec<u64>,
}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupSpec({self})")
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(u64::to_string).collect();
        f.write_str(&parts.join("x"))
    }
}

impl TryFrom<Vec<u64>> for GroupSpec {
    type Error = Error;

    fn try_from(factors: Vec<u64>) -> Result<Self> {
        GroupSpec::from_invariant_factors(factors)
    }
}

impl From<GroupSpec> for Vec<u64> {
    fn from(g: GroupSpec) -> Self {
        g.factors
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Parses `12`, `3x3`, `2x4` and normalizes the product.
    fn from_str(s: &str) -> Result<Self> {
        let orders = s
            .split(['x', 'X', '*'])
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidGroup(format!("cannot parse `{t}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        normalize_group(&orders)
    }
}

/// Canonical invariant-factor decomposition of `Z_{o_1} x ... x Z_{o_r}`.
pub fn normalize_group(orders: &[u64]) -> Result<GroupSpec> {
    normalize_group_with_limit(orders, DEFAULT_ORDER_LIMIT)
}

pub fn normalize_group_with_limit(orders: &[u64], limit: u64) -> Result<GroupSpec> {
    if orders.is_empty() {
        return Err(Error::InvalidGroup("no factors given".into()));
    }
    if let Some(&bad) = orders.iter().find(|&&o| o < 2) {
        return Err(Error::InvalidGroup(format!("factor {bad} < 2")));
    }
    let order = orders.iter().fold(1u64, |a, &o| a.saturating_mul(o));
    if order > limit {
        return Err(Error::GroupTooLarge { order, limit });
    }

    // Elementary divisors grouped by prime, largest powers first.
    let mut by_prime: Vec<(u64, Vec<u64>)> = Vec::new();
    for &o in orders {
        for (p, e) in arith::factorize(o) {
            let pp = p.pow(e);
            match by_prime.iter_mut().find(|(q, _)| *q == p) {
                Some((_, v)) => v.push(pp),
                None => by_prime.push((p, vec![pp])),
            }
        }
    }
    let rank = by_prime.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
    let mut chain = vec![1u64; rank];
    for (_, mut powers) in by_prime {
        powers.sort_unstable_by(|a, b| b.cmp(a));
        for (slot, pp) in powers.into_iter().enumerate() {
            chain[rank - 1 - slot] *= pp;
        }
    }
    GroupSpec::from_invariant_factors(chain)
}

impl GroupSpec {
    /// Builds a group from a chain that must already satisfy `n_i | n_{i+1}`.
    pub fn from_invariant_factors(factors: Vec<u64>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidGroup("trivial group".into()));
        }
        if let Some(&bad) = factors.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidGroup(format!("factor {bad} < 2")));
        }
        if let Some(w) = factors.windows(2).find(|w| w[1] % w[0] != 0) {
            return Err(Error::InvalidGroup(format!(
                "{} does not divide {}",
                w[0], w[1]
            )));
        }
        let order = factors
            .iter()
            .try_fold(1u64, |acc, &o| acc.checked_mul(o))
            .ok_or_else(|| Error::InvalidGroup("order overflows".into()))?;
        let mut strides = vec![1u64; factors.len()];
        for i in (0..factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * factors[i + 1];
        }
        Ok(Self {
            factors,
            order,
            strides,
        })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::from_invariant_factors(vec![n])
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponent(&self) -> u64 {
        *self.factors.last().expect("nonempty chain")
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() == 1
    }

    /// `Some(p)` when the group is `Z_p^s` for a prime `p`.
    pub fn elementary_prime(&self) -> Option<u64> {
        let p = self.factors[0];
        (arith::is_prime(p) && self.factors.iter().all(|&n| n == p)).then_some(p)
    }

    /// `Some(p)` when the group is cyclic of prime order.
    pub fn prime_cyclic(&self) -> Option<u64> {
        (self.is_cyclic() && arith::is_prime(self.exponent())).then(|| self.exponent())
    }

    pub(crate) fn ensure_flat(&self) -> Result<usize> {
        if self.order > DEFAULT_ORDER_LIMIT {
            return Err(Error::GroupTooLarge {
                order: self.order,
                limit: DEFAULT_ORDER_LIMIT,
            });
        }
        Ok(self.order as usize)
    }

    pub fn zero(&self) -> Element {
        Element {
            coords: vec![0; self.rank()],
        }
    }

    /// Validates raw coordinates.
    pub fn element(&self, coords: Vec<u64>) -> Result<Element> {
        self.check(&coords)?;
        Ok(Element { coords })
    }

    /// Reduces arbitrary signed coordinates into range.
    pub fn element_reduced(&self, coords: &[i64]) -> Result<Element> {
        if coords.len() != self.rank() {
            return Err(Error::CoordinateMismatch {
                expected: self.rank(),
                got: coords.len(),
            });
        }
        Ok(Element {
            coords: coords
                .iter()
                .zip(&self.factors)
                .map(|(&c, &n)| reduce(c, n))
                .collect(),
        })
    }

    fn check(&self, coords: &[u64]) -> Result<()> {
        if coords.len() != self.rank() {
            return Err(Error::CoordinateMismatch {
                expected: self.rank(),
                got: coords.len(),
            });
        }
        for (&c, &n) in coords.iter().zip(&self.factors) {
            if c >= n {
                return Err(Error::CoordinateOutOfRange {
                    value: c,
                    modulus: n,
                });
            }
        }
        Ok(())
    }

    pub fn add(&self, g: &Element, h: &Element) -> Result<Element> {
        self.check(&g.coords)?;
        self.check(&h.coords)?;
        Ok(Element {
            coords: g
                .coords
                .iter()
                .zip(&h.coords)
                .zip(&self.factors)
                .map(|((&a, &b), &n)| (a + b) % n)
                .collect(),
        })
    }

    /// `c * g`; negative `c` acts through the inverse.
    pub fn scalar_mul(&self, c: i64, g: &Element) -> Result<Element> {
        self.check(&g.coords)?;
        Ok(Element {
            coords: g
                .coords
                .iter()
                .zip(&self.factors)
                .map(|(&x, &n)| arith::mul_mod(reduce(c, n), x, n))
                .collect(),
        })
    }

    pub fn is_zero(&self, g: &Element) -> Result<bool> {
        self.check(&g.coords)?;
        Ok(g.coords.iter().all(|&c| c == 0))
    }

    /// Order of `g` as a group element.
    pub fn element_order(&self, g: &Element) -> u64 {
        g.coords
            .iter()
            .zip(&self.factors)
            .map(|(&c, &n)| n / gcd(c, n))
            .fold(1, num_integer::lcm)
    }

    pub fn element_index(&self, g: &Element) -> Result<u64> {
        self.check(&g.coords)?;
        Ok(g.coords.iter().zip(&self.strides).map(|(c, s)| c * s).sum())
    }

    pub fn index_element(&self, i: u64) -> Result<Element> {
        if i >= self.order {
            return Err(Error::IndexOutOfRange {
                index: i,
                order: self.order,
            });
        }
        Ok(Element {
            coords: self
                .strides
                .iter()
                .zip(&self.factors)
                .map(|(&s, &n)| (i / s) % n)
                .collect(),
        })
    }

    // Unchecked index arithmetic for the kernels.

    #[inline]
    pub(crate) fn add_index(&self, i: usize, j: usize) -> usize {
        if self.is_cyclic() {
            let n = self.order as usize;
            let s = i + j;
            return if s >= n { s - n } else { s };
        }
        let mut out = 0u64;
        for (&s, &n) in self.strides.iter().zip(&self.factors) {
            let a = (i as u64 / s) % n;
            let b = (j as u64 / s) % n;
            out += ((a + b) % n) * s;
        }
        out as usize
    }

    #[inline]
    pub(crate) fn neg_index(&self, i: usize) -> usize {
        self.scalar_mul_index(self.exponent() - 1, i)
    }

    #[inline]
    pub(crate) fn scalar_mul_index(&self, c: u64, i: usize) -> usize {
        if self.is_cyclic() {
            return arith::mul_mod(c, i as u64, self.order) as usize;
        }
        let mut out = 0u64;
        for (&s, &n) in self.strides.iter().zip(&self.factors) {
            let a = (i as u64 / s) % n;
            out += arith::mul_mod(c % n, a, n) * s;
        }
        out as usize
    }
}

/// Mixed-radix index with the last radix varying fastest.
pub fn mixed_radix_index(radices: &[u64], coords: &[u64]) -> u64 {
    radices
        .iter()
        .zip(coords)
        .fold(0, |acc, (&n, &c)| acc * n + c)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element {
    coords: Vec<u64>,
}

impl Element {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            write!(f, "{}", self.coords[0])
        } else {
            let parts: Vec<String> = self.coords.iter().map(u64::to_string).collect();
            write!(f, "({})", parts.join(","))
        }
    }
}

/// A unit of `Z_{exp(G)}`, hence an automorphism of `G` by scaling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct UnitScalar {
    value: u64,
    modulus: u64,
}

impl UnitScalar {
    pub fn new(value: u64, modulus: u64) -> Result<Self> {
        if value == 0 || value >= modulus || gcd(value, modulus) != 1 {
            return Err(Error::InvalidParameter(format!(
                "{value} is not a unit modulo {modulus}"
            )));
        }
        Ok(Self { value, modulus })
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn inverse(self) -> Self {
        let inv = arith::inv_mod(self.value, self.modulus).expect("unit");
        Self {
            value: inv,
            modulus: self.modulus,
        }
    }

    pub fn all(modulus: u64) -> impl Iterator<Item = UnitScalar> {
        arith::units(modulus)
            .into_iter()
            .map(move |value| UnitScalar { value, modulus })
    }
}
