//! The cubic extension `GF(q³)` and Singer perfect difference sets.

use serde::Serialize;

use crate::arith::{factorize, is_prime};
use crate::error::{Error, Result};

/// `c0 + c1·x + c2·x²`.
pub type Gf3 = [u64; 3];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GfCubicField {
    q: u64,
    /// `[m0, m1, m2]` for the modulus `x³ + m2·x² + m1·x + m0`.
    reduction_poly: [u64; 3],
}

impl GfCubicField {
    /// Built from the lexicographically first irreducible monic cubic, with
    /// coefficients compared in the order `(m2, m1, m0)`.
    pub fn new(q: u64) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        for m2 in 0..q {
            for m1 in 0..q {
                for m0 in 1..q {
                    let poly = [m0, m1, m2];
                    if !(0..q).any(|x| eval(q, poly, x) == 0) {
                        return Ok(Self { q, reduction_poly: poly });
                    }
                }
            }
        }
        Err(Error::VerificationFailed(format!("no irreducible cubic over Z_{q}")))
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn reduction_poly(&self) -> [u64; 3] {
        self.reduction_poly
    }

    pub fn one(&self) -> Gf3 {
        [1, 0, 0]
    }

    pub fn mul(&self, a: Gf3, b: Gf3) -> Gf3 {
        let q = self.q;
        let mut c = [0u64; 5];
        for i in 0..3 {
            for j in 0..3 {
                c[i + j] = (c[i + j] + a[i] * b[j]) % q;
            }
        }
        // x³ = -(m2 x² + m1 x + m0)
        for d in (3..5).rev() {
            let top = c[d];
            if top == 0 {
                continue;
            }
            c[d] = 0;
            for (k, &m) in self.reduction_poly.iter().enumerate() {
                let idx = d - 3 + k;
                c[idx] = (c[idx] + q - (top * m) % q) % q;
            }
        }
        [c[0], c[1], c[2]]
    }

    pub fn pow(&self, mut base: Gf3, mut exp: u64) -> Gf3 {
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn multiplicative_order(&self) -> u64 {
        self.q.pow(3) - 1
    }

    pub fn is_primitive(&self, a: Gf3) -> bool {
        let m = self.multiplicative_order();
        a != [0, 0, 0]
            && self.pow(a, m) == self.one()
            && factorize(m)
                .iter()
                .all(|&(r, _)| self.pow(a, m / r) != self.one())
    }

    /// Smallest primitive element under the encoding `c0 + c1·q + c2·q²`.
    pub fn primitive_element(&self) -> Gf3 {
        let q = self.q;
        (1..q.pow(3))
            .map(|e| [e % q, (e / q) % q, e / (q * q)])
            .find(|&a| self.is_primitive(a))
            .expect("a finite field has a primitive element")
    }
}

fn eval(q: u64, [m0, m1, m2]: [u64; 3], x: u64) -> u64 {
    (((x + m2) % q * x % q + m1) % q * x % q + m0) % q
}

/// A subset of `Z_v` in which every nonzero residue is a difference of
/// exactly one ordered pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerfectDifferenceSet {
    v: u64,
    elements: Vec<u64>,
}

impl PerfectDifferenceSet {
    pub fn new(v: u64, elements: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut elements: Vec<u64> = elements.into_iter().map(|d| d % v.max(1)).collect();
        elements.sort_unstable();
        elements.dedup();
        if v < 2 {
            return Err(Error::InvalidParameter("v must be at least 2".into()));
        }
        if let Some(bad) = difference_census(v, &elements).iter().skip(1).position(|&c| c != 1) {
            return Err(Error::VerificationFailed(format!(
                "residue {} is not a unique difference in Z_{v}",
                bad + 1
            )));
        }
        Ok(Self { v, elements })
    }

    pub fn v(&self) -> u64 {
        self.v
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    /// `t·D + s`, again a perfect difference set when `gcd(t, v) = 1`.
    pub fn affine_image(&self, t: u64, s: u64) -> Result<Self> {
        let v = self.v;
        Self::new(v, self.elements.iter().map(|&d| ((d as u128 * t as u128 + s as u128) % v as u128) as u64))
    }
}

/// `census[g] = #{(d, d′) : d − d′ = g}`.
pub fn difference_census(v: u64, elements: &[u64]) -> Vec<u64> {
    let mut census = vec![0u64; v as usize];
    for &a in elements {
        for &b in elements {
            census[((a + v - b) % v) as usize] += 1;
        }
    }
    census
}

/// The Singer set for prime `q`: exponents `i < q²+q+1` for which `γ^i` has
/// no `x²` term.
pub fn singer_difference_set(q: u64) -> Result<PerfectDifferenceSet> {
    let field = GfCubicField::new(q)?;
    let gamma = field.primitive_element();
    let v = q * q + q + 1;
    let mut cur = field.one();
    let mut d = Vec::new();
    for i in 0..v {
        if cur[2] == 0 {
            d.push(i);
        }
        cur = field.mul(cur, gamma);
    }
    PerfectDifferenceSet::new(v, d).map_err(|e| match e {
        Error::VerificationFailed(m) => Error::VerificationFailed(format!("Singer set for q={q}: {m}")),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_small() {
        for q in [2u64, 3, 5] {
            let f = GfCubicField::new(q).unwrap();
            let g = f.primitive_element();
            let m = f.multiplicative_order();
            assert_eq!(f.pow(g, m), f.one());
            // γ generates: all q³-1 powers distinct
            let mut seen = std::collections::HashSet::new();
            let mut cur = f.one();
            for _ in 0..m {
                assert!(seen.insert(cur));
                cur = f.mul(cur, g);
            }
            assert_eq!(cur, f.one());
        }
    }

    #[test]
    fn first_irreducible_cubics() {
        assert_eq!(GfCubicField::new(2).unwrap().reduction_poly(), [1, 1, 0]);
        assert_eq!(GfCubicField::new(3).unwrap().reduction_poly(), [1, 2, 0]);
        assert_eq!(GfCubicField::new(4).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn singer_sets() {
        for q in [2u64, 3, 5, 7, 11, 13, 17] {
            let d = singer_difference_set(q).unwrap();
            assert_eq!(d.v(), q * q + q + 1);
            assert_eq!(d.elements().len() as u64, q + 1);
            let census = difference_census(d.v(), d.elements());
            assert_eq!(census[0], q + 1);
            assert!(census[1..].iter().all(|&c| c == 1));
        }
    }

    #[test]
    fn known_planar_sets_up_to_affinity() {
        // q=3: {0,1,3,9}
        let target = PerfectDifferenceSet::new(13, [0, 1, 3, 9]).unwrap();
        let d = singer_difference_set(3).unwrap();
        let hit = (1..13u64).any(|t| (0..13).any(|s| target.affine_image(t, s).unwrap() == d));
        assert!(hit);
        assert!(PerfectDifferenceSet::new(7, [1, 2, 4]).is_ok());
        assert!(matches!(
            PerfectDifferenceSet::new(7, [0, 1, 2]),
            Err(Error::VerificationFailed(_))
        ));
    }
}
