//! Reachable weighted sums and residue-set algebra.
//!
//! The central object is the set of all values `Σ a_i x_i` over nonempty index
//! subsets of a sequence with weights drawn from `A`. It is computed left to
//! right with one bit-vector:
//!
//! ```text
//! R_0 = ∅
//! R_i = R_{i-1} ∪ T_i ∪ (R_{i-1} + T_i),   T_i = {a·x_i : a ∈ A}
//! ```
//!
//! In a cyclic group `R + {t}` is a rotation of the bit-vector; in product
//! groups it is an index permutation.

use serde::Serialize;

use crate::arith::{self, gcd, is_prime};
use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};
use crate::weights::WeightSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GSequence {
    group: GroupSpec,
    entries: Vec<Element>,
}

impl GSequence {
    pub fn new(group: &GroupSpec, entries: Vec<Element>) -> Result<Self> {
        for e in &entries {
            group.element_index(e)?;
        }
        Ok(Self {
            group: group.clone(),
            entries,
        })
    }

    /// Cyclic shorthand: `Z_n` entries given as residues (reduced mod `n`).
    pub fn cyclic(group: &GroupSpec, values: &[i64]) -> Result<Self> {
        if !group.is_cyclic() {
            return Err(Error::NotCyclic);
        }
        let entries = values
            .iter()
            .map(|&v| group.element_reduced(&[v]))
            .collect::<Result<_>>()?;
        Self::new(group, entries)
    }

    pub fn from_indices(group: &GroupSpec, indices: &[usize]) -> Result<Self> {
        let entries = indices
            .iter()
            .map(|&i| group.index_element(i as u64))
            .collect::<Result<_>>()?;
        Self::new(group, entries)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn entries(&self) -> &[Element] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn indices(&self) -> Vec<usize> {
        self.entries
            .iter()
            .map(|e| self.group.element_index(e).expect("validated") as usize)
            .collect()
    }

    /// `λ·x`, entrywise.
    pub fn scaled(&self, lambda: i64) -> Self {
        Self {
            group: self.group.clone(),
            entries: self
                .entries
                .iter()
                .map(|e| self.group.scalar_mul(lambda, e).expect("validated"))
                .collect(),
        }
    }

    pub fn concat(&self, other: &GSequence) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(Self {
            group: self.group.clone(),
            entries,
        })
    }
}

/// A subset of a group, as a bit-vector over element indices.
#[derive(Clone, PartialEq, Eq)]
pub struct ResidueSet {
    group: GroupSpec,
    bits: BitSet,
}

impl std::fmt::Debug for ResidueSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ResidueSet<{}>{:?}", self.group, self.bits)
    }
}

impl ResidueSet {
    pub fn empty(group: &GroupSpec) -> Result<Self> {
        let n = group.ensure_flat()?;
        Ok(Self {
            group: group.clone(),
            bits: BitSet::new(n),
        })
    }

    pub fn from_indices(
        group: &GroupSpec,
        indices: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let mut s = Self::empty(group)?;
        let n = group.order() as usize;
        for i in indices {
            if i >= n {
                return Err(Error::IndexOutOfRange {
                    index: i as u64,
                    order: n as u64,
                });
            }
            s.bits.insert(i);
        }
        Ok(s)
    }

    /// Cyclic shorthand; values are reduced modulo `n`.
    pub fn cyclic(n: u64, values: impl IntoIterator<Item = i64>) -> Result<Self> {
        let g = GroupSpec::cyclic(n)?;
        Self::from_indices(&g, values.into_iter().map(|v| arith::reduce(v, n) as usize))
    }

    pub(crate) fn from_bits(group: &GroupSpec, bits: BitSet) -> Self {
        debug_assert_eq!(bits.len() as u64, group.order());
        Self {
            group: group.clone(),
            bits,
        }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn bits(&self) -> &BitSet {
        &self.bits
    }

    pub fn contains_index(&self, i: usize) -> bool {
        i < self.bits.len() && self.bits.contains(i)
    }

    pub fn contains(&self, e: &Element) -> Result<bool> {
        Ok(self.bits.contains(self.group.element_index(e)? as usize))
    }

    pub fn contains_zero(&self) -> bool {
        self.bits.contains(0)
    }

    pub fn len(&self) -> usize {
        self.bits.count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn indices(&self) -> Vec<usize> {
        self.bits.ones().collect()
    }

    /// Members as plain residues; only meaningful for cyclic groups.
    pub fn values(&self) -> Vec<u64> {
        self.bits.ones().map(|i| i as u64).collect()
    }

    fn same_group(&self, other: &ResidueSet) -> Result<()> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        Ok(())
    }

    pub fn union(&self, other: &ResidueSet) -> Result<ResidueSet> {
        self.same_group(other)?;
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        Ok(Self::from_bits(&self.group, bits))
    }

    pub fn intersection(&self, other: &ResidueSet) -> Result<ResidueSet> {
        self.same_group(other)?;
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Ok(Self::from_bits(&self.group, bits))
    }

    /// `S ∖ {0}`.
    pub fn nonzero(&self) -> ResidueSet {
        let mut bits = self.bits.clone();
        bits.remove(0);
        Self::from_bits(&self.group, bits)
    }

    /// True when the set is exactly the nonzero elements of the group.
    pub fn is_all_nonzero(&self) -> bool {
        !self.contains_zero() && self.len() as u64 == self.group.order() - 1
    }
}

/// `out |= src + t`, where `t` is an element index.
pub(crate) fn or_translated(group: &GroupSpec, out: &mut BitSet, src: &BitSet, t: usize) {
    if group.is_cyclic() {
        out.or_rotated(src, t);
    } else {
        for i in src.ones() {
            out.insert(group.add_index(i, t));
        }
    }
}

/// `{a·x : a ∈ A}` for the element with index `x`, deduplicated.
pub(crate) fn weighted_images(group: &GroupSpec, weights: &WeightSet, x: usize) -> Vec<usize> {
    let mut out: Vec<usize> = weights
        .residues()
        .iter()
        .map(|&a| group.scalar_mul_index(a, x))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// One step of the reachable-set recurrence: `dst = src ∪ T ∪ (src + T)`.
pub(crate) fn extend_reachable(group: &GroupSpec, dst: &mut BitSet, src: &BitSet, images: &[usize]) {
    dst.copy_from(src);
    for &t in images {
        or_translated(group, dst, src, t);
        dst.insert(t);
    }
}

pub(crate) fn check_exponent(group: &GroupSpec, weights: &WeightSet) -> Result<()> {
    if weights.exponent() != group.exponent() {
        return Err(Error::ExponentMismatch {
            weights: weights.exponent(),
            group: group.exponent(),
        });
    }
    Ok(())
}

/// All values of nonempty `A`-weighted subsequence sums of `x`.
pub fn reachable_sums(group: &GroupSpec, weights: &WeightSet, x: &GSequence) -> Result<ResidueSet> {
    check_exponent(group, weights)?;
    if x.group() != group {
        return Err(Error::GroupMismatch);
    }
    let n = group.ensure_flat()?;
    let mut cur = BitSet::new(n);
    let mut next = BitSet::new(n);
    for xi in x.indices() {
        let images = weighted_images(group, weights, xi);
        extend_reachable(group, &mut next, &cur, &images);
        std::mem::swap(&mut cur, &mut next);
    }
    Ok(ResidueSet::from_bits(group, cur))
}

pub fn has_weighted_zero_sum(group: &GroupSpec, weights: &WeightSet, x: &GSequence) -> Result<bool> {
    Ok(reachable_sums(group, weights, x)?.contains_zero())
}

/// `S + T`.
pub fn sumset(s: &ResidueSet, t: &ResidueSet) -> Result<ResidueSet> {
    s.same_group(t)?;
    let mut bits = BitSet::new(s.bits.len());
    // iterate over the smaller operand
    let (small, large) = if s.len() <= t.len() { (s, t) } else { (t, s) };
    for i in small.bits.ones() {
        or_translated(&s.group, &mut bits, &large.bits, i);
    }
    Ok(ResidueSet::from_bits(&s.group, bits))
}

/// `cS = {c·s : s ∈ S}`, for any integer `c`.
pub fn dilate(c: i64, s: &ResidueSet) -> ResidueSet {
    let g = &s.group;
    let c = arith::reduce(c, g.exponent());
    let mut bits = BitSet::new(s.bits.len());
    for i in s.bits.ones() {
        bits.insert(g.scalar_mul_index(c, i));
    }
    ResidueSet::from_bits(g, bits)
}

pub fn negate(s: &ResidueSet) -> ResidueSet {
    dilate(-1, s)
}

/// `S − T`.
pub fn difference_set(s: &ResidueSet, t: &ResidueSet) -> Result<ResidueSet> {
    sumset(s, &negate(t))
}

/// `S / T = {s·t⁻¹ : s ∈ S, t ∈ T a unit}` in `Z_n`.
pub fn quotient_set(s: &ResidueSet, t: &ResidueSet) -> Result<ResidueSet> {
    s.same_group(t)?;
    let g = &s.group;
    if !g.is_cyclic() {
        return Err(Error::NotCyclic);
    }
    let n = g.order();
    let inverses: Vec<u64> = t
        .bits
        .ones()
        .filter_map(|u| arith::inv_mod(u as u64, n))
        .collect();
    if inverses.is_empty() {
        return Err(Error::NoUnit(n));
    }
    let mut bits = BitSet::new(n as usize);
    for x in s.bits.ones() {
        for &inv in &inverses {
            bits.insert(arith::mul_mod(x as u64, inv, n) as usize);
        }
    }
    Ok(ResidueSet::from_bits(g, bits))
}

/// Whether `(B − B) / (A − A)_* = Z_p`.
///
/// Whenever `|A|·|B| > p` this is always true: two distinct pairs with the
/// same value of `a + λb` would otherwise be forced by pigeonhole.
pub fn covers_observation(a: &ResidueSet, b: &ResidueSet) -> Result<bool> {
    a.same_group(b)?;
    let g = &a.group;
    if !g.is_cyclic() {
        return Err(Error::NotCyclic);
    }
    let p = g.order();
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if a.contains_zero() || b.contains_zero() {
        return Err(Error::InvalidParameter(
            "observation sets must avoid zero".into(),
        ));
    }
    let da = difference_set(a, a)?.nonzero();
    if da.is_empty() {
        return Err(Error::InvalidParameter("(A - A)_* is empty".into()));
    }
    let db = difference_set(b, b)?;
    Ok(quotient_set(&db, &da)?.len() as u64 == p)
}

/// `D_A(Z_p) ≤ 2 ⟺ A/A = Z_p*` for prime `p`.
pub fn ratio_criterion(weights: &WeightSet) -> Result<bool> {
    let p = weights.exponent();
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let a = ResidueSet::cyclic(p, weights.residues().iter().map(|&v| v as i64))?;
    Ok(quotient_set(&a, &a)?.is_all_nonzero())
}

/// The unit residues of `Z_n` as a set.
pub fn unit_set(n: u64) -> Result<ResidueSet> {
    ResidueSet::cyclic(n, (1..n).filter(|&u| gcd(u, n) == 1).map(|u| u as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(n: u64) -> GroupSpec {
        GroupSpec::cyclic(n).unwrap()
    }

    /// All `Σ a_i x_i` over `a ∈ (A ∪ {0})^m ∖ {0}`.
    fn brute_reachable(g: &GroupSpec, w: &WeightSet, x: &[usize]) -> Vec<usize> {
        let choices: Vec<u64> = std::iter::once(0).chain(w.residues().iter().copied()).collect();
        let m = x.len();
        let mut out = std::collections::BTreeSet::new();
        let total = choices.len().pow(m as u32);
        for code in 1..total {
            let mut c = code;
            let mut acc = 0usize;
            for &xi in x {
                let a = choices[c % choices.len()];
                c /= choices.len();
                acc = g.add_index(acc, g.scalar_mul_index(a, xi));
            }
            out.insert(acc);
        }
        out.into_iter().collect()
    }

    #[test]
    fn reachable_examples() {
        let g = z(5);
        let w = WeightSet::new(5, [1]).unwrap();
        let empty = GSequence::cyclic(&g, &[]).unwrap();
        assert!(reachable_sums(&g, &w, &empty).unwrap().is_empty());
        assert!(!has_weighted_zero_sum(&g, &w, &empty).unwrap());
        let x = GSequence::cyclic(&g, &[1, 1, 1]).unwrap();
        assert_eq!(reachable_sums(&g, &w, &x).unwrap().values(), vec![1, 2, 3]);

        let g7 = z(7);
        let singer = WeightSet::new(7, [2, 3, 4]).unwrap();
        for u in 1..7 {
            let x = GSequence::cyclic(&g7, &[1, u]).unwrap();
            assert!(has_weighted_zero_sum(&g7, &singer, &x).unwrap(), "u = {u}");
        }
    }

    #[test]
    fn zero_sum_examples() {
        let g = z(8);
        let pm = WeightSet::new(8, [1, 7]).unwrap();
        let x = GSequence::cyclic(&g, &[1, 2, 4]).unwrap();
        assert!(!has_weighted_zero_sum(&g, &pm, &x).unwrap());
        let x = GSequence::cyclic(&g, &[1, 2, 4, 1]).unwrap();
        assert!(has_weighted_zero_sum(&g, &pm, &x).unwrap());
        let x = GSequence::cyclic(&g, &[3, 0]).unwrap();
        assert!(has_weighted_zero_sum(&g, &pm, &x).unwrap());

        let bad = WeightSet::new(7, [1]).unwrap();
        assert!(matches!(
            reachable_sums(&g, &bad, &x),
            Err(Error::ExponentMismatch { .. })
        ));
    }

    #[test]
    fn product_group_reachable() {
        let g = GroupSpec::from_invariant_factors(vec![2, 4]).unwrap();
        let w = WeightSet::new(4, [1, 3]).unwrap();
        let x = GSequence::from_indices(&g, &[1, 4, 6]).unwrap();
        let fast = reachable_sums(&g, &w, &x).unwrap().indices();
        assert_eq!(fast, brute_reachable(&g, &w, &[1, 4, 6]));
    }

    #[test]
    fn set_algebra_examples() {
        let s = ResidueSet::cyclic(7, [1, 2]).unwrap();
        let t = ResidueSet::cyclic(7, [0, 3]).unwrap();
        assert_eq!(sumset(&s, &t).unwrap().values(), vec![1, 2, 4, 5]);
        let s = ResidueSet::cyclic(6, [1, 4]).unwrap();
        assert_eq!(dilate(2, &s).values(), vec![2]);
        let s = ResidueSet::cyclic(5, [1, 2]).unwrap();
        assert_eq!(negate(&s).values(), vec![3, 4]);
        let other = ResidueSet::cyclic(6, [1]).unwrap();
        assert_eq!(sumset(&s, &other), Err(Error::GroupMismatch));
    }

    #[test]
    fn quotient_examples() {
        let s = ResidueSet::cyclic(7, [2, 3, 4]).unwrap();
        // all nine ratios a * b^-1 mod 7
        let mut oracle: Vec<u64> = [2u64, 3, 4]
            .iter()
            .flat_map(|&a| [2u64, 3, 4].map(|b| a * arith::inv_mod(b, 7).unwrap() % 7))
            .collect();
        oracle.sort_unstable();
        oracle.dedup();
        assert_eq!(oracle, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(quotient_set(&s, &s).unwrap().values(), oracle);

        let one = ResidueSet::cyclic(5, [1]).unwrap();
        assert_eq!(quotient_set(&one, &one).unwrap().values(), vec![1]);

        let iv = ResidueSet::cyclic(13, [-3, -2, -1, 1, 2, 3]).unwrap();
        assert!(quotient_set(&iv, &iv).unwrap().is_all_nonzero());

        let nonunits = ResidueSet::cyclic(12, [2, 4]).unwrap();
        assert_eq!(quotient_set(&nonunits, &nonunits), Err(Error::NoUnit(12)));
    }

    #[test]
    fn observation_examples() {
        let a = ResidueSet::cyclic(11, [1, 2, 3, 4]).unwrap();
        let b = ResidueSet::cyclic(11, [1, 5, 9]).unwrap();
        assert!(covers_observation(&a, &b).unwrap());
        let one = ResidueSet::cyclic(7, [1]).unwrap();
        assert!(covers_observation(&one, &one).is_err());
        let iv = ResidueSet::cyclic(13, [1, 2, 3, 4]).unwrap();
        assert!(covers_observation(&iv, &iv).unwrap());
        let c = ResidueSet::cyclic(12, [1, 2]).unwrap();
        assert_eq!(covers_observation(&c, &c), Err(Error::NotPrime(12)));
    }

    #[test]
    fn ratio_criterion_small() {
        assert!(ratio_criterion(&WeightSet::new(7, [2, 3, 4]).unwrap()).unwrap());
        assert!(!ratio_criterion(&WeightSet::new(5, [1, 2]).unwrap()).unwrap());
        assert!(ratio_criterion(&WeightSet::new(5, [1, 2, 3]).unwrap()).unwrap());
    }

    fn instance() -> impl Strategy<Value = (GroupSpec, WeightSet, Vec<usize>)> {
        let groups = prop_oneof![
            (2u64..31).prop_map(|n| GroupSpec::cyclic(n).unwrap()),
            Just(GroupSpec::from_invariant_factors(vec![2, 2]).unwrap()),
            Just(GroupSpec::from_invariant_factors(vec![2, 4]).unwrap()),
            Just(GroupSpec::from_invariant_factors(vec![3, 3]).unwrap()),
            Just(GroupSpec::from_invariant_factors(vec![2, 2, 2]).unwrap()),
            Just(GroupSpec::from_invariant_factors(vec![2, 6]).unwrap()),
            Just(GroupSpec::from_invariant_factors(vec![2, 14]).unwrap()),
        ];
        groups.prop_flat_map(|g| {
            let n = g.exponent();
            let order = g.order() as usize;
            (
                Just(g),
                proptest::collection::btree_set(1..n, 1..=4usize.min(n as usize - 1)),
                proptest::collection::vec(0..order, 0..=4),
            )
                .prop_map(move |(g, w, x)| (g, WeightSet::new(n, w).unwrap(), x))
        })
    }

    proptest! {
        #[test]
        fn matches_brute_force((g, w, x) in instance()) {
            let seq = GSequence::from_indices(&g, &x).unwrap();
            let fast = reachable_sums(&g, &w, &seq).unwrap().indices();
            prop_assert_eq!(fast, brute_reachable(&g, &w, &x));
        }

        #[test]
        fn monotone_and_permutation_invariant((g, w, x) in instance(), extra in 0usize..1000) {
            let seq = GSequence::from_indices(&g, &x).unwrap();
            let base = reachable_sums(&g, &w, &seq).unwrap();
            let y = GSequence::from_indices(&g, &[extra % g.order() as usize]).unwrap();
            let ext = reachable_sums(&g, &w, &seq.concat(&y).unwrap()).unwrap();
            prop_assert!(base.bits().is_subset(ext.bits()));
            let mut rev = x.clone();
            rev.reverse();
            let r = reachable_sums(&g, &w, &GSequence::from_indices(&g, &rev).unwrap()).unwrap();
            prop_assert_eq!(r, base);
        }

        #[test]
        fn scaling_equivariance((g, w, x) in instance(), l in 1u64..1000) {
            let n = g.exponent();
            let units = arith::units(n);
            let lambda = units[(l as usize) % units.len()];
            let seq = GSequence::from_indices(&g, &x).unwrap();
            let base = reachable_sums(&g, &w, &seq).unwrap();
            let scaled_seq = reachable_sums(&g, &w, &seq.scaled(lambda as i64)).unwrap();
            let scaled_w = reachable_sums(&g, &w.dilate(lambda).unwrap(), &seq).unwrap();
            let expected = dilate(lambda as i64, &base);
            prop_assert_eq!(&scaled_seq, &expected);
            prop_assert_eq!(&scaled_w, &expected);
        }
    }

    #[test]
    fn permutation_invariance_exhaustive() {
        use itertools::Itertools;
        for n in [6u64, 7, 12, 20] {
            let g = z(n);
            let w = WeightSet::new(n, [1, n - 2]).unwrap();
            let x = [1usize, 2, 3, (n - 1) as usize, 5];
            let base = reachable_sums(&g, &w, &GSequence::from_indices(&g, &x).unwrap()).unwrap();
            for perm in x.iter().copied().permutations(x.len()) {
                let r = reachable_sums(&g, &w, &GSequence::from_indices(&g, &perm).unwrap()).unwrap();
                assert_eq!(r, base);
            }
        }
    }
}
