//! Dilation orbits of weight sets.
//!
//! `D_{λA}(G) = D_A(G)` for every unit `λ` of `Z_n`, so weight-set searches
//! only visit one representative per orbit: the lexicographically smallest
//! sorted tuple among `{sort(λA mod n)}`.

use itertools::Itertools;

use crate::arith::{self, gcd, mul_mod};

fn dilated(n: u64, set: &[u64], lambda: u64, buf: &mut Vec<u64>) {
    buf.clear();
    buf.extend(set.iter().map(|&a| mul_mod(a, lambda, n)));
    buf.sort_unstable();
}

/// All distinct sorted images `λA`, ascending.
pub fn dilation_orbit(n: u64, set: &[u64]) -> Vec<Vec<u64>> {
    let mut buf = Vec::new();
    let mut out: Vec<Vec<u64>> = arith::units(n)
        .into_iter()
        .map(|l| {
            dilated(n, set, l, &mut buf);
            buf.clone()
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

pub fn canonical_rep(n: u64, set: &[u64]) -> Vec<u64> {
    dilation_orbit(n, set).swap_remove(0)
}

/// Cheap necessary condition first: the smallest member of a representative
/// equals the smallest `gcd(a, n)` over the set (any `a` can be scaled to its
/// gcd), then the full comparison against every dilation.
pub(crate) fn is_rep_with(n: u64, sorted: &[u64], units: &[u64], buf: &mut Vec<u64>) -> bool {
    let min_gcd = sorted.iter().map(|&a| gcd(a, n)).min().unwrap_or(0);
    if sorted.first() != Some(&min_gcd) {
        return false;
    }
    units.iter().skip(1).all(|&l| {
        dilated(n, sorted, l, buf);
        buf.as_slice() >= sorted
    })
}

pub fn is_rep(n: u64, sorted: &[u64]) -> bool {
    is_rep_with(n, sorted, &arith::units(n), &mut Vec::new())
}

/// Orbit representatives of size-`size` subsets of `[1, n-1]`, in
/// lexicographic order.
pub fn orbit_representatives(n: u64, size: usize) -> impl Iterator<Item = Vec<u64>> {
    let units = arith::units(n);
    let mut buf = Vec::new();
    (1..n)
        .combinations(size)
        .filter(move |c| is_rep_with(n, c, &units, &mut buf))
}
