//! Benchmark fixtures shared by the criterion targets.

use zsweight::{GroupSpec, WeightSet};

/// `(Z_p, A)` pairs used across the kernel benches.
pub fn prime_fixture(p: u64, weights: &[u64]) -> (GroupSpec, WeightSet) {
    (
        GroupSpec::cyclic(p).expect("valid modulus"),
        WeightSet::new(p, weights.iter().copied()).expect("valid weights"),
    )
}
