//! Exact computation of weighted Davenport constants `D_A(G)` over finite
//! abelian groups, the minimum weight-set size `f_G(k)` with `D_A(G) ≤ k`,
//! explicit weight-set constructions, and random-weight threshold sweeps.

pub mod arith;
pub mod bits;
pub mod constructions;
pub mod davenport;
pub mod engine;
pub mod error;
pub mod fd;
pub mod gf;
pub mod group;
pub mod orbit;
pub mod random_lab;
pub mod search;
pub mod verify;
pub mod weights;

pub use constructions::{ConstructionReport, QuarticParams, Rational};
pub use davenport::{
    check_dav_at_most, davenport, max_davenport_over_size, BoundedCheckResult, DavenportResult, DualMaxResult,
};
pub use engine::{GSequence, ResidueSet};
pub use error::{Error, Result};
pub use fd::{fd, fd_fast_k2, fd_lower_bound, FdResult, FdStatus};
pub use group::{normalize_group, Element, GroupSpec, UnitScalar};
pub use random_lab::{threshold_sweep, SweepConfig, SweepReport, SweepRow};
pub use search::{LastLevel, SearchConfig};
pub use weights::{parse_weight_list, WeightSet};
