//! Transversal properties of finite permutation groups.
//!
//! Given a permutation group `G` on `{0, …, n-1}`, this crate decides whether
//! `G` has the (k,l)-universal transversal property — for every k-subset `A`,
//! every l-subset `B`, and every partition of `B` into `k` blocks, some image
//! of `A` under `G` meets each block exactly once — and computes the threshold
//! `t(G,k)`: the least `l` from which the property holds through `l = n`.
//!
//! On top of the exact decision procedure sit closed forms for `k ∈ {1,2}`,
//! lower/upper bounds from invariant hypergraphs and regular two-graphs, and
//! a bridge to semigroup theory: `⟨G,t⟩` is regular for every partial
//! transformation `t` of rank `k` on a domain of size `l` exactly when the
//! (k,l)-ut property holds (for `k` in the supported range).
//!
//! Entry points:
//! - [`group::PermutationGroup`] and the [`builtin`] constructors / file format
//! - [`ut::has_kl_ut`], [`ut::threshold`] and the `k ∈ {1,2}` fast paths
//! - [`bounds::bound_report`] for threshold intervals with provenance
//! - [`semigroup`] for partial transformations and regularity checks
//! - [`reproduce`] for the bundled expected-value suites
//!
//! The `transversal` binary exposes the same operations as subcommands; see
//! the crate examples for library usage.

pub mod bounds;
pub mod builtin;
pub mod catalog;
pub mod cli;
pub mod field;
pub mod graph;
pub mod group;
pub mod partition;
pub mod perm;
pub mod report;
pub mod reproduce;
pub mod semigroup;
pub mod subset;
pub mod ut;

use num_bigint::BigUint;

pub use group::PermutationGroup;
pub use perm::{Permutation, Point};

/// Resource budgets shared across the search routines. Exceeding a budget is
/// reported as an explicit error, never silently degraded.
#[derive(Debug, Clone)]
pub struct Limits {
    /// Cap on subset-orbit enumeration (number of k-subsets or set images).
    pub max_orbit: u64,
    /// Cap on per-probe work: transversal-test units, roughly orbit members
    /// times partitions.
    pub max_work: u128,
    /// Largest group order that may be enumerated element by element.
    pub scan_cap: usize,
    /// Cap on semigroup closure size.
    pub closure_cap: usize,
    /// Partition enumeration is pruned by the setwise stabilizer of the
    /// support once the stabilizer order exceeds this.
    pub stab_prune_threshold: u64,
    /// Largest stabilizer that will be enumerated for partition pruning.
    pub stab_prune_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_orbit: 10_000_000,
            max_work: 10_000_000,
            scan_cap: 100_000,
            closure_cap: 1_000_000,
            stab_prune_threshold: 3,
            stab_prune_cap: 20_000,
        }
    }
}

/// Errors reported by this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("image table is not a bijection")]
    NotAPermutation,
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("a group needs at least one generator")]
    EmptyGeneratorList,
    #[error("cycle notation: {0}")]
    CycleSyntax(String),
    #[error("group order {order} exceeds the cap {cap}")]
    OrderTooLarge { cap: usize, order: BigUint },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported field size {0}: need a prime or a power of two")]
    UnsupportedFieldSize(u64),
    #[error("group file: {0}")]
    GroupFile(String),
    #[error("partial transformation: {0}")]
    PartialMapSyntax(String),
    #[error("work estimate {estimate} exceeds budget {budget}: {context}")]
    BudgetExceeded {
        estimate: u128,
        budget: u128,
        context: String,
    },
    #[error("group is not transitive")]
    NotTransitive,
    #[error("group is not primitive, so no (2,l)-ut threshold exists")]
    NotPrimitive,
    #[error("{0}")]
    Inapplicable(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
