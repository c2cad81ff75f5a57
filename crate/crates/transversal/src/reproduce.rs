//! Expected-value suites: recompute the bundled reference results and report
//! PASS / FAIL / SKIPPED per row. Skipped rows display the reference value
//! but never count as passes.

use std::path::Path;
use std::time::Instant;

use crate::bounds;
use crate::catalog;
use crate::field::field_condition;
use crate::subset::k_subset_orbits;
use crate::ut::{threshold, ThresholdValue};
use crate::{Error, Limits};

/// What a row asserts about its group.
#[derive(Debug, Clone, Copy)]
pub enum Expected {
    /// t(G,k) computed by exact search equals `t`.
    ThresholdExact { k: usize, t: usize },
    /// The exact threshold lies in [lo, hi]; the computed value is printed.
    ThresholdWithin { k: usize, lo: usize, hi: usize },
    /// Orbits on 3-subsets form two regular two-graphs with these values.
    TwoGraph { lambda: u64, lambda_prime: u64 },
    /// The two-graph interval for t(G,3).
    TwoGraphInterval { lo: usize, hi: usize },
    /// The smallest regular invariant k-uniform hypergraph gives this
    /// lower bound n - d_k + 1.
    HypergraphLower { k: usize, bound: usize },
    /// Multiplicative generation condition over GF(q).
    FieldCondition { q: u64, holds: bool },
    /// Not reproducible at desk scale; displayed for reference only.
    OutOfReach { what: &'static str },
}

#[derive(Debug, Clone, Copy)]
pub struct ExpectedRow {
    /// Catalog id, or "-" for rows not tied to a group.
    pub group: &'static str,
    pub expected: Expected,
    /// Where the reference value comes from.
    pub provenance: &'static str,
}

pub const SUITES: &[(&str, &[ExpectedRow])] = &[
    ("core-small", CORE_SMALL),
    ("bounds-large", BOUNDS_LARGE),
    ("field-conditions", FIELD_CONDITIONS),
];

pub const CORE_SMALL: &[ExpectedRow] = &[
    ExpectedRow {
        group: "c5",
        expected: Expected::ThresholdExact { k: 3, t: 5 },
        provenance: "classification of 3-ut groups (literature value)",
    },
    ExpectedRow {
        group: "d5",
        expected: Expected::ThresholdExact { k: 3, t: 5 },
        provenance: "classification of 3-ut groups (literature value)",
    },
    ExpectedRow {
        group: "agl1_7",
        expected: Expected::ThresholdExact { k: 3, t: 6 },
        provenance: "classification of 3-ut groups (literature value)",
    },
    ExpectedRow {
        group: "psl2_11_deg11",
        expected: Expected::ThresholdExact { k: 3, t: 9 },
        provenance: "classification of 3-ut groups (literature value)",
    },
    ExpectedRow {
        group: "two4_a6",
        expected: Expected::ThresholdExact { k: 3, t: 11 },
        provenance: "classification of 3-ut groups (literature value)",
    },
    ExpectedRow {
        group: "pgl2_7",
        expected: Expected::ThresholdExact { k: 4, t: 7 },
        provenance: "classification of 4-ut groups (literature value)",
    },
    ExpectedRow {
        group: "agl1_7",
        expected: Expected::ThresholdExact { k: 4, t: 7 },
        provenance: "classification of 4-ut groups (literature value)",
    },
    ExpectedRow {
        group: "m11_12",
        expected: Expected::ThresholdExact { k: 4, t: 10 },
        provenance: "classification of 4-ut groups (literature value)",
    },
    ExpectedRow {
        group: "psl2_13",
        expected: Expected::ThresholdWithin { k: 3, lo: 9, hi: 10 },
        provenance: "two-graph interval (q+5)/2 ≤ t ≤ (3q+11)/5 at q = 13; the exact value 9 was first computed by this crate",
    },
];

pub const BOUNDS_LARGE: &[ExpectedRow] = &[
    ExpectedRow {
        group: "psl2_13",
        expected: Expected::TwoGraph { lambda: 6, lambda_prime: 6 },
        provenance: "two-graph parameters λ = λ' = (q-1)/2 (Taylor's tables)",
    },
    ExpectedRow {
        group: "psl2_13",
        expected: Expected::TwoGraphInterval { lo: 9, hi: 10 },
        provenance: "interval (q+5)/2 ≤ t ≤ (3q+11)/5 at q = 13",
    },
    ExpectedRow {
        group: "two4_a6",
        expected: Expected::TwoGraph { lambda: 6, lambda_prime: 8 },
        provenance: "two-graph parameters 2^(2d-1)-2, 2^(2d-1) at d = 2 (Taylor's tables)",
    },
    ExpectedRow {
        group: "sp6_2",
        expected: Expected::TwoGraph { lambda: 10, lambda_prime: 16 },
        provenance: "two-graph parameters 2^(2d-2), 2^(2d-2)±2^(d-1)-2 at d = 3 (Taylor's tables)",
    },
    ExpectedRow {
        group: "sp6_2",
        expected: Expected::TwoGraphInterval { lo: 19, hi: 19 },
        provenance: "pinned interval: the 3λ/2 cut is the stronger one here",
    },
    ExpectedRow {
        group: "co3",
        expected: Expected::TwoGraph { lambda: 112, lambda_prime: 162 },
        provenance: "two-graph parameters of the 276-point regular two-graph (Taylor's tables)",
    },
    ExpectedRow {
        group: "co3",
        expected: Expected::TwoGraphInterval { lo: 165, hi: 169 },
        provenance: "interval λ'+3 ≤ t ≤ ⌊(6λ'+9)/5⌋+1",
    },
    ExpectedRow {
        group: "co3",
        expected: Expected::OutOfReach {
            what: "exact t(G,3): search over S(l,3) partitions at degree 276",
        },
        provenance: "interval [165,169] is the best published information",
    },
    ExpectedRow {
        group: "pgammal2_32",
        expected: Expected::HypergraphLower { k: 5, bound: 30 },
        provenance: "smallest regular invariant 5-uniform hypergraph, derived here; matches the published t = 30",
    },
    ExpectedRow {
        group: "pgammal2_32",
        expected: Expected::OutOfReach {
            what: "exact t(G,5) = 30 (published): S(30,5) partitions are out of reach",
        },
        provenance: "published threshold value shown for reference",
    },
    ExpectedRow {
        group: "hs",
        expected: Expected::HypergraphLower { k: 3, bound: 165 },
        provenance: "published lower bound 165 ≤ t(G,3) ≤ 176",
    },
    ExpectedRow {
        group: "sz8",
        expected: Expected::HypergraphLower { k: 3, bound: 45 },
        provenance: "published lower bound 45 ≤ t(G,3) ≤ 65",
    },
];

pub const FIELD_CONDITIONS: &[ExpectedRow] = &[
    ExpectedRow {
        group: "-",
        expected: Expected::FieldCondition { q: 7, holds: true },
        provenance: "matches AGL(1,7) having the 3-ut property",
    },
    ExpectedRow {
        group: "-",
        expected: Expected::FieldCondition { q: 11, holds: true },
        provenance: "q ≡ 11 mod 12 candidate family",
    },
    ExpectedRow {
        group: "-",
        expected: Expected::FieldCondition { q: 23, holds: true },
        provenance: "q ≡ 11 mod 12 candidate family; frozen after first derivation",
    },
    ExpectedRow {
        group: "-",
        expected: Expected::FieldCondition { q: 8, holds: true },
        provenance: "q = 2^p candidate family; multiplicative order 7 is prime",
    },
    ExpectedRow {
        group: "-",
        expected: Expected::FieldCondition { q: 32, holds: true },
        provenance: "q = 2^p candidate family; multiplicative order 31 is prime",
    },
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowStatus {
    Pass,
    Fail,
    Skipped(String),
}

#[derive(Debug, Clone)]
pub struct RowOutcome {
    pub group: &'static str,
    pub label: String,
    pub expected: String,
    pub computed: String,
    pub status: RowStatus,
    pub provenance: &'static str,
    pub millis: u128,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub rows: Vec<RowOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.status != RowStatus::Fail)
    }
}

pub fn suite(name: &str) -> Option<&'static [ExpectedRow]> {
    SUITES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, rows)| *rows)
}

pub fn run_suite(
    name: &str,
    limits: &Limits,
    data_dir: Option<&Path>,
) -> Result<SuiteReport, Error> {
    let rows = suite(name)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {name:?}")))?;
    let mut outcomes = Vec::new();
    for row in rows {
        outcomes.push(run_row(row, limits, data_dir));
    }
    Ok(SuiteReport {
        suite: name.to_string(),
        rows: outcomes,
    })
}

fn run_row(row: &ExpectedRow, limits: &Limits, data_dir: Option<&Path>) -> RowOutcome {
    let start = Instant::now();
    let mut outcome = |label: String, expected: String, computed: String, status: RowStatus| {
        RowOutcome {
            group: row.group,
            label,
            expected,
            computed,
            status,
            provenance: row.provenance,
            millis: start.elapsed().as_millis(),
        }
    };

    let load = |id: &str| -> Result<crate::PermutationGroup, Error> {
        catalog::load(id, data_dir)
    };

    match row.expected {
        Expected::ThresholdExact { k, t } => {
            let label = format!("t({}, {k})", row.group);
            let group = match load(row.group) {
                Ok(g) => g,
                Err(e) => {
                    return outcome(label, t.to_string(), "-".into(), RowStatus::Skipped(e.to_string()))
                }
            };
            match threshold(&group, k, limits) {
                Ok(res) => match res.value {
                    ThresholdValue::Exact(v) => {
                        let status = if v == t { RowStatus::Pass } else { RowStatus::Fail };
                        outcome(label, t.to_string(), v.to_string(), status)
                    }
                    other => outcome(
                        label,
                        t.to_string(),
                        format!("{other:?}"),
                        RowStatus::Fail,
                    ),
                },
                Err(Error::BudgetExceeded { context, .. }) => outcome(
                    label,
                    t.to_string(),
                    "-".into(),
                    RowStatus::Skipped(format!("budget: {context}")),
                ),
                Err(e) => outcome(label, t.to_string(), format!("error: {e}"), RowStatus::Fail),
            }
        }
        Expected::ThresholdWithin { k, lo, hi } => {
            let label = format!("t({}, {k}) ∈ [{lo},{hi}]", row.group);
            let group = match load(row.group) {
                Ok(g) => g,
                Err(e) => {
                    return outcome(label, format!("[{lo},{hi}]"), "-".into(), RowStatus::Skipped(e.to_string()))
                }
            };
            match threshold(&group, k, limits) {
                Ok(res) => match res.value {
                    ThresholdValue::Exact(v) => {
                        let status = if lo <= v && v <= hi {
                            RowStatus::Pass
                        } else {
                            RowStatus::Fail
                        };
                        outcome(label, format!("[{lo},{hi}]"), v.to_string(), status)
                    }
                    other => outcome(
                        label,
                        format!("[{lo},{hi}]"),
                        format!("{other:?}"),
                        RowStatus::Fail,
                    ),
                },
                Err(Error::BudgetExceeded { context, .. }) => outcome(
                    label,
                    format!("[{lo},{hi}]"),
                    "-".into(),
                    RowStatus::Skipped(format!("budget: {context}")),
                ),
                Err(e) => outcome(
                    label,
                    format!("[{lo},{hi}]"),
                    format!("error: {e}"),
                    RowStatus::Fail,
                ),
            }
        }
        Expected::TwoGraph { lambda, lambda_prime } => {
            let label = format!("two-graph(λ, λ') of {}", row.group);
            let expected = format!("({lambda}, {lambda_prime})");
            let group = match load(row.group) {
                Ok(g) => g,
                Err(e) => return outcome(label, expected, "-".into(), RowStatus::Skipped(e.to_string())),
            };
            match bounds::two_graph_params(&group, limits) {
                Ok(p) => {
                    let computed = format!("({}, {})", p.lambda, p.lambda_prime);
                    let status = if (p.lambda, p.lambda_prime) == (lambda, lambda_prime) {
                        RowStatus::Pass
                    } else {
                        RowStatus::Fail
                    };
                    outcome(label, expected, computed, status)
                }
                Err(e) => outcome(label, expected, format!("error: {e}"), RowStatus::Fail),
            }
        }
        Expected::TwoGraphInterval { lo, hi } => {
            let label = format!("two-graph interval for t({}, 3)", row.group);
            let expected = format!("[{lo},{hi}]");
            let certified = catalog::entry(row.group).is_some_and(|e| e.certified_two_graph);
            let group = match load(row.group) {
                Ok(g) => g,
                Err(e) => return outcome(label, expected, "-".into(), RowStatus::Skipped(e.to_string())),
            };
            match bounds::three_ut_bounds(&group, certified, limits) {
                Ok(rep) => {
                    let upper = rep.upper.map(|u| u.value).unwrap_or(group.degree());
                    let computed = format!("[{},{}]", rep.lower.value, upper);
                    let status = if rep.lower.value == lo && upper == hi {
                        RowStatus::Pass
                    } else {
                        RowStatus::Fail
                    };
                    outcome(label, expected, computed, status)
                }
                Err(e) => outcome(label, expected, format!("error: {e}"), RowStatus::Fail),
            }
        }
        Expected::HypergraphLower { k, bound } => {
            let label = format!("hypergraph lower bound for t({}, {k})", row.group);
            let expected = format!("{bound} ≤ t");
            let group = match load(row.group) {
                Ok(g) => g,
                Err(e) => return outcome(label, expected, "-".into(), RowStatus::Skipped(e.to_string())),
            };
            match k_subset_orbits(&group, k, limits) {
                Ok(orbits) => {
                    let (b, _) = bounds::lower_bound_hypergraph(&orbits);
                    let status = if b == bound { RowStatus::Pass } else { RowStatus::Fail };
                    outcome(label, expected, format!("{b} ≤ t"), status)
                }
                Err(Error::BudgetExceeded { context, .. }) => outcome(
                    label,
                    expected,
                    "-".into(),
                    RowStatus::Skipped(format!("budget: {context}")),
                ),
                Err(e) => outcome(label, expected, format!("error: {e}"), RowStatus::Fail),
            }
        }
        Expected::FieldCondition { q, holds } => {
            let label = format!("field condition at q = {q}");
            match field_condition(q) {
                Ok(rep) => {
                    let status = if rep.holds == holds { RowStatus::Pass } else { RowStatus::Fail };
                    outcome(label, holds.to_string(), rep.holds.to_string(), status)
                }
                Err(e) => outcome(label, holds.to_string(), format!("error: {e}"), RowStatus::Fail),
            }
        }
        Expected::OutOfReach { what } => outcome(
            format!("{}: {what}", row.group),
            "-".into(),
            "-".into(),
            RowStatus::Skipped("not reproducible at desk scale".into()),
        ),
    }
}
