//! Machine-readable reports. One JSON schema covers every subcommand; the
//! field layout is documented in `schema/report.json` at the repository
//! root, and reports round-trip losslessly through serde.

use serde::{Deserialize, Serialize};

use crate::bounds::BoundReport;
use crate::group::PermutationGroup;
use crate::partition::PartialPartition;
use crate::perm::Point;
use crate::subset::KSubsetOrbits;
use crate::ut::{revalidate_witness, ThresholdResult, ThresholdValue, UtResult, Witness};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct WitnessJson {
    /// Orbit id together with its lexicographically least member.
    pub orbit: OrbitRef,
    /// Blocks of the failing partition, each sorted ascending.
    pub blocks: Vec<Vec<Point>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct OrbitRef {
    pub id: u32,
    pub representative: Vec<Point>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct BoundsJson {
    pub lower: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper: Option<usize>,
    /// Provenance, aligned with (lower, upper): e.g. ["two-graph", "exact-search"].
    pub sources: Vec<String>,
    pub conditional: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ThresholdJson {
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<usize>,
    /// "exact", "no-threshold", or "undecided".
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<(usize, usize)>,
    pub method: String,
}

/// The single report shape shared by the subcommands; sections that do not
/// apply stay absent.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq, Default)]
pub struct Report {
    pub degree: usize,
    /// Decimal string: group orders overflow every fixed-width integer.
    pub order: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<ThresholdJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transitive: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primitive: Option<bool>,
    /// k values (within the analysis bound) on which the group is
    /// transitive on k-subsets.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homogeneity: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbital_valencies: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regular: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<StatsJson>,
    pub timing_ms: u128,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq, Default)]
pub struct StatsJson {
    pub b_representatives: u64,
    pub partitions_checked: u64,
    pub partitions_pruned: u64,
    pub work_units: u64,
}

impl Report {
    pub fn for_group(group: &PermutationGroup, name: Option<String>) -> Report {
        Report {
            degree: group.degree(),
            order: group.order().to_string(),
            group: name,
            ..Report::default()
        }
    }
}

pub fn witness_json(orbits: &KSubsetOrbits, witness: &Witness) -> WitnessJson {
    WitnessJson {
        orbit: OrbitRef {
            id: witness.orbit_id,
            representative: orbits.orbit(witness.orbit_id).min_member().to_vec(),
        },
        blocks: witness.partition.blocks().to_vec(),
    }
}

pub fn attach_ut(report: &mut Report, orbits: &KSubsetOrbits, result: &UtResult) {
    report.holds = Some(result.holds);
    report.witness = result.witness.as_ref().map(|w| witness_json(orbits, w));
    report.stats = Some(StatsJson {
        b_representatives: result.stats.b_representatives,
        partitions_checked: result.stats.partitions_checked,
        partitions_pruned: result.stats.partitions_pruned,
        work_units: result.stats.work_units,
    });
}

pub fn threshold_json(result: &ThresholdResult) -> ThresholdJson {
    let (value, status, interval) = match result.value {
        ThresholdValue::Exact(t) => (Some(t), "exact", None),
        ThresholdValue::NoThreshold => (None, "no-threshold", None),
        ThresholdValue::Undecided { lo, hi } => (None, "undecided", Some((lo, hi))),
    };
    ThresholdJson {
        k: result.k,
        value,
        status: status.to_string(),
        interval,
        method: result.method.as_str().to_string(),
    }
}

pub fn bounds_json(report: &BoundReport) -> BoundsJson {
    let mut sources = vec![report.lower.source.as_str().to_string()];
    if let Some(u) = report.upper {
        sources.push(u.source.as_str().to_string());
    }
    BoundsJson {
        lower: report.lower.value,
        upper: report.upper.map(|u| u.value),
        sources,
        conditional: report.conditional,
    }
}

/// Re-validates a serialized witness against a freshly computed orbit
/// structure: the orbit representative must identify the same orbit and no
/// member may cross the partition.
pub fn check_witness(
    orbits: &KSubsetOrbits,
    witness: &WitnessJson,
) -> Result<bool, crate::Error> {
    let rep = &witness.orbit.representative;
    if rep.len() != orbits.k {
        return Err(crate::Error::InvalidArgument(
            "witness representative has the wrong size".into(),
        ));
    }
    let id = orbits.orbit_id(rep);
    if id != witness.orbit.id {
        return Ok(false);
    }
    let partition = PartialPartition::new(witness.blocks.clone())?;
    Ok(revalidate_witness(
        orbits,
        &Witness {
            orbit_id: id,
            partition,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::subset::k_subset_orbits;
    use crate::ut::has_kl_ut;
    use crate::Limits;

    #[test]
    fn report_round_trips_through_json() {
        let limits = Limits::default();
        let g = builtin::cyclic(5).unwrap();
        let res = has_kl_ut(&g, 3, 4, &limits).unwrap();
        let orbits = k_subset_orbits(&g, 3, &limits).unwrap();
        let mut report = Report::for_group(&g, Some("cyclic:5".into()));
        report.k = Some(3);
        report.l = Some(4);
        attach_ut(&mut report, &orbits, &res);
        report.timing_ms = 12;
        let text = serde_json::to_string_pretty(&report).unwrap();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(report, back);
    }

    #[test]
    fn serialized_witness_revalidates() {
        let limits = Limits::default();
        let g = builtin::cyclic(5).unwrap();
        let res = has_kl_ut(&g, 3, 4, &limits).unwrap();
        let orbits = k_subset_orbits(&g, 3, &limits).unwrap();
        let wj = witness_json(&orbits, res.witness.as_ref().unwrap());
        assert!(check_witness(&orbits, &wj).unwrap());
        // Corrupt the blocks: a partition every orbit crosses.
        let bad = WitnessJson {
            orbit: wj.orbit.clone(),
            blocks: vec![vec![0], vec![1], vec![2, 3, 4]],
        };
        assert!(!check_witness(&orbits, &bad).unwrap());
    }
}
