//! The bundled group catalog: builtin constructions plus generator data
//! files, each validated at load by an order assertion.

use std::path::{Path, PathBuf};

use num_bigint::BigUint;

use crate::builtin;
use crate::group::PermutationGroup;
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupSource {
    /// A `name:parameter` string for the builtin registry.
    Builtin(&'static str),
    /// A generator file bundled under the data directory.
    DataFile(&'static str),
}

#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub description: &'static str,
    pub source: GroupSource,
    pub degree: usize,
    pub order: u128,
    /// Marks groups in the families for which the two-graph upper bound on
    /// t(G,3) is proven, so reports need not flag it conditional.
    pub certified_two_graph: bool,
}

pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        id: "c4",
        description: "cyclic group of order 4",
        source: GroupSource::Builtin("cyclic:4"),
        degree: 4,
        order: 4,
        certified_two_graph: false,
    },
    CatalogEntry {
        id: "c5",
        description: "cyclic group of order 5",
        source: GroupSource::Builtin("cyclic:5"),
        degree: 5,
        order: 5,
        certified_two_graph: false,
    },
    CatalogEntry {
        id: "c6",
        description: "cyclic group of order 6",
        source: GroupSource::Builtin("cyclic:6"),
        degree: 6,
        order: 6,
        certified_two_graph: false,
    },
    CatalogEntry {
        id: "c7",
        description: "cyclic group of order 7",
        source: GroupSource::Builtin("cyclic:7"),
        degree: 7,
        order: 7,
        certified_two_graph: false,
    },
    CatalogEntry {
        id: "d5",
        description: "dihedral group of order 10 on 5 points",
        source: GroupSource::Builtin("dihedral:5"),
        degree: 5,
        order: 10,
        certified_two_graph: false,
    },
    CatalogEntry {
        id: "d6",
        description: "dihedral group of order 12 on 6 points",
        source: GroupSource::Builtin("dihedral:6"),
        degree: 6,
        order: 12,
        certified_two_graph: false,
    },
    CatalogEntry {
        id: "s4",
        description: "symmetric group on 4 points",
        source: GroupSource::Builtin("symmetric:4"),
        degree: 4,
        order: 24,
        certified_two_graph: false,
    },
    CatalogEntry {
        id: "s5",
        description: "symmetric group on 5 points",
        source: GroupSource::Builtin("symmetric:5"),
        degree: 5,
        order: 120,
        certified_two_graph: false,
    },
    CatalogEntry {
        id: "s6",
        description: "symmetric group on 6 points",
        source: GroupSource::Builtin("symmetric:6"),
        degree: 6,
        order: 720,
        certified_two_graph: false,
    },
    CatalogEntry {
        id: "a5",
        description: "alternating group on 5 points",
        source: GroupSource::Builtin("alternating:5"),
        degree: 5,
        order: 60,
        certified_two_graph: false,
    },
    CatalogEntry {
        id: "a6",
        description: "alternating group on 6 points",
        source: GroupSource::Builtin("alternating:6"),
        degree: 6,
        order: 360,
        certified_two_graph: false,
    },
    CatalogEntry {
        id: "agl1_7",
        description: "one-dimensional affine group AGL(1,7)",
        source: GroupSource::Builtin("agl1:7"),
        degree: 7,
        order: 42,
        certified_two_graph: false,
    },
    CatalogEntry {
        id: "agl1_8",
        description: "one-dimensional affine group AGL(1,8)",
        source: GroupSource::Builtin("agl1:8"),
        degree: 8,
        order: 56,
        certified_two_graph: false,
    },
    CatalogEntry {
        id: "psl2_7",
        description: "PSL(2,7) on the projective line (8 points)",
        source: GroupSource::Builtin("psl2:7"),
        degree: 8,
        order: 168,
        certified_two_graph: false,
    },
    CatalogEntry {
        id: "pgl2_7",
        description: "PGL(2,7) on the projective line (8 points)",
        source: GroupSource::Builtin("pgl2:7"),
        degree: 8,
        order: 336,
        certified_two_graph: false,
    },
    CatalogEntry {
        id: "psl2_11",
        description: "PSL(2,11) on the projective line (12 points)",
        source: GroupSource::Builtin("psl2:11"),
        degree: 12,
        order: 660,
        certified_two_graph: false,
    },
    CatalogEntry {
        id: "psl2_13",
        description: "PSL(2,13) on the projective line (14 points)",
        source: GroupSource::Builtin("psl2:13"),
        degree: 14,
        order: 1092,
        certified_two_graph: true,
    },
    CatalogEntry {
        id: "pgammal2_32",
        description: "PΓL(2,32) on the projective line (33 points)",
        source: GroupSource::Builtin("pgammal2:32"),
        degree: 33,
        order: 163_680,
        certified_two_graph: false,
    },
    CatalogEntry {
        id: "psl2_11_deg11",
        description: "PSL(2,11) in its transitive action on 11 points",
        source: GroupSource::DataFile("psl2_11_deg11.grp"),
        degree: 11,
        order: 660,
        certified_two_graph: false,
    },
    CatalogEntry {
        id: "m11_12",
        description: "Mathieu group M11 on 12 points",
        source: GroupSource::DataFile("m11_12.grp"),
        degree: 12,
        order: 7920,
        certified_two_graph: false,
    },
    CatalogEntry {
        id: "two4_a6",
        description: "affine group 2^4:A6 on 16 points",
        source: GroupSource::DataFile("2_4_a6_deg16.grp"),
        degree: 16,
        order: 5760,
        certified_two_graph: false,
    },
    CatalogEntry {
        id: "sp6_2",
        description: "symplectic group Sp(6,2) on 28 points",
        source: GroupSource::DataFile("sp6_2_deg28.grp"),
        degree: 28,
        order: 1_451_520,
        certified_two_graph: true,
    },
    CatalogEntry {
        id: "co3",
        description: "Conway group Co3 on 276 points",
        source: GroupSource::DataFile("co3_deg276.grp"),
        degree: 276,
        order: 495_766_656_000,
        certified_two_graph: true,
    },
    CatalogEntry {
        id: "hs",
        description: "Higman-Sims group HS on 176 points (no data bundled)",
        source: GroupSource::DataFile("hs_deg176.grp"),
        degree: 176,
        order: 44_352_000,
        certified_two_graph: false,
    },
    CatalogEntry {
        id: "sz8",
        description: "Suzuki group Sz(8) on 65 points (no data bundled)",
        source: GroupSource::DataFile("sz8_deg65.grp"),
        degree: 65,
        order: 29_120,
        certified_two_graph: false,
    },
];

pub fn entry(id: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.id == id)
}

/// The data directory: `$TRANSVERSAL_DATA_DIR`, an explicit override, or the
/// `data/` directory shipped with the crate.
pub fn data_dir(explicit: Option<&Path>) -> PathBuf {
    if let Some(p) = explicit {
        return p.to_path_buf();
    }
    if let Ok(p) = std::env::var("TRANSVERSAL_DATA_DIR") {
        return PathBuf::from(p);
    }
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

/// Loads a catalog entry, asserting the expected order for data files.
pub fn load(id: &str, data_dir_override: Option<&Path>) -> Result<PermutationGroup, Error> {
    let entry = entry(id)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown catalog id {id:?}")))?;
    load_entry(entry, data_dir_override)
}

pub fn load_entry(
    entry: &CatalogEntry,
    data_dir_override: Option<&Path>,
) -> Result<PermutationGroup, Error> {
    let group = match entry.source {
        GroupSource::Builtin(spec) => builtin::from_registry(spec)?,
        GroupSource::DataFile(name) => {
            let path = data_dir(data_dir_override).join(name);
            if !path.exists() {
                return Err(Error::GroupFile(format!(
                    "missing generator data file {}",
                    path.display()
                )));
            }
            builtin::from_file(&path)?
        }
    };
    if group.degree() != entry.degree {
        return Err(Error::GroupFile(format!(
            "{}: expected degree {}, found {}",
            entry.id,
            entry.degree,
            group.degree()
        )));
    }
    let expected = BigUint::from(entry.order);
    let order = group.order();
    if order != expected {
        return Err(Error::GroupFile(format!(
            "{}: expected order {expected}, found {order}",
            entry.id
        )));
    }
    Ok(group)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_load_with_stated_orders() {
        for entry in CATALOG {
            if let GroupSource::Builtin(_) = entry.source {
                let g = load(entry.id, None).unwrap();
                assert_eq!(g.degree(), entry.degree, "{}", entry.id);
            }
        }
    }

    #[test]
    fn bundled_data_files_load_and_validate() {
        for id in ["psl2_11_deg11", "m11_12", "two4_a6", "sp6_2", "co3"] {
            let g = load(id, None).unwrap();
            assert_eq!(g.degree(), entry(id).unwrap().degree, "{id}");
        }
    }

    #[test]
    fn missing_data_file_reports_cleanly() {
        match load("hs", None) {
            Err(Error::GroupFile(msg)) => assert!(msg.contains("missing"), "{msg}"),
            other => panic!("expected missing-file error, got {other:?}"),
        }
    }

    #[test]
    fn order_assertion_rejects_tampered_files() {
        let dir = tempfile::tempdir().unwrap();
        // A wrong generator set under the m11_12 name.
        std::fs::write(
            dir.path().join("m11_12.grp"),
            "degree 12\n(0 1 2 3 4 5 6 7 8 9 10 11)\n",
        )
        .unwrap();
        match load("m11_12", Some(dir.path())) {
            Err(Error::GroupFile(msg)) => assert!(msg.contains("order"), "{msg}"),
            other => panic!("expected order mismatch, got {other:?}"),
        }
    }
}
