//! The (k,l)-universal transversal decision and threshold computation.
//!
//! A group `G` on n points has the (k,l)-ut property when, for every orbit
//! `O` on k-subsets and every partition `P` of every l-subset into k blocks,
//! some member of `O` meets each block of `P` in exactly one point. The
//! property is monotone in `l`, which makes the threshold `t(G,k)` a binary
//! search over exact decisions.
//!
//! Symmetry pruning: l-subsets are enumerated as complements of (n-l)-subset
//! orbit representatives, and partitions of a representative may further be
//! reduced modulo the setwise stabilizer of the representative.

use rayon::prelude::*;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use crate::graph::{is_primitive, orbital_graphs};
use crate::group::PermutationGroup;
use crate::partition::{stirling2, PartialPartition, Partitions};
use crate::perm::Point;
use crate::subset::{k_subset_orbits, setwise_stabilizer, Bitset, KSubset, KSubsetOrbits};
use crate::{Error, Limits};

/// Counters describing how much of the search space a decision examined.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UtStats {
    pub b_representatives: u64,
    pub partitions_checked: u64,
    pub partitions_pruned: u64,
    /// Transversal-test units: orbit members scanned plus block products
    /// enumerated. This is the quantity capped by `Limits::max_work`.
    pub work_units: u64,
}

impl UtStats {
    fn absorb(&mut self, other: &UtStats) {
        self.b_representatives += other.b_representatives;
        self.partitions_checked += other.partitions_checked;
        self.partitions_pruned += other.partitions_pruned;
        self.work_units += other.work_units;
    }
}

/// A certificate that the property fails: no member of the orbit is a
/// transversal of the partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub orbit_id: u32,
    pub partition: PartialPartition,
}

#[derive(Debug, Clone)]
pub struct UtResult {
    pub holds: bool,
    pub witness: Option<Witness>,
    pub stats: UtStats,
}

impl UtResult {
    fn pass(stats: UtStats) -> UtResult {
        UtResult {
            holds: true,
            witness: None,
            stats,
        }
    }

    fn fail(witness: Witness, stats: UtStats) -> UtResult {
        UtResult {
            holds: false,
            witness: Some(witness),
            stats,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdMethod {
    ClosedFormK1,
    ClosedFormK2,
    Search,
    HomogeneousFastPath,
}

impl ThresholdMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            ThresholdMethod::ClosedFormK1 => "closed-form-k1",
            ThresholdMethod::ClosedFormK2 => "closed-form-k2",
            ThresholdMethod::Search => "search",
            ThresholdMethod::HomogeneousFastPath => "homogeneous-fast-path",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThresholdValue {
    /// (k,l)-ut holds exactly for l in [t, n].
    Exact(usize),
    /// Even (k,n)-ut fails, so no threshold exists.
    NoThreshold,
    /// The budget ran out; the threshold lies in [lo, hi].
    Undecided { lo: usize, hi: usize },
}

#[derive(Debug, Clone)]
pub struct ThresholdResult {
    pub k: usize,
    pub value: ThresholdValue,
    pub method: ThresholdMethod,
    /// Witnesses collected from failed probes, by l.
    pub failures: Vec<(usize, Witness)>,
}

/// True iff the group has a single orbit on k-subsets.
pub fn is_k_homogeneous(
    group: &PermutationGroup,
    k: usize,
    limits: &Limits,
) -> Result<bool, Error> {
    Ok(k_subset_orbits(group, k, limits)?.count() == 1)
}

/// Finds an orbit member that is a transversal of the partition, if any.
///
/// Two strategies, chosen by estimated cost: scan the orbit members against
/// the partition blocks, or enumerate one-point-per-block products and test
/// orbit membership.
pub fn has_transversal(
    orbits: &KSubsetOrbits,
    orbit_id: u32,
    partition: &PartialPartition,
) -> Option<KSubset> {
    let orbit = orbits.orbit(orbit_id);
    debug_assert_eq!(orbits.k, partition.block_count());
    let product_cost: u128 = partition
        .blocks()
        .iter()
        .map(|b| b.len() as u128)
        .product();
    if (orbit.size() as u128) <= product_cost {
        let blocks: Vec<Bitset> = partition
            .blocks()
            .iter()
            .map(|b| Bitset::from_points(orbits.n, b))
            .collect();
        for member in orbit.members() {
            let mask = Bitset::from_points(orbits.n, member);
            if blocks.iter().all(|b| b.intersection_size(&mask) == 1) {
                return Some(KSubset::from_slice(member));
            }
        }
        None
    } else {
        product_transversal(orbits, orbit_id, partition.blocks())
    }
}

/// Enumerates one point per block and looks each candidate up in the orbit
/// index.
fn product_transversal(
    orbits: &KSubsetOrbits,
    orbit_id: u32,
    blocks: &[Vec<Point>],
) -> Option<KSubset> {
    let k = blocks.len();
    let mut choice = vec![0usize; k];
    loop {
        let mut candidate: KSubset = (0..k).map(|i| blocks[i][choice[i]]).collect();
        candidate.sort_unstable();
        if orbits.orbit_id(&candidate) == orbit_id {
            return Some(candidate);
        }
        // Odometer increment.
        let mut i = 0;
        loop {
            if i == k {
                return None;
            }
            choice[i] += 1;
            if choice[i] < blocks[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Checks a failure witness by exhaustive scan: no member of the orbit may
/// be a transversal of the partition.
pub fn revalidate_witness(orbits: &KSubsetOrbits, witness: &Witness) -> bool {
    let orbit = orbits.orbit(witness.orbit_id);
    let blocks: Vec<Bitset> = witness
        .partition
        .blocks()
        .iter()
        .map(|b| Bitset::from_points(orbits.n, b))
        .collect();
    orbit.members().all(|member| {
        let mask = Bitset::from_points(orbits.n, member);
        !blocks.iter().all(|b| b.intersection_size(&mask) == 1)
    })
}

/// Position permutations of the sorted support induced by the setwise
/// stabilizer, used to skip partitions equivalent to an earlier one.
struct PartitionPruner {
    /// For each stabilizer element, `inv_pos[j]` is the support position
    /// mapped onto position `j`.
    inv_positions: Vec<Vec<u8>>,
}

impl PartitionPruner {
    fn build(
        group: &PermutationGroup,
        support: &[Point],
        limits: &Limits,
    ) -> Option<PartitionPruner> {
        let stab = setwise_stabilizer(group, support, limits).ok()?;
        let order = stab.order_u128()?;
        if order <= limits.stab_prune_threshold as u128
            || order > limits.stab_prune_cap as u128
        {
            return None;
        }
        let elements = stab.elements(limits.stab_prune_cap).ok()?;
        let pos_of = |p: Point| support.binary_search(&p).expect("stabilizer preserves support");
        let mut inv_positions = Vec::with_capacity(elements.len());
        for e in &elements {
            if e.is_identity() {
                continue;
            }
            let mut inv = vec![0u8; support.len()];
            for (j, &p) in support.iter().enumerate() {
                // e maps support[i] to p at position j ⇔ inv[j] = i.
                inv[pos_of(e.apply(p))] = j as u8;
            }
            inv_positions.push(inv);
        }
        (!inv_positions.is_empty()).then_some(PartitionPruner { inv_positions })
    }

    /// True when some stabilizer element sends the partition to a
    /// lexicographically smaller restricted growth string.
    fn is_redundant(&self, rgs: &[u8]) -> bool {
        let m = rgs.len();
        let mut image = vec![0u8; m];
        let mut relabel = vec![u8::MAX; m + 1];
        for inv in &self.inv_positions {
            relabel.iter_mut().for_each(|x| *x = u8::MAX);
            let mut next = 0u8;
            let mut smaller = false;
            for j in 0..m {
                let raw = rgs[inv[j] as usize];
                let lbl = if relabel[raw as usize] == u8::MAX {
                    relabel[raw as usize] = next;
                    next += 1;
                    relabel[raw as usize]
                } else {
                    relabel[raw as usize]
                };
                image[j] = lbl;
                if lbl != rgs[j] {
                    smaller = lbl < rgs[j];
                    break;
                }
            }
            if smaller {
                return true;
            }
        }
        false
    }
}

/// Decides the (k,l)-universal transversal property exactly.
pub fn has_kl_ut(
    group: &PermutationGroup,
    k: usize,
    l: usize,
    limits: &Limits,
) -> Result<UtResult, Error> {
    let n = group.degree();
    if k < 1 || k > l || l > n {
        return Err(Error::InvalidArgument(format!(
            "need 1 ≤ k ≤ l ≤ n, got k={k} l={l} n={n}"
        )));
    }
    if k == n {
        // Only l = n is possible and the whole domain is the transversal.
        return Ok(UtResult::pass(UtStats::default()));
    }
    let orbits = k_subset_orbits(group, k, limits)?;
    if k == l {
        // (k,k)-ut is k-homogeneity.
        if orbits.count() == 1 {
            return Ok(UtResult::pass(UtStats::default()));
        }
        // Honest witness: the singleton partition of a subset from a second
        // orbit is only ever crossed by that subset itself.
        let foreign = orbits.orbit(1).min_member().to_vec();
        let partition =
            PartialPartition::new(foreign.iter().map(|&p| vec![p]).collect()).expect("singletons");
        return Ok(UtResult::fail(
            Witness {
                orbit_id: 0,
                partition,
            },
            UtStats::default(),
        ));
    }

    let partitions_per_b = stirling2(l, k);
    if partitions_per_b > limits.max_work {
        return Err(Error::BudgetExceeded {
            estimate: partitions_per_b,
            budget: limits.max_work,
            context: format!("S({l},{k}) partitions per l-subset"),
        });
    }

    // Representatives of the G-orbits on l-subsets, via complements.
    let reps: Vec<Vec<Point>> = if l == n {
        vec![(0..n as Point).collect()]
    } else {
        let co = k_subset_orbits(group, n - l, limits)?;
        let mut reps: Vec<Vec<Point>> = co
            .orbits()
            .iter()
            .map(|orbit| {
                orbit
                    .members()
                    .map(|m| {
                        let inside = Bitset::from_points(n, m);
                        (0..n as Point).filter(|&p| !inside.contains(p)).collect::<Vec<Point>>()
                    })
                    .min()
                    .expect("orbits are non-empty")
            })
            .collect();
        reps.sort();
        reps
    };

    let work = AtomicU64::new(0);
    let overrun = AtomicBool::new(false);
    let outcomes: Vec<(usize, Result<Option<Witness>, Error>, UtStats)> = reps
        .par_iter()
        .enumerate()
        .map(|(idx, b)| {
            let (res, stats) = examine_representative(
                group, &orbits, b, k, limits, &work, &overrun,
            );
            (idx, res, stats)
        })
        .collect();

    let mut stats = UtStats::default();
    let mut first_failure: Option<(usize, Witness)> = None;
    let mut budget_error: Option<Error> = None;
    for (idx, res, s) in outcomes {
        stats.absorb(&s);
        match res {
            Ok(Some(w)) => {
                if first_failure.as_ref().is_none_or(|(i, _)| idx < *i) {
                    first_failure = Some((idx, w));
                }
            }
            Ok(None) => {}
            Err(e) => budget_error = Some(e),
        }
    }
    stats.b_representatives = reps.len() as u64;
    if let Some((_, w)) = first_failure {
        // A failure stands regardless of budget overruns elsewhere.
        return Ok(UtResult::fail(w, stats));
    }
    if let Some(e) = budget_error {
        return Err(e);
    }
    Ok(UtResult::pass(stats))
}

fn examine_representative(
    group: &PermutationGroup,
    orbits: &KSubsetOrbits,
    b: &[Point],
    k: usize,
    limits: &Limits,
    work: &AtomicU64,
    overrun: &AtomicBool,
) -> (Result<Option<Witness>, Error>, UtStats) {
    let n = orbits.n;
    let mut stats = UtStats::default();

    // Bucket the k-subsets of B by orbit: these are the only candidate
    // transversals, since a transversal of a partition of B lies inside B.
    let mut members_in_b: Vec<Vec<Bitset>> = vec![Vec::new(); orbits.count()];
    for subset in SubsetsOf::new(b, k) {
        let id = orbits.orbit_id(&subset) as usize;
        members_in_b[id].push(Bitset::from_points(n, &subset));
    }

    let pruner = PartitionPruner::build(group, b, limits);
    let mut blocks_mask: Vec<Bitset> = Vec::new();
    let mut partitions = Partitions::new(b, k);
    while let Some(partition) = partitions.next() {
        if overrun.load(Ordering::Relaxed) {
            return (
                Err(Error::BudgetExceeded {
                    estimate: work.load(Ordering::Relaxed) as u128,
                    budget: limits.max_work,
                    context: "work cap hit while examining representatives".into(),
                }),
                stats,
            );
        }
        if let Some(p) = &pruner {
            if p.is_redundant(partitions.rgs()) {
                stats.partitions_pruned += 1;
                continue;
            }
        }
        stats.partitions_checked += 1;
        blocks_mask.clear();
        blocks_mask.extend(
            partition
                .blocks()
                .iter()
                .map(|blk| Bitset::from_points(n, blk)),
        );
        for orbit in orbits.orbits() {
            let bucket = &members_in_b[orbit.id as usize];
            let product_cost: u128 = partition
                .blocks()
                .iter()
                .map(|blk| blk.len() as u128)
                .product();
            let found = if (bucket.len() as u128) <= product_cost {
                stats.work_units += bucket.len() as u64;
                bucket
                    .iter()
                    .any(|m| blocks_mask.iter().all(|blk| blk.intersection_size(m) == 1))
            } else {
                stats.work_units += product_cost as u64;
                product_transversal(orbits, orbit.id, partition.blocks()).is_some()
            };
            if !found {
                return (
                    Ok(Some(Witness {
                        orbit_id: orbit.id,
                        partition,
                    })),
                    stats,
                );
            }
        }
        if stats.work_units as u128 > limits.max_work
            || work.load(Ordering::Relaxed) as u128 > limits.max_work
        {
            work.fetch_add(stats.work_units, Ordering::Relaxed);
            overrun.store(true, Ordering::Relaxed);
            return (
                Err(Error::BudgetExceeded {
                    estimate: stats.work_units as u128,
                    budget: limits.max_work,
                    context: "transversal-test work cap".into(),
                }),
                stats,
            );
        }
    }
    work.fetch_add(stats.work_units, Ordering::Relaxed);
    (Ok(None), stats)
}

/// Iterator over the k-subsets of a fixed sorted point list.
struct SubsetsOf {
    points: Vec<Point>,
    indices: Vec<usize>,
    k: usize,
    done: bool,
}

impl SubsetsOf {
    fn new(points: &[Point], k: usize) -> SubsetsOf {
        SubsetsOf {
            points: points.to_vec(),
            indices: (0..k).collect(),
            k,
            done: k > points.len(),
        }
    }
}

impl Iterator for SubsetsOf {
    type Item = KSubset;

    fn next(&mut self) -> Option<KSubset> {
        if self.done {
            return None;
        }
        let out: KSubset = self.indices.iter().map(|&i| self.points[i]).collect();
        // Advance the index vector.
        let m = self.points.len();
        let k = self.k;
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.indices[i] + 1 <= m - (k - i) {
                self.indices[i] += 1;
                for j in i + 1..k {
                    self.indices[j] = self.indices[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Threshold for k = 1: `n - d + 1` where d is the smallest orbit size.
pub fn t1(group: &PermutationGroup) -> ThresholdResult {
    let n = group.degree();
    let d = group
        .point_orbits()
        .iter()
        .map(|o| o.len())
        .min()
        .unwrap_or(1);
    ThresholdResult {
        k: 1,
        value: ThresholdValue::Exact(n - d + 1),
        method: ThresholdMethod::ClosedFormK1,
        failures: Vec::new(),
    }
}

/// Threshold for k = 2: `n - d + 1` where d is the smallest orbital-graph
/// valency. Requires a primitive group; otherwise even (2,n)-ut fails.
pub fn t2(group: &PermutationGroup) -> Result<ThresholdResult, Error> {
    if !is_primitive(group) {
        return Err(Error::NotPrimitive);
    }
    let n = group.degree();
    if n < 2 {
        return Err(Error::InvalidArgument(
            "k = 2 needs degree at least 2".into(),
        ));
    }
    let d = orbital_graphs(group)
        .iter()
        .map(|g| g.valency.expect("primitive groups are transitive"))
        .min()
        .unwrap_or(n - 1);
    Ok(ThresholdResult {
        k: 2,
        value: ThresholdValue::Exact(n - d + 1),
        method: ThresholdMethod::ClosedFormK2,
        failures: Vec::new(),
    })
}

/// The threshold t(G,k): binary search over the monotone predicate
/// l ↦ (k,l)-ut, with the boundary double-checked on both sides.
pub fn threshold(
    group: &PermutationGroup,
    k: usize,
    limits: &Limits,
) -> Result<ThresholdResult, Error> {
    let n = group.degree();
    if k < 1 || k > n {
        return Err(Error::InvalidArgument(format!(
            "k = {k} out of range for degree {n}"
        )));
    }
    if is_k_homogeneous(group, k, limits)? {
        return Ok(ThresholdResult {
            k,
            value: ThresholdValue::Exact(k),
            method: ThresholdMethod::HomogeneousFastPath,
            failures: Vec::new(),
        });
    }
    let mut failures: Vec<(usize, Witness)> = Vec::new();
    let mut probes: std::collections::BTreeMap<usize, bool> = std::collections::BTreeMap::new();
    let mut budget_hit = false;
    {
        let probe = |l: usize,
                         failures: &mut Vec<(usize, Witness)>,
                         probes: &mut std::collections::BTreeMap<usize, bool>|
         -> Result<Option<bool>, Error> {
            if let Some(&r) = probes.get(&l) {
                return Ok(Some(r));
            }
            match has_kl_ut(group, k, l, limits) {
                Ok(res) => {
                    probes.insert(l, res.holds);
                    if let Some(w) = res.witness {
                        failures.push((l, w));
                    }
                    Ok(Some(res.holds))
                }
                Err(Error::BudgetExceeded { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        };

        // (k,k)-ut is homogeneity, known false here.
        probes.insert(k, false);
        match probe(n, &mut failures, &mut probes)? {
            Some(false) => {
                return Ok(ThresholdResult {
                    k,
                    value: ThresholdValue::NoThreshold,
                    method: ThresholdMethod::Search,
                    failures,
                });
            }
            Some(true) => {}
            None => budget_hit = true,
        }
        if !budget_hit {
            let mut lo = k; // fails
            let mut hi = n; // holds
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                match probe(mid, &mut failures, &mut probes)? {
                    Some(true) => hi = mid,
                    Some(false) => lo = mid,
                    None => {
                        budget_hit = true;
                        break;
                    }
                }
            }
            if !budget_hit {
                // Boundary double-check: t holds, t-1 fails.
                let holds_at_t = probe(hi, &mut failures, &mut probes)?;
                let fails_below = if hi - 1 == k {
                    Some(false)
                } else {
                    probe(hi - 1, &mut failures, &mut probes)?
                };
                match (holds_at_t, fails_below) {
                    (Some(true), Some(false)) => {
                        return Ok(ThresholdResult {
                            k,
                            value: ThresholdValue::Exact(hi),
                            method: ThresholdMethod::Search,
                            failures,
                        });
                    }
                    (Some(_), Some(_)) => unreachable!("monotonicity violated"),
                    _ => budget_hit = true,
                }
            }
        }
    }
    debug_assert!(budget_hit);
    let lo = probes
        .iter()
        .filter(|&(_, &holds)| !holds)
        .map(|(&l, _)| l + 1)
        .max()
        .unwrap_or(k);
    let hi = probes
        .iter()
        .filter(|&(_, &holds)| holds)
        .map(|(&l, _)| l)
        .min()
        .unwrap_or(n);
    Ok(ThresholdResult {
        k,
        value: ThresholdValue::Undecided { lo, hi },
        method: ThresholdMethod::Search,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn symmetric_groups_always_hold() {
        let g = builtin::symmetric(6).unwrap();
        for k in 1..=6 {
            for l in k..=6 {
                assert!(has_kl_ut(&g, k, l, &limits()).unwrap().holds, "k={k} l={l}");
            }
        }
    }

    #[test]
    fn cyclic_5_fails_3_4_with_replayable_witness() {
        let g = builtin::cyclic(5).unwrap();
        let res = has_kl_ut(&g, 3, 4, &limits()).unwrap();
        assert!(!res.holds);
        let w = res.witness.expect("failing result carries a witness");
        let orbits = k_subset_orbits(&g, 3, &limits()).unwrap();
        assert!(revalidate_witness(&orbits, &w));
        // And the decision flips at l = 5 = n.
        assert!(has_kl_ut(&g, 3, 5, &limits()).unwrap().holds);
    }

    #[test]
    fn agl1_7_switches_between_l5_and_l6() {
        let g = builtin::agl1(7).unwrap();
        assert!(!has_kl_ut(&g, 3, 5, &limits()).unwrap().holds);
        assert!(has_kl_ut(&g, 3, 6, &limits()).unwrap().holds);
    }

    #[test]
    fn homogeneity_cases() {
        assert!(is_k_homogeneous(&builtin::symmetric(7).unwrap(), 3, &limits()).unwrap());
        assert!(!is_k_homogeneous(&builtin::cyclic(5).unwrap(), 2, &limits()).unwrap());
        // PGL(2,7) is 3-transitive on 8 points: one orbit of size 56.
        let g = builtin::pgl2(7).unwrap();
        let orbits = k_subset_orbits(&g, 3, &limits()).unwrap();
        assert_eq!(orbits.count(), 1);
        assert_eq!(orbits.orbit(0).size(), 56);
    }

    #[test]
    fn k_equals_n_is_unconditional() {
        let g = builtin::cyclic(4).unwrap();
        assert!(has_kl_ut(&g, 4, 4, &limits()).unwrap().holds);
    }

    #[test]
    fn argument_validation() {
        let g = builtin::cyclic(5).unwrap();
        assert!(has_kl_ut(&g, 3, 2, &limits()).is_err());
        assert!(has_kl_ut(&g, 0, 2, &limits()).is_err());
        assert!(has_kl_ut(&g, 2, 6, &limits()).is_err());
    }

    #[test]
    fn degree_one_group_trivially_passes() {
        let g = crate::PermutationGroup::trivial(1);
        assert!(has_kl_ut(&g, 1, 1, &limits()).unwrap().holds);
    }

    #[test]
    fn threshold_c5_is_5() {
        let g = builtin::cyclic(5).unwrap();
        let t = threshold(&g, 3, &limits()).unwrap();
        assert_eq!(t.value, ThresholdValue::Exact(5));
        assert_eq!(t.method, ThresholdMethod::Search);
        assert!(!t.failures.is_empty());
    }

    #[test]
    fn threshold_homogeneous_fast_path() {
        let g = builtin::symmetric(6).unwrap();
        let t = threshold(&g, 3, &limits()).unwrap();
        assert_eq!(t.value, ThresholdValue::Exact(3));
        assert_eq!(t.method, ThresholdMethod::HomogeneousFastPath);
    }

    #[test]
    fn threshold_no_threshold_for_intransitive() {
        // ⟨(0 1 2)⟩ on 5 points has two singleton orbits: a 2-subset inside
        // a non-trivial orbit never reaches the partition with both fixed
        // points... in fact even (2,5)-ut fails because the pair {3,4} only
        // has the one orbit member.
        let g = crate::PermutationGroup::new(vec![crate::Permutation::parse_cycles(
            "(0 1 2)",
            5,
        )
        .unwrap()])
        .unwrap();
        let t = threshold(&g, 2, &limits()).unwrap();
        assert_eq!(t.value, ThresholdValue::NoThreshold);
    }

    #[test]
    fn t1_examples() {
        assert_eq!(
            t1(&builtin::cyclic(6).unwrap()).value,
            ThresholdValue::Exact(1)
        );
        let g = crate::PermutationGroup::new(vec![crate::Permutation::parse_cycles(
            "(0 1 2)",
            5,
        )
        .unwrap()])
        .unwrap();
        assert_eq!(t1(&g).value, ThresholdValue::Exact(5));
        let h = crate::PermutationGroup::new(vec![crate::Permutation::parse_cycles(
            "(0 1)(2 3)",
            4,
        )
        .unwrap()])
        .unwrap();
        assert_eq!(t1(&h).value, ThresholdValue::Exact(3));
    }

    #[test]
    fn t2_closed_form() {
        assert_eq!(
            t2(&builtin::cyclic(5).unwrap()).unwrap().value,
            ThresholdValue::Exact(4)
        );
        assert_eq!(
            t2(&builtin::dihedral(5).unwrap()).unwrap().value,
            ThresholdValue::Exact(4)
        );
        assert_eq!(
            t2(&builtin::symmetric(5).unwrap()).unwrap().value,
            ThresholdValue::Exact(2)
        );
        assert!(t2(&builtin::cyclic(4).unwrap()).is_err());
    }

    #[test]
    fn t2_matches_exact_probes_on_c5() {
        // Oracle: direct (2,l)-ut probes.
        let g = builtin::cyclic(5).unwrap();
        assert!(!has_kl_ut(&g, 2, 3, &limits()).unwrap().holds);
        assert!(has_kl_ut(&g, 2, 4, &limits()).unwrap().holds);
    }

    #[test]
    fn has_transversal_strategies_agree() {
        let g = builtin::agl1(7).unwrap();
        let orbits = k_subset_orbits(&g, 3, &limits()).unwrap();
        let support: Vec<Point> = vec![0, 1, 2, 4, 5];
        for partition in Partitions::new(&support, 3) {
            for orbit in orbits.orbits() {
                let scan = has_transversal(&orbits, orbit.id, &partition);
                let product = product_transversal(&orbits, orbit.id, partition.blocks());
                assert_eq!(scan.is_some(), product.is_some());
                if let Some(m) = scan {
                    // Any returned member really is a transversal.
                    let blocks: Vec<Bitset> = partition
                        .blocks()
                        .iter()
                        .map(|b| Bitset::from_points(7, b))
                        .collect();
                    let mask = Bitset::from_points(7, &m);
                    assert!(blocks.iter().all(|b| b.intersection_size(&mask) == 1));
                }
            }
        }
    }

    #[test]
    fn full_orbit_always_has_transversal_on_small_partition() {
        let g = builtin::symmetric(6).unwrap();
        let orbits = k_subset_orbits(&g, 2, &limits()).unwrap();
        let p = PartialPartition::new(vec![vec![0], vec![1, 2]]).unwrap();
        let m = has_transversal(&orbits, 0, &p).unwrap();
        assert_eq!(m[0], 0);
        assert!(m[1] == 1 || m[1] == 2);
    }

    #[test]
    fn budget_overrun_is_an_error_not_a_guess() {
        let g = builtin::cyclic(12).unwrap();
        let tiny = Limits {
            max_work: 10,
            ..Limits::default()
        };
        match has_kl_ut(&g, 3, 8, &tiny) {
            Err(Error::BudgetExceeded { .. }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn pruned_and_unpruned_agree_on_small_groups() {
        let no_prune = Limits {
            stab_prune_threshold: u64::MAX,
            ..Limits::default()
        };
        let eager_prune = Limits {
            stab_prune_threshold: 1,
            ..Limits::default()
        };
        for spec in ["cyclic:6", "dihedral:6", "agl1:7", "cyclic:5"] {
            let g = builtin::from_registry(spec).unwrap();
            let n = g.degree();
            for k in 1..=3.min(n - 1) {
                for l in k..=n {
                    let a = has_kl_ut(&g, k, l, &no_prune).unwrap();
                    let b = has_kl_ut(&g, k, l, &eager_prune).unwrap();
                    assert_eq!(a.holds, b.holds, "{spec} k={k} l={l}");
                    assert!(b.stats.partitions_pruned >= a.stats.partitions_pruned);
                }
            }
        }
    }
}
