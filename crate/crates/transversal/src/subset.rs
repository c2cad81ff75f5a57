//! Orbits of a group on k-subsets, with a colex-rank membership index, plus
//! minimal images and setwise stabilizers.
//!
//! A k-subset is a strictly increasing point sequence. Subsets are indexed by
//! their colexicographic rank `Σ C(s_i, i+1)`, so the orbit partition of all
//! C(n,k) subsets lives in one flat array.

use smallvec::SmallVec;

use crate::group::PermutationGroup;
use crate::perm::{Permutation, Point};
use crate::{Error, Limits};

/// Sorted point sequence; inline up to 8 points.
pub type KSubset = SmallVec<[Point; 8]>;

/// A bitset over the point domain. Degree ≤ 320 stays inline.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bitset {
    blocks: SmallVec<[u64; 5]>,
}

impl Bitset {
    pub fn empty(n: usize) -> Bitset {
        Bitset {
            blocks: smallvec::smallvec![0; n.div_ceil(64)],
        }
    }

    pub fn from_points(n: usize, points: &[Point]) -> Bitset {
        let mut b = Bitset::empty(n);
        for &p in points {
            b.insert(p);
        }
        b
    }

    #[inline]
    pub fn insert(&mut self, p: Point) {
        self.blocks[p as usize / 64] |= 1 << (p % 64);
    }

    #[inline]
    pub fn contains(&self, p: Point) -> bool {
        self.blocks[p as usize / 64] >> (p % 64) & 1 != 0
    }

    #[inline]
    pub fn intersection_size(&self, other: &Bitset) -> usize {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn points(&self, n: usize) -> Vec<Point> {
        (0..n as Point).filter(|&p| self.contains(p)).collect()
    }
}

/// Binomial coefficients C(a, b) for a ≤ n, b ≤ k, saturating at `u64::MAX`.
#[derive(Clone)]
pub struct Binomials {
    k: usize,
    table: Vec<u64>,
}

impl Binomials {
    pub fn new(n: usize, k: usize) -> Binomials {
        let width = k + 1;
        let mut table = vec![0u64; (n + 1) * width];
        for a in 0..=n {
            table[a * width] = 1;
            for b in 1..=k.min(a) {
                let up = table[(a - 1) * width + b];
                let diag = table[(a - 1) * width + b - 1];
                table[a * width + b] = up.saturating_add(diag);
            }
        }
        Binomials { k, table }
    }

    #[inline]
    pub fn c(&self, a: usize, b: usize) -> u64 {
        if b > self.k || b > a {
            return if b > a { 0 } else { panic!("binomial table too small") };
        }
        self.table[a * (self.k + 1) + b]
    }

    /// Colexicographic rank of a sorted subset.
    #[inline]
    pub fn rank(&self, subset: &[Point]) -> usize {
        subset
            .iter()
            .enumerate()
            .map(|(i, &p)| self.c(p as usize, i + 1) as usize)
            .sum()
    }
}

/// One orbit on k-subsets, members stored flat in discovery order.
pub struct KSubsetOrbit {
    pub id: u32,
    k: usize,
    members_flat: Vec<Point>,
}

impl KSubsetOrbit {
    pub fn size(&self) -> usize {
        self.members_flat.len() / self.k
    }

    pub fn members(&self) -> impl Iterator<Item = &[Point]> + Clone {
        self.members_flat.chunks_exact(self.k)
    }

    pub fn member(&self, i: usize) -> &[Point] {
        &self.members_flat[i * self.k..(i + 1) * self.k]
    }

    /// Lexicographically smallest member.
    pub fn min_member(&self) -> &[Point] {
        self.members().min().expect("orbits are non-empty")
    }
}

/// The complete orbit partition of all k-subsets of the domain.
pub struct KSubsetOrbits {
    pub n: usize,
    pub k: usize,
    orbit_of: Vec<u32>,
    orbits: Vec<KSubsetOrbit>,
    binomials: Binomials,
}

impl KSubsetOrbits {
    pub fn orbits(&self) -> &[KSubsetOrbit] {
        &self.orbits
    }

    pub fn orbit(&self, id: u32) -> &KSubsetOrbit {
        &self.orbits[id as usize]
    }

    pub fn count(&self) -> usize {
        self.orbits.len()
    }

    /// Orbit id of a sorted k-subset.
    #[inline]
    pub fn orbit_id(&self, subset: &[Point]) -> u32 {
        debug_assert_eq!(subset.len(), self.k);
        self.orbit_of[self.binomials.rank(subset)]
    }

    pub fn binomials(&self) -> &Binomials {
        &self.binomials
    }
}

/// Number of k-subsets of an n-set, saturating.
pub fn binomial_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
    }
    acc
}

/// Partition of all k-subsets into group orbits by breadth-first closure
/// under the generators. Errors when C(n,k) exceeds the orbit budget.
pub fn k_subset_orbits(
    group: &PermutationGroup,
    k: usize,
    limits: &Limits,
) -> Result<KSubsetOrbits, Error> {
    let n = group.degree();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "k = {k} out of range for degree {n}"
        )));
    }
    let total_u128 = binomial_u128(n, k);
    if total_u128 > limits.max_orbit as u128 {
        return Err(Error::BudgetExceeded {
            estimate: total_u128,
            budget: limits.max_orbit as u128,
            context: format!("C({n},{k}) k-subsets"),
        });
    }
    let total = total_u128 as usize;
    let binomials = Binomials::new(n, k + 1);
    let mut orbit_of = vec![u32::MAX; total];
    let mut orbits: Vec<KSubsetOrbit> = Vec::new();

    // Colex enumeration visits subsets in rank order, so `seed_rank` is the
    // rank of `seed` and unseeded subsets are exactly the unvisited ones.
    let mut seed: KSubset = (0..k as Point).collect();
    let mut image_buf: KSubset = seed.clone();
    for seed_rank in 0..total {
        if seed_rank > 0 {
            colex_successor(&mut seed, n);
        }
        if orbit_of[seed_rank] != u32::MAX {
            continue;
        }
        let id = orbits.len() as u32;
        let mut members_flat: Vec<Point> = Vec::new();
        members_flat.extend_from_slice(&seed);
        orbit_of[seed_rank] = id;
        let mut qi = 0;
        while qi * k < members_flat.len() {
            let start = qi * k;
            qi += 1;
            for g in group.generators() {
                image_buf.clear();
                for j in start..start + k {
                    image_buf.push(g.apply(members_flat[j]));
                }
                image_buf.sort_unstable();
                let r = binomials.rank(&image_buf);
                if orbit_of[r] == u32::MAX {
                    orbit_of[r] = id;
                    members_flat.extend_from_slice(&image_buf);
                }
            }
        }
        orbits.push(KSubsetOrbit {
            id,
            k,
            members_flat,
        });
    }
    Ok(KSubsetOrbits {
        n,
        k,
        orbit_of,
        orbits,
        binomials,
    })
}

/// Advances a sorted k-subset to its colex successor.
fn colex_successor(s: &mut KSubset, n: usize) {
    let k = s.len();
    for i in 0..k {
        let limit = if i + 1 < k { s[i + 1] } else { n as Point };
        if s[i] + 1 < limit {
            s[i] += 1;
            for (j, v) in s.iter_mut().enumerate().take(i) {
                *v = j as Point;
            }
            return;
        }
    }
    panic!("colex successor past the last subset");
}

/// The lexicographically minimal image of a subset under the group.
///
/// Uses explicit orbit closure while the orbit fits the budget, and falls
/// back to stabilizer-chain backtracking over transporters beyond it.
pub fn minimal_image(
    group: &PermutationGroup,
    subset: &[Point],
    limits: &Limits,
) -> Result<Vec<Point>, Error> {
    let mut sorted: Vec<Point> = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != subset.len() {
        return Err(Error::InvalidArgument("subset has repeated points".into()));
    }
    if let Some(orbit) = subset_orbit(group, &sorted, limits.max_orbit as usize) {
        return Ok(orbit.into_iter().min().expect("orbit non-empty"));
    }
    Ok(minimal_image_backtrack(group, &sorted))
}

/// BFS orbit of a subset under the group, as sorted point vectors.
/// Returns `None` when the orbit exceeds `cap`.
pub fn subset_orbit(
    group: &PermutationGroup,
    sorted: &[Point],
    cap: usize,
) -> Option<Vec<Vec<Point>>> {
    use std::collections::HashSet;
    let mut seen: HashSet<Vec<Point>> = HashSet::new();
    seen.insert(sorted.to_vec());
    let mut queue = vec![sorted.to_vec()];
    let mut qi = 0;
    while qi < queue.len() {
        let cur = queue[qi].clone();
        qi += 1;
        for g in group.generators() {
            let mut img: Vec<Point> = cur.iter().map(|&p| g.apply(p)).collect();
            img.sort_unstable();
            if !seen.contains(&img) {
                if queue.len() >= cap {
                    return None;
                }
                seen.insert(img.clone());
                queue.push(img);
            }
        }
    }
    Some(queue)
}

/// Smallest image by recursive transporter descent: fix the least reachable
/// point, then minimise the remainder inside its stabilizer.
fn minimal_image_backtrack(group: &PermutationGroup, sorted: &[Point]) -> Vec<Point> {
    if sorted.is_empty() {
        return Vec::new();
    }
    // Least point any member of the set can reach.
    let mut best_point = Point::MAX;
    for &s in sorted {
        let m = group.orbit(s).into_iter().min().unwrap();
        best_point = best_point.min(m);
    }
    let stab = group.stabilizer(best_point);
    let mut best_tail: Option<Vec<Point>> = None;
    for &s in sorted {
        let Some(t) = group.transporter(s, best_point) else {
            continue;
        };
        let mut rest: Vec<Point> = sorted
            .iter()
            .filter(|&&x| x != s)
            .map(|&x| t.apply(x))
            .collect();
        rest.sort_unstable();
        let candidate = minimal_image_backtrack(&stab, &rest);
        if best_tail.as_ref().is_none_or(|b| candidate < *b) {
            best_tail = Some(candidate);
        }
    }
    let mut out = vec![best_point];
    out.extend(best_tail.expect("some member reaches the best point"));
    out
}

/// The subgroup preserving `set` as a set, acting on all n points.
///
/// Small groups are scanned element by element; larger ones go through the
/// orbit of the set and Schreier generators, certified by the index formula
/// |G| = |orbit| · |stabilizer|.
pub fn setwise_stabilizer(
    group: &PermutationGroup,
    set: &[Point],
    limits: &Limits,
) -> Result<PermutationGroup, Error> {
    let mut sorted: Vec<Point> = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.is_empty() {
        return Err(Error::InvalidArgument(
            "setwise stabilizer of the empty set".into(),
        ));
    }
    let n = group.degree();
    if let Ok(elements) = group.elements(limits.scan_cap) {
        let gens: Vec<Permutation> = elements
            .into_iter()
            .filter(|g| {
                let mut img: Vec<Point> = sorted.iter().map(|&p| g.apply(p)).collect();
                img.sort_unstable();
                img == sorted
            })
            .collect();
        debug_assert!(!gens.is_empty());
        return PermutationGroup::new(gens);
    }

    // Schreier generators from the orbit of the set.
    use std::collections::HashMap;
    let mut index: HashMap<Vec<Point>, usize> = HashMap::new();
    index.insert(sorted.clone(), 0);
    let mut queue: Vec<Vec<Point>> = vec![sorted.clone()];
    let mut words: Vec<Permutation> = vec![Permutation::identity(n)];
    let mut schreier: Vec<Permutation> = Vec::new();
    let mut qi = 0;
    while qi < queue.len() {
        let cur = queue[qi].clone();
        let word = words[qi].clone();
        qi += 1;
        for g in group.generators() {
            let mut img: Vec<Point> = cur.iter().map(|&p| g.apply(p)).collect();
            img.sort_unstable();
            match index.get(&img) {
                None => {
                    if queue.len() >= limits.max_orbit as usize {
                        return Err(Error::BudgetExceeded {
                            estimate: u128::MAX,
                            budget: limits.max_orbit as u128,
                            context: "setwise stabilizer subset orbit".into(),
                        });
                    }
                    index.insert(img.clone(), queue.len());
                    words.push(word.compose(g).unwrap());
                    queue.push(img);
                }
                Some(&j) => {
                    let s = word.compose(g).unwrap().compose(&words[j].inverse()).unwrap();
                    if !s.is_identity() && !schreier.contains(&s) {
                        schreier.push(s);
                    }
                }
            }
        }
    }
    let target = group.order() / queue.len();
    if schreier.is_empty() {
        debug_assert_eq!(target, 1u32.into());
        return Ok(PermutationGroup::trivial(n));
    }
    let stab = PermutationGroup::new(schreier)?;
    debug_assert_eq!(stab.order(), target);
    Ok(stab)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use num_bigint::BigUint;

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn colex_enumeration_is_rank_order() {
        let n = 7;
        let k = 3;
        let b = Binomials::new(n, k + 1);
        let mut s: KSubset = (0..k as Point).collect();
        for expected in 0..binomial_u128(n, k) as usize {
            if expected > 0 {
                colex_successor(&mut s, n);
            }
            assert_eq!(b.rank(&s), expected, "subset {s:?}");
        }
    }

    #[test]
    fn symmetric_5_has_one_orbit_on_triples() {
        let g = builtin::symmetric(5).unwrap();
        let orbits = k_subset_orbits(&g, 3, &limits()).unwrap();
        assert_eq!(orbits.count(), 1);
        assert_eq!(orbits.orbit(0).size(), 10);
    }

    #[test]
    fn cyclic_5_has_two_pair_orbits() {
        // Closure over the rotations: {i, i+1} and {i, i+2} classes.
        let g = builtin::cyclic(5).unwrap();
        let orbits = k_subset_orbits(&g, 2, &limits()).unwrap();
        assert_eq!(orbits.count(), 2);
        assert!(orbits.orbits().iter().all(|o| o.size() == 5));
    }

    #[test]
    fn agl1_7_triple_orbit_sizes() {
        let g = builtin::agl1(7).unwrap();
        let orbits = k_subset_orbits(&g, 3, &limits()).unwrap();
        let mut sizes: Vec<usize> = orbits.orbits().iter().map(|o| o.size()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes.iter().sum::<usize>(), 35);
        assert_eq!(sizes, vec![14, 21]);
    }

    #[test]
    fn orbit_membership_index_agrees_with_member_lists() {
        let g = builtin::dihedral(6).unwrap();
        let orbits = k_subset_orbits(&g, 2, &limits()).unwrap();
        for orbit in orbits.orbits() {
            for m in orbit.members() {
                assert_eq!(orbits.orbit_id(m), orbit.id);
            }
        }
        let total: usize = orbits.orbits().iter().map(|o| o.size()).sum();
        assert_eq!(total, 15);
    }

    #[test]
    fn budget_rejects_huge_orbit_requests() {
        let g = builtin::symmetric(40).unwrap();
        let small = Limits {
            max_orbit: 1000,
            ..Limits::default()
        };
        match k_subset_orbits(&g, 5, &small) {
            Err(Error::BudgetExceeded { estimate, .. }) => {
                assert_eq!(estimate, binomial_u128(40, 5));
            }
            other => panic!("expected budget error, got {:?}", other.map(|o| o.count())),
        }
    }

    #[test]
    fn minimal_image_closure_and_backtrack_agree() {
        let groups = [
            builtin::cyclic(7).unwrap(),
            builtin::dihedral(8).unwrap(),
            builtin::agl1(7).unwrap(),
            builtin::psl2(7).unwrap(),
        ];
        let tight = Limits {
            max_orbit: 1, // force the backtracking path
            ..Limits::default()
        };
        for g in &groups {
            let orbits = k_subset_orbits(g, 3, &limits()).unwrap();
            for orbit in orbits.orbits() {
                let expected: Vec<Point> = orbit.min_member().to_vec();
                for m in orbit.members().step_by(3) {
                    let via_closure = minimal_image(g, m, &limits()).unwrap();
                    let via_backtrack = minimal_image(g, m, &tight).unwrap();
                    assert_eq!(via_closure, expected);
                    assert_eq!(via_backtrack, expected);
                }
            }
        }
    }

    #[test]
    fn setwise_stabilizer_small_cases() {
        let s4 = builtin::symmetric(4).unwrap();
        let stab = setwise_stabilizer(&s4, &[0, 1], &limits()).unwrap();
        // Scan oracle over all 24 elements gives ⟨(0 1), (2 3)⟩.
        assert_eq!(stab.order(), BigUint::from(4u32));
        let c5 = builtin::cyclic(5).unwrap();
        let stab = setwise_stabilizer(&c5, &[0, 1], &limits()).unwrap();
        assert_eq!(stab.order(), BigUint::from(1u32));
        let whole = setwise_stabilizer(&s4, &[0, 1, 2, 3], &limits()).unwrap();
        assert_eq!(whole.order(), s4.order());
    }

    #[test]
    fn setwise_stabilizer_schreier_path_matches_scan() {
        let g = builtin::psl2(7).unwrap(); // order 168
        let schreier_only = Limits {
            scan_cap: 1, // force the orbit/Schreier path
            ..Limits::default()
        };
        for set in [vec![0u16, 1], vec![0, 1, 2], vec![2, 5, 7]] {
            let fast = setwise_stabilizer(&g, &set, &schreier_only).unwrap();
            let slow = setwise_stabilizer(&g, &set, &limits()).unwrap();
            assert_eq!(fast.order(), slow.order(), "set {set:?}");
        }
    }

    #[test]
    fn bitset_ops() {
        let mut b = Bitset::empty(100);
        b.insert(3);
        b.insert(64);
        b.insert(99);
        assert!(b.contains(64));
        assert!(!b.contains(63));
        assert_eq!(b.len(), 3);
        let c = Bitset::from_points(100, &[64, 99]);
        assert_eq!(b.intersection_size(&c), 2);
        assert_eq!(c.points(100), vec![64, 99]);
    }
}
