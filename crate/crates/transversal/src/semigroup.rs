//! Partial transformations, the rank-based regularity criterion, bounded
//! closure of `⟨G,t⟩ \ G`, and the equivalence harness connecting semigroup
//! regularity to the (k,l)-universal transversal property.

use std::collections::HashSet;

use rand::Rng;

use crate::group::PermutationGroup;
use crate::partition::{PartialPartition, Partitions};
use crate::perm::{Permutation, Point};
use crate::subset::{k_subset_orbits, setwise_stabilizer};
use crate::ut::{has_kl_ut, has_transversal};
use crate::{Error, Limits};

/// A partial map from a subset of the domain into the domain. Stored as the
/// sorted domain together with the image of each domain point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialTransformation {
    degree: usize,
    domain: Vec<Point>,
    images: Vec<Point>,
}

/// Domain-size/rank class of partial transformations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PtClass {
    pub rank: usize,
    pub domain_size: usize,
}

impl PartialTransformation {
    pub fn new(degree: usize, pairs: &[(Point, Point)]) -> Result<Self, Error> {
        let mut pairs = pairs.to_vec();
        pairs.sort_unstable();
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::PartialMapSyntax(format!(
                    "domain point {} appears twice",
                    w[0].0
                )));
            }
        }
        if pairs
            .iter()
            .any(|&(x, y)| x as usize >= degree || y as usize >= degree)
        {
            return Err(Error::PartialMapSyntax(format!(
                "point out of range for degree {degree}"
            )));
        }
        Ok(PartialTransformation {
            degree,
            domain: pairs.iter().map(|&(x, _)| x).collect(),
            images: pairs.iter().map(|&(_, y)| y).collect(),
        })
    }

    pub fn empty(degree: usize) -> Self {
        PartialTransformation {
            degree,
            domain: Vec::new(),
            images: Vec::new(),
        }
    }

    pub fn from_permutation(p: &Permutation) -> Self {
        PartialTransformation {
            degree: p.degree(),
            domain: (0..p.degree() as Point).collect(),
            images: p.images().to_vec(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn domain(&self) -> &[Point] {
        &self.domain
    }

    pub fn domain_size(&self) -> usize {
        self.domain.len()
    }

    pub fn apply(&self, x: Point) -> Option<Point> {
        self.domain
            .binary_search(&x)
            .ok()
            .map(|i| self.images[i])
    }

    /// The image set, sorted without repetition.
    pub fn image_set(&self) -> Vec<Point> {
        let mut im = self.images.clone();
        im.sort_unstable();
        im.dedup();
        im
    }

    pub fn rank(&self) -> usize {
        self.image_set().len()
    }

    /// The kernel: domain points grouped by equal image. Empty domain gives
    /// `None` (a partition needs at least one block).
    pub fn kernel(&self) -> Option<PartialPartition> {
        if self.domain.is_empty() {
            return None;
        }
        let mut by_image: std::collections::BTreeMap<Point, Vec<Point>> = Default::default();
        for (&x, &y) in self.domain.iter().zip(&self.images) {
            by_image.entry(y).or_default().push(x);
        }
        Some(
            PartialPartition::new(by_image.into_values().collect())
                .expect("kernel blocks are disjoint and non-empty"),
        )
    }

    pub fn is_permutation(&self) -> bool {
        self.domain.len() == self.degree && self.rank() == self.degree
    }

    /// Partial composition: apply `self`, then `other`.
    pub fn then(&self, other: &PartialTransformation) -> PartialTransformation {
        debug_assert_eq!(self.degree, other.degree);
        let mut domain = Vec::new();
        let mut images = Vec::new();
        for (&x, &y) in self.domain.iter().zip(&self.images) {
            if let Some(z) = other.apply(y) {
                domain.push(x);
                images.push(z);
            }
        }
        PartialTransformation {
            degree: self.degree,
            domain,
            images,
        }
    }

    pub fn then_perm(&self, g: &Permutation) -> PartialTransformation {
        PartialTransformation {
            degree: self.degree,
            domain: self.domain.clone(),
            images: self.images.iter().map(|&y| g.apply(y)).collect(),
        }
    }

    pub fn after_perm(&self, g: &Permutation) -> PartialTransformation {
        // x ↦ self(g(x)): domain = g⁻¹(dom self).
        let inv = g.inverse();
        let mut pairs: Vec<(Point, Point)> = self
            .domain
            .iter()
            .zip(&self.images)
            .map(|(&x, &y)| (inv.apply(x), y))
            .collect();
        pairs.sort_unstable();
        PartialTransformation {
            degree: self.degree,
            domain: pairs.iter().map(|&(x, _)| x).collect(),
            images: pairs.iter().map(|&(_, y)| y).collect(),
        }
    }

    /// Parses the text form `dom: 0 1 3 ; img: 2 2 4`.
    pub fn parse(text: &str, degree: usize) -> Result<Self, Error> {
        let (dom_part, img_part) = text
            .split_once(';')
            .ok_or_else(|| Error::PartialMapSyntax("expected `dom: … ; img: …`".into()))?;
        let dom_str = dom_part
            .trim()
            .strip_prefix("dom:")
            .ok_or_else(|| Error::PartialMapSyntax("missing `dom:`".into()))?;
        let img_str = img_part
            .trim()
            .strip_prefix("img:")
            .ok_or_else(|| Error::PartialMapSyntax("missing `img:`".into()))?;
        let parse_points = |s: &str| -> Result<Vec<Point>, Error> {
            s.split_whitespace()
                .map(|t| {
                    t.parse::<Point>()
                        .map_err(|_| Error::PartialMapSyntax(format!("bad point {t:?}")))
                })
                .collect()
        };
        let dom = parse_points(dom_str)?;
        let img = parse_points(img_str)?;
        if dom.len() != img.len() {
            return Err(Error::PartialMapSyntax(
                "domain and image lists differ in length".into(),
            ));
        }
        PartialTransformation::new(degree, &dom.into_iter().zip(img).collect::<Vec<_>>())
    }
}

impl std::fmt::Display for PartialTransformation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "dom:")?;
        for x in &self.domain {
            write!(f, " {x}")?;
        }
        write!(f, " ; img:")?;
        for y in &self.images {
            write!(f, " {y}")?;
        }
        Ok(())
    }
}

/// Composition in diagram order, with permutations embedded as total maps.
pub fn pcompose(s: &PartialTransformation, t: &PartialTransformation) -> PartialTransformation {
    s.then(t)
}

/// Searches all group elements for g with rank(u·g·u) = rank(u). Errors when
/// the group is too large to scan.
pub fn is_regular_scan(
    group: &PermutationGroup,
    u: &PartialTransformation,
    limits: &Limits,
) -> Result<Option<Permutation>, Error> {
    let elements = group.elements(limits.scan_cap)?;
    let target = u.rank();
    Ok(elements
    .into_iter()
    .find(|g| u.then_perm(g).then(u).rank() == target))
}

/// Decides regularity of `u` in `⟨G,u⟩` through the orbit of its image: the
/// criterion holds iff the orbit of im(u) contains a transversal of ker(u).
/// The certificate is recovered by tracing the orbit word.
pub fn is_regular_orbit(
    group: &PermutationGroup,
    u: &PartialTransformation,
    limits: &Limits,
) -> Result<(bool, Option<Permutation>), Error> {
    let k = u.rank();
    if k == 0 {
        // The empty map satisfies u = u·u·u outright.
        return Ok((true, Some(Permutation::identity(group.degree()))));
    }
    let Some(kernel) = u.kernel() else {
        return Ok((true, Some(Permutation::identity(group.degree()))));
    };
    let orbits = k_subset_orbits(group, k, limits)?;
    let image = u.image_set();
    let orbit_id = orbits.orbit_id(&image);
    let Some(member) = has_transversal(&orbits, orbit_id, &kernel) else {
        return Ok((false, None));
    };
    let g = subset_transporter(group, &image, &member, limits)?;
    debug_assert_eq!(u.then_perm(&g).then(u).rank(), k);
    Ok((true, Some(g)))
}

/// An element mapping one subset onto another (as sets), found by BFS with
/// word tracking.
fn subset_transporter(
    group: &PermutationGroup,
    from: &[Point],
    to: &[Point],
    limits: &Limits,
) -> Result<Permutation, Error> {
    let mut sorted_to = to.to_vec();
    sorted_to.sort_unstable();
    let mut seen: HashSet<Vec<Point>> = HashSet::new();
    let mut queue: Vec<(Vec<Point>, Permutation)> = Vec::new();
    let id = Permutation::identity(group.degree());
    let start: Vec<Point> = {
        let mut s = from.to_vec();
        s.sort_unstable();
        s
    };
    if start == sorted_to {
        return Ok(id);
    }
    seen.insert(start.clone());
    queue.push((start, id));
    let mut qi = 0;
    while qi < queue.len() {
        let (cur, word) = queue[qi].clone();
        qi += 1;
        for g in group.generators() {
            let mut img: Vec<Point> = cur.iter().map(|&p| g.apply(p)).collect();
            img.sort_unstable();
            if img == sorted_to {
                return Ok(word.compose(g).unwrap());
            }
            if seen.insert(img.clone()) {
                if queue.len() >= limits.max_orbit as usize {
                    return Err(Error::BudgetExceeded {
                        estimate: u128::MAX,
                        budget: limits.max_orbit as u128,
                        context: "subset transporter orbit".into(),
                    });
                }
                queue.push((img, word.compose(g).unwrap()));
            }
        }
    }
    Err(Error::InvalidArgument(
        "subsets lie in different orbits".into(),
    ))
}

/// The certificate of the rank criterion: with rank(u·g·u) = rank(u), some
/// power (u·g)^ω is idempotent and b = g·(u·g)^(ω-1) satisfies u = u·b·u.
pub fn lemma_certificate(
    u: &PartialTransformation,
    g: &Permutation,
) -> PartialTransformation {
    let ug = u.then_perm(g);
    // Find the idempotent power by iterating; finiteness guarantees one.
    let mut power = ug.clone();
    let mut exponent = 1usize;
    loop {
        if power.then(&power) == power {
            break;
        }
        power = power.then(&ug);
        exponent += 1;
    }
    // b = g·(u·g)^(ω-1): apply g first, then ω-1 copies of (u·g).
    let mut b = PartialTransformation::from_permutation(g);
    for _ in 0..exponent - 1 {
        b = b.then(&ug);
    }
    b
}

/// Elements of `⟨G,t⟩ \ G`, i.e. the closure of {t} under products with the
/// group generators and t itself, deduplicated by (domain, images).
#[derive(Debug, Clone)]
pub struct ClosureResult {
    pub elements: Vec<PartialTransformation>,
    pub complete: bool,
    pub cap: usize,
}

pub fn closure(
    group: &PermutationGroup,
    t: &PartialTransformation,
    cap: usize,
) -> ClosureResult {
    if t.is_permutation() {
        // Invertible generators stay in the group part by convention.
        return ClosureResult {
            elements: Vec::new(),
            complete: true,
            cap,
        };
    }
    let mut seen: HashSet<PartialTransformation> = HashSet::new();
    let mut queue: Vec<PartialTransformation> = vec![t.clone()];
    seen.insert(t.clone());
    let mut qi = 0;
    let mut complete = true;
    'bfs: while qi < queue.len() {
        let cur = queue[qi].clone();
        qi += 1;
        let mut successors: Vec<PartialTransformation> = Vec::new();
        for g in group.generators() {
            successors.push(cur.then_perm(g));
            successors.push(cur.after_perm(g));
        }
        successors.push(cur.then(t));
        successors.push(t.then(&cur));
        for s in successors {
            if !seen.contains(&s) {
                if seen.len() >= cap {
                    complete = false;
                    break 'bfs;
                }
                seen.insert(s.clone());
                queue.push(s);
            }
        }
    }
    ClosureResult {
        elements: queue,
        complete,
        cap,
    }
}

/// Outcome of a semigroup regularity check.
#[derive(Debug, Clone)]
pub enum Regularity {
    Regular,
    /// Some element admits no group element preserving its rank in u·g·u.
    NotRegular {
        witness: PartialTransformation,
    },
}

impl Regularity {
    pub fn is_regular(&self) -> bool {
        matches!(self, Regularity::Regular)
    }
}

/// Decides regularity of `⟨G,t⟩`: group elements are regular outright, and
/// each closure element u must satisfy the rank criterion rank(u·g·u) =
/// rank(u) for some g. Errors when the closure exceeds its cap.
pub fn semigroup_regular(
    group: &PermutationGroup,
    t: &PartialTransformation,
    limits: &Limits,
) -> Result<Regularity, Error> {
    let closed = closure(group, t, limits.closure_cap);
    if !closed.complete {
        return Err(Error::BudgetExceeded {
            estimate: closed.elements.len() as u128 + 1,
            budget: limits.closure_cap as u128,
            context: "semigroup closure cap".into(),
        });
    }
    // Orbit computations repeat per rank; tiny degrees keep this cheap.
    for u in &closed.elements {
        let (regular, _) = is_regular_orbit(group, u, limits)?;
        if !regular {
            return Ok(Regularity::NotRegular { witness: u.clone() });
        }
    }
    Ok(Regularity::Regular)
}

/// One checked instance in the equivalence harness.
#[derive(Debug, Clone)]
pub struct HarnessInstance {
    pub map: PartialTransformation,
    pub regular: bool,
}

/// Report of the equivalence sweep between the (k,l)-ut decision and
/// regularity of `⟨G,t⟩` over t of rank k with domain size l.
#[derive(Debug, Clone)]
pub struct HarnessReport {
    pub k: usize,
    pub l: usize,
    pub ut_holds: bool,
    pub instances: usize,
    pub irregular: Vec<PartialTransformation>,
    /// True when the sweep had to sample instead of exhausting classes.
    pub sampled: bool,
    /// The central equivalence: ut ⇔ no irregular instance.
    pub consistent: bool,
}

/// Sweeps representatives of PT_{k,l} modulo the two-sided group action
/// (t ≈ g·t·h generates the same semigroup) and compares regularity of each
/// `⟨G,t⟩` against the (k,l)-ut decision.
pub fn equivalence_harness(
    group: &PermutationGroup,
    k: usize,
    l: usize,
    limits: &Limits,
) -> Result<HarnessReport, Error> {
    let n = group.degree();
    if k < 1 || k > l || l > n {
        return Err(Error::InvalidArgument(format!(
            "need 1 ≤ k ≤ l ≤ n, got k={k} l={l} n={n}"
        )));
    }
    let ut = has_kl_ut(group, k, l, limits)?;
    let domain_orbits = k_subset_orbits(group, l, limits)?;
    let image_orbits = k_subset_orbits(group, k, limits)?;

    let mut instances = 0usize;
    let mut irregular: Vec<PartialTransformation> = Vec::new();
    for dom_orbit in domain_orbits.orbits() {
        let b: Vec<Point> = dom_orbit.min_member().to_vec();
        let kernel_reps = kernel_representatives(group, &b, k, limits)?;
        for kernel in &kernel_reps {
            for img_orbit in image_orbits.orbits() {
                let a: Vec<Point> = img_orbit.min_member().to_vec();
                for assignment in assignment_representatives(group, &a, limits)? {
                    let mut pairs: Vec<(Point, Point)> = Vec::new();
                    for (block, &ai) in kernel.blocks().iter().zip(&assignment) {
                        for &x in block {
                            pairs.push((x, ai));
                        }
                    }
                    let t = PartialTransformation::new(n, &pairs)?;
                    debug_assert_eq!(t.rank(), k);
                    debug_assert_eq!(t.domain_size(), l);
                    instances += 1;
                    if !semigroup_regular(group, &t, limits)?.is_regular() {
                        irregular.push(t);
                    }
                }
            }
        }
    }
    let consistent = ut.holds == irregular.is_empty();
    Ok(HarnessReport {
        k,
        l,
        ut_holds: ut.holds,
        instances,
        irregular,
        sampled: false,
        consistent,
    })
}

/// Random (c)⇒(b)-direction spot check: when (k,l)-ut holds, random maps of
/// rank k on domains of size m ≥ l generate regular semigroups.
pub fn random_regular_check<R: Rng>(
    group: &PermutationGroup,
    k: usize,
    m: usize,
    rng: &mut R,
    limits: &Limits,
) -> Result<bool, Error> {
    let t = random_pt(group.degree(), k, m, rng);
    Ok(semigroup_regular(group, &t, limits)?.is_regular())
}

/// A uniformly-ish random partial transformation of given rank and domain
/// size: random domain, random image set, random surjective block map.
pub fn random_pt<R: Rng>(
    degree: usize,
    rank: usize,
    domain_size: usize,
    rng: &mut R,
) -> PartialTransformation {
    assert!(rank <= domain_size && domain_size <= degree);
    let mut points: Vec<Point> = (0..degree as Point).collect();
    for i in 0..domain_size {
        let j = rng.gen_range(i..degree);
        points.swap(i, j);
    }
    let mut domain: Vec<Point> = points[..domain_size].to_vec();
    domain.sort_unstable();
    let mut image_pool: Vec<Point> = (0..degree as Point).collect();
    for i in 0..rank {
        let j = rng.gen_range(i..degree);
        image_pool.swap(i, j);
    }
    let image: Vec<Point> = image_pool[..rank].to_vec();
    // Surjectivity: the first `rank` domain points hit each image point
    // once; the rest pick freely.
    let mut pairs: Vec<(Point, Point)> = Vec::new();
    for (i, &x) in domain.iter().enumerate() {
        let y = if i < rank {
            image[i]
        } else {
            image[rng.gen_range(0..rank)]
        };
        pairs.push((x, y));
    }
    PartialTransformation::new(degree, &pairs).expect("constructed pairs are valid")
}

/// Kernel representatives: partitions of `b` into k blocks, up to the
/// setwise stabilizer of `b`.
fn kernel_representatives(
    group: &PermutationGroup,
    b: &[Point],
    k: usize,
    limits: &Limits,
) -> Result<Vec<PartialPartition>, Error> {
    let stab = setwise_stabilizer(group, b, limits)?;
    let elements = stab.elements(limits.scan_cap)?;
    let mut reps = Vec::new();
    let mut seen: HashSet<Vec<Vec<Point>>> = HashSet::new();
    for p in Partitions::new(b, k) {
        if seen.contains(p.blocks()) {
            continue;
        }
        // Mark the whole stabilizer orbit of this partition.
        for e in &elements {
            let blocks: Vec<Vec<Point>> = p
                .blocks()
                .iter()
                .map(|blk| blk.iter().map(|&x| e.apply(x)).collect())
                .collect();
            let canon = PartialPartition::new(blocks).expect("stabilizer preserves blocks");
            seen.insert(canon.blocks().to_vec());
        }
        reps.push(p);
    }
    Ok(reps)
}

/// Assignments of blocks to the image points of `a`, up to the action of
/// the setwise stabilizer of `a` on positions.
fn assignment_representatives(
    group: &PermutationGroup,
    a: &[Point],
    limits: &Limits,
) -> Result<Vec<Vec<Point>>, Error> {
    let k = a.len();
    let stab = setwise_stabilizer(group, a, limits)?;
    let elements = stab.elements(limits.scan_cap)?;
    let mut reps: Vec<Vec<Point>> = Vec::new();
    let mut seen: HashSet<Vec<Point>> = HashSet::new();
    let mut order: Vec<usize> = (0..k).collect();
    loop {
        let assignment: Vec<Point> = order.iter().map(|&i| a[i]).collect();
        if !seen.contains(&assignment) {
            for e in &elements {
                seen.insert(assignment.iter().map(|&x| e.apply(x)).collect());
            }
            reps.push(assignment);
        }
        if !next_permutation(&mut order) {
            break;
        }
    }
    Ok(reps)
}

fn next_permutation(order: &mut [usize]) -> bool {
    let n = order.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && order[i - 1] >= order[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while order[j] <= order[i - 1] {
        j -= 1;
    }
    order.swap(i - 1, j);
    order[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use rand::SeedableRng;

    fn limits() -> Limits {
        Limits::default()
    }

    fn pt(degree: usize, text: &str) -> PartialTransformation {
        PartialTransformation::parse(text, degree).unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        let t = pt(7, "dom: 0 1 3 ; img: 2 2 4");
        assert_eq!(t.domain(), &[0, 1, 3]);
        assert_eq!(t.rank(), 2);
        assert_eq!(t.to_string(), "dom: 0 1 3 ; img: 2 2 4");
        let again = PartialTransformation::parse(&t.to_string(), 7).unwrap();
        assert_eq!(t, again);
    }

    #[test]
    fn parse_rejects_malformed() {
        assert!(PartialTransformation::parse("dom: 0 1 ; img: 2", 5).is_err());
        assert!(PartialTransformation::parse("dom: 0 0 ; img: 1 2", 5).is_err());
        assert!(PartialTransformation::parse("dom: 0 9 ; img: 1 2", 5).is_err());
        assert!(PartialTransformation::parse("0 1 -> 2 2", 5).is_err());
    }

    #[test]
    fn kernel_and_rank() {
        let t = pt(7, "dom: 0 1 3 5 ; img: 2 2 4 2");
        assert_eq!(t.rank(), 2);
        let kernel = t.kernel().unwrap();
        assert_eq!(kernel.blocks(), &[vec![0, 1, 5], vec![3]]);
        assert_eq!(kernel.block_count(), t.rank());
    }

    #[test]
    fn composition_follows_the_definition() {
        // dom(s)={0,1}, s:0↦2,1↦3; dom(t)={2}, t:2↦0 ⇒ s·t has dom {0}, 0↦0.
        let s = pt(5, "dom: 0 1 ; img: 2 3");
        let t = pt(5, "dom: 2 ; img: 0");
        let c = pcompose(&s, &t);
        assert_eq!(c.domain(), &[0]);
        assert_eq!(c.apply(0), Some(0));
    }

    #[test]
    fn composition_with_identity_and_disjoint() {
        let t = pt(5, "dom: 1 2 ; img: 3 3");
        let id = PartialTransformation::from_permutation(&Permutation::identity(5));
        assert_eq!(pcompose(&t, &id), t);
        // Image disjoint from the next domain: empty map.
        let s = pt(5, "dom: 0 ; img: 4");
        let u = pt(5, "dom: 1 2 ; img: 0 0");
        assert_eq!(pcompose(&s, &u).domain_size(), 0);
    }

    #[test]
    fn rank_is_monotone_under_composition() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let s = random_pt(7, rng.gen_range(1..=3), rng.gen_range(3..=6), &mut rng);
            let t = random_pt(7, rng.gen_range(1..=3), rng.gen_range(3..=6), &mut rng);
            let c = pcompose(&s, &t);
            assert!(c.rank() <= s.rank().min(t.rank()));
        }
    }

    #[test]
    fn post_composition_by_permutation_preserves_rank() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let g5 = builtin::symmetric(5).unwrap();
        for _ in 0..100 {
            let t = random_pt(5, rng.gen_range(1..=3), rng.gen_range(3..=5), &mut rng);
            let g = g5.random_element(&mut rng);
            assert_eq!(t.then_perm(&g).rank(), t.rank());
        }
    }

    #[test]
    fn scan_and_orbit_regularity_agree_randomized() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let groups: Vec<PermutationGroup> = vec![
            builtin::cyclic(5).unwrap(),
            builtin::dihedral(6).unwrap(),
            builtin::symmetric(4).unwrap(),
            builtin::agl1(7).unwrap(),
            builtin::alternating(6).unwrap(),
        ];
        for _ in 0..300 {
            let g = &groups[rng.gen_range(0..groups.len())];
            let n = g.degree();
            let rank = rng.gen_range(1..=3.min(n - 1));
            let dom = rng.gen_range(rank..=n);
            let u = random_pt(n, rank, dom, &mut rng);
            let scan = is_regular_scan(g, &u, &limits()).unwrap();
            let (orbit, cert) = is_regular_orbit(g, &u, &limits()).unwrap();
            assert_eq!(scan.is_some(), orbit, "group deg {n}, u = {u}");
            if let Some(gcert) = cert {
                assert_eq!(u.then_perm(&gcert).then(&u).rank(), u.rank());
            }
        }
    }

    #[test]
    fn lemma_certificate_reconstructs_inner_inverse() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        let g6 = builtin::symmetric(6).unwrap();
        let mut checked = 0;
        while checked < 100 {
            let rank = rng.gen_range(1..=4);
            let u = random_pt(6, rank, rng.gen_range(rank..=6), &mut rng);
            if let Some(g) = is_regular_scan(&g6, &u, &limits()).unwrap() {
                let b = lemma_certificate(&u, &g);
                assert_eq!(u.then(&b).then(&u), u, "u = {u}, g = {g}");
                checked += 1;
            }
        }
    }

    #[test]
    fn closure_of_a_permutation_is_empty_by_convention() {
        let g = builtin::cyclic(5).unwrap();
        let t = PartialTransformation::from_permutation(
            &Permutation::parse_cycles("(0 1 2 3 4)", 5).unwrap(),
        );
        let c = closure(&g, &t, 1000);
        assert!(c.complete);
        assert!(c.elements.is_empty());
    }

    #[test]
    fn closure_of_empty_map_is_a_single_element() {
        let g = builtin::cyclic(5).unwrap();
        let t = PartialTransformation::empty(5);
        let c = closure(&g, &t, 1000);
        assert!(c.complete);
        assert_eq!(c.elements.len(), 1);
    }

    #[test]
    fn closure_is_bounded_by_all_partial_maps() {
        // Degree 5: |PT(5)| = 6^5 = 7776 total partial maps.
        let g = builtin::cyclic(5).unwrap();
        let t = pt(5, "dom: 0 1 2 3 ; img: 0 1 2 0");
        let c = closure(&g, &t, 10_000);
        assert!(c.complete);
        assert!(!c.elements.is_empty());
        assert!(c.elements.len() <= 7776);
        // Closed under the products used to build it.
        let set: HashSet<_> = c.elements.iter().cloned().collect();
        for u in c.elements.iter().take(50) {
            for gen in g.generators() {
                assert!(set.contains(&u.then_perm(gen)));
                assert!(set.contains(&u.after_perm(gen)));
            }
            assert!(set.contains(&u.then(&t)));
            assert!(set.contains(&t.then(u)));
        }
    }

    #[test]
    fn closure_cap_reports_incomplete() {
        let g = builtin::symmetric(6).unwrap();
        let t = pt(6, "dom: 0 1 2 3 4 ; img: 0 1 2 3 0");
        let c = closure(&g, &t, 10);
        assert!(!c.complete);
    }

    #[test]
    fn symmetric_group_semigroups_are_regular() {
        let g = builtin::symmetric(5).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let rank = rng.gen_range(1..=4);
            let t = random_pt(5, rank, rng.gen_range(rank..=5), &mut rng);
            assert!(semigroup_regular(&g, &t, &limits()).unwrap().is_regular());
        }
    }

    #[test]
    fn c5_rank3_domain4_witness_is_not_regular() {
        // (3,4)-ut fails for C5, so some rank-3 map on a 4-point domain
        // generates a non-regular semigroup; build one from the failure
        // witness.
        let g = builtin::cyclic(5).unwrap();
        let res = has_kl_ut(&g, 3, 4, &limits()).unwrap();
        let w = res.witness.unwrap();
        let orbits = k_subset_orbits(&g, 3, &limits()).unwrap();
        let image: Vec<Point> = orbits.orbit(w.orbit_id).min_member().to_vec();
        let mut pairs = Vec::new();
        for (block, &y) in w.partition.blocks().iter().zip(&image) {
            for &x in block {
                pairs.push((x, y));
            }
        }
        let t = PartialTransformation::new(5, &pairs).unwrap();
        assert_eq!(t.rank(), 3);
        assert_eq!(t.domain_size(), 4);
        match semigroup_regular(&g, &t, &limits()).unwrap() {
            Regularity::NotRegular { witness } => {
                assert!(is_regular_scan(&g, &witness, &limits()).unwrap().is_none());
            }
            Regularity::Regular => panic!("⟨C5,t⟩ should not be regular"),
        }
    }

    #[test]
    fn c5_rank3_domain5_maps_are_regular() {
        // t(C5,3) = 5: every rank-3 full-domain map works.
        let g = builtin::cyclic(5).unwrap();
        let report = equivalence_harness(&g, 3, 5, &limits()).unwrap();
        assert!(report.ut_holds);
        assert!(report.consistent);
        assert!(report.irregular.is_empty());
    }

    #[test]
    fn harness_c5_3_4_finds_irregular_maps() {
        let g = builtin::cyclic(5).unwrap();
        let report = equivalence_harness(&g, 3, 4, &limits()).unwrap();
        assert!(!report.ut_holds);
        assert!(report.consistent);
        assert!(!report.irregular.is_empty());
        assert!(report.instances > 0);
    }

    #[test]
    fn injective_maps_with_transitive_image_orbit_are_regular() {
        // Singleton kernel blocks: the image itself is a transversal after
        // the identity when the orbit reaches it.
        let g = builtin::symmetric(5).unwrap();
        let t = pt(5, "dom: 1 2 4 ; img: 0 3 2");
        let (regular, cert) = is_regular_orbit(&g, &t, &limits()).unwrap();
        assert!(regular);
        assert!(cert.is_some());
    }
}
