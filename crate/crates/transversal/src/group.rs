//! Permutation groups given by generators, with a deterministic
//! Schreier–Sims stabilizer chain for order, membership, and stabilizers.

use std::sync::OnceLock;

use num_bigint::BigUint;

use crate::perm::{Permutation, Point};
use crate::Error;

/// A permutation group of fixed degree, defined by its generators.
///
/// The stabilizer chain is built lazily on first use and cached; after that
/// the group is immutable and safe to share across threads.
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: OnceLock<StabilizerChain>,
    base_hint: Vec<Point>,
}

impl Clone for PermutationGroup {
    fn clone(&self) -> Self {
        PermutationGroup {
            degree: self.degree,
            generators: self.generators.clone(),
            chain: OnceLock::new(),
            base_hint: self.base_hint.clone(),
        }
    }
}

impl std::fmt::Debug for PermutationGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PermutationGroup")
            .field("degree", &self.degree)
            .field("generators", &self.generators)
            .finish()
    }
}

impl PermutationGroup {
    /// Builds a group from a non-empty set of generators of equal degree.
    pub fn new(generators: Vec<Permutation>) -> Result<Self, Error> {
        let degree = match generators.first() {
            Some(g) => g.degree(),
            None => return Err(Error::EmptyGeneratorList),
        };
        if let Some(bad) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::DegreeMismatch {
                left: degree,
                right: bad.degree(),
            });
        }
        Ok(PermutationGroup {
            degree,
            generators,
            chain: OnceLock::new(),
            base_hint: Vec::new(),
        })
    }

    /// Like [`new`](Self::new) but the stabilizer chain will prefer the given
    /// base points, in order, before falling back to first moved points.
    pub fn with_base_hint(generators: Vec<Permutation>, hint: Vec<Point>) -> Result<Self, Error> {
        let mut g = Self::new(generators)?;
        g.base_hint = hint;
        Ok(g)
    }

    pub fn trivial(degree: usize) -> Self {
        PermutationGroup {
            degree,
            generators: vec![Permutation::identity(degree)],
            chain: OnceLock::new(),
            base_hint: Vec::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    fn chain(&self) -> &StabilizerChain {
        self.chain
            .get_or_init(|| StabilizerChain::build(&self.generators, self.degree, &self.base_hint))
    }

    /// Group order, computed as the product of transversal sizes along the chain.
    pub fn order(&self) -> BigUint {
        self.chain()
            .levels
            .iter()
            .map(|l| BigUint::from(l.orbit.len()))
            .product()
    }

    /// Order as `u128`, when it fits. Covers every group this crate bundles.
    pub fn order_u128(&self) -> Option<u128> {
        let mut acc: u128 = 1;
        for l in &self.chain().levels {
            acc = acc.checked_mul(l.orbit.len() as u128)?;
        }
        Some(acc)
    }

    /// Membership test via sifting through the stabilizer chain.
    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (residue, _) = self.chain().sift(g.clone(), 0);
        residue.is_identity()
    }

    /// The orbit of a point, in BFS discovery order.
    pub fn orbit(&self, a: Point) -> Vec<Point> {
        debug_assert!((a as usize) < self.degree);
        let mut seen = vec![false; self.degree];
        let mut orbit = vec![a];
        seen[a as usize] = true;
        let mut i = 0;
        while i < orbit.len() {
            let x = orbit[i];
            i += 1;
            for g in &self.generators {
                let y = g.apply(x);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    orbit.push(y);
                }
            }
        }
        orbit
    }

    /// Partition of the domain into orbits, each sorted, ordered by minimum.
    pub fn point_orbits(&self) -> Vec<Vec<Point>> {
        let mut seen = vec![false; self.degree];
        let mut parts = Vec::new();
        for p in 0..self.degree as Point {
            if seen[p as usize] {
                continue;
            }
            let mut orb = self.orbit(p);
            for &x in &orb {
                seen[x as usize] = true;
            }
            orb.sort_unstable();
            parts.push(orb);
        }
        parts
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbit(0).len() == self.degree
    }

    /// The stabilizer of a point, as a group acting on all `n` points.
    ///
    /// Rebuilds the chain with `a` as the first base point; the strong
    /// generators below the first level generate exactly the stabilizer.
    pub fn stabilizer(&self, a: Point) -> PermutationGroup {
        let rebased = StabilizerChain::build(&self.generators, self.degree, &[a]);
        if rebased.levels.is_empty() {
            return PermutationGroup::trivial(self.degree);
        }
        debug_assert_eq!(rebased.levels[0].base, a);
        let gens = rebased.gens_at(1);
        if gens.is_empty() {
            return PermutationGroup::trivial(self.degree);
        }
        PermutationGroup::new(gens).expect("stabilizer generators share the degree")
    }

    /// Restricts a group fixing `a` to the remaining points, renumbered by
    /// deleting `a` from the domain.
    pub fn restriction_omitting(&self, a: Point) -> Result<PermutationGroup, Error> {
        if self.degree < 2 {
            return Err(Error::InvalidArgument(
                "cannot restrict a degree-1 group".into(),
            ));
        }
        let shift = |p: Point| if p > a { p - 1 } else { p };
        let mut gens = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            if g.apply(a) != a {
                return Err(Error::InvalidArgument(format!(
                    "generator moves the omitted point {a}"
                )));
            }
            let images: Vec<Point> = (0..self.degree as Point)
                .filter(|&p| p != a)
                .map(|p| shift(g.apply(p)))
                .collect();
            gens.push(Permutation::from_images(images)?);
        }
        PermutationGroup::new(gens)
    }

    /// An element mapping `from` to `to`, if the two points share an orbit.
    pub fn transporter(&self, from: Point, to: Point) -> Option<Permutation> {
        if from == to {
            return Some(Permutation::identity(self.degree));
        }
        let mut tree: Vec<Option<Permutation>> = vec![None; self.degree];
        tree[from as usize] = Some(Permutation::identity(self.degree));
        let mut queue = vec![from];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            i += 1;
            for g in &self.generators {
                let y = g.apply(x);
                if tree[y as usize].is_none() {
                    let t = tree[x as usize].as_ref().unwrap().compose(g).unwrap();
                    if y == to {
                        return Some(t);
                    }
                    tree[y as usize] = Some(t);
                    queue.push(y);
                }
            }
        }
        None
    }

    /// A uniformly random element, drawn by multiplying one transversal
    /// representative per chain level.
    pub fn random_element<R: rand::Rng>(&self, rng: &mut R) -> Permutation {
        let chain = self.chain();
        let mut g = Permutation::identity(self.degree);
        for level in &chain.levels {
            let pick = level.orbit[rng.gen_range(0..level.orbit.len())];
            let t = level.transversal[pick as usize].as_ref().unwrap();
            g = g.compose(t).unwrap();
        }
        g
    }

    /// Enumerates all elements. Errors when the order exceeds `cap`.
    pub fn elements(&self, cap: usize) -> Result<Vec<Permutation>, Error> {
        let order = self.order();
        if order > BigUint::from(cap) {
            return Err(Error::OrderTooLarge { cap, order });
        }
        let chain = self.chain();
        let mut elems = vec![Permutation::identity(self.degree)];
        for level in chain.levels.iter().rev() {
            let mut next = Vec::with_capacity(elems.len() * level.orbit.len());
            for &u in &level.orbit {
                let t = level.transversal[u as usize].as_ref().unwrap();
                for e in &elems {
                    next.push(e.compose(t).unwrap());
                }
            }
            elems = next;
        }
        debug_assert_eq!(BigUint::from(elems.len()), order);
        Ok(elems)
    }

    /// Base points of the cached stabilizer chain.
    pub fn base(&self) -> Vec<Point> {
        self.chain().levels.iter().map(|l| l.base).collect()
    }
}

struct ChainLevel {
    base: Point,
    orbit: Vec<Point>,
    /// `transversal[u]` maps `base` to `u`.
    transversal: Vec<Option<Permutation>>,
}

impl ChainLevel {
    fn new(base: Point, degree: usize) -> Self {
        let mut transversal = vec![None; degree];
        transversal[base as usize] = Some(Permutation::identity(degree));
        ChainLevel {
            base,
            orbit: vec![base],
            transversal,
        }
    }
}

pub(crate) struct StabilizerChain {
    degree: usize,
    /// One global strong generating set; level `i` uses the members fixing
    /// the first `i` base points.
    strong: Vec<Permutation>,
    levels: Vec<ChainLevel>,
}

impl StabilizerChain {
    fn build(generators: &[Permutation], degree: usize, hint: &[Point]) -> StabilizerChain {
        let mut chain = StabilizerChain {
            degree,
            strong: Vec::new(),
            levels: Vec::new(),
        };
        for g in generators {
            if !g.is_identity() && !chain.strong.contains(g) {
                chain.strong.push(g.clone());
            }
        }
        if chain.strong.is_empty() {
            return chain; // trivial group
        }
        let first = chain.strong[0]
            .first_moved_point()
            .expect("non-identity generator moves a point");
        chain.levels.push(ChainLevel::new(
            hint.first().copied().unwrap_or(first),
            degree,
        ));
        chain.establish(0, hint);
        debug_assert!(generators.iter().all(|g| {
            let (r, _) = chain.sift(g.clone(), 0);
            r.is_identity()
        }));
        chain
    }

    fn gens_at(&self, level: usize) -> Vec<Permutation> {
        self.strong
            .iter()
            .filter(|g| {
                self.levels[..level]
                    .iter()
                    .all(|lvl| g.apply(lvl.base) == lvl.base)
            })
            .cloned()
            .collect()
    }

    /// Strips `g` through levels `from..`; returns the residue and the level
    /// at which stripping stopped.
    fn sift(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for i in from..self.levels.len() {
            let level = &self.levels[i];
            let u = g.apply(level.base);
            match &level.transversal[u as usize] {
                None => return (g, i),
                Some(t) => g = g.compose(&t.inverse()).unwrap(),
            }
        }
        (g, self.levels.len())
    }

    /// Recomputes level `i`'s orbit and checks that all its Schreier
    /// generators strip to the identity through the deeper levels, adding
    /// strong generators (and levels) until they do. On return the chain
    /// property holds from level `i` downwards.
    fn establish(&mut self, i: usize, hint: &[Point]) {
        'rescan: loop {
            let gens = self.gens_at(i);
            let base = self.levels[i].base;
            let mut level = ChainLevel::new(base, self.degree);
            let mut qi = 0;
            while qi < level.orbit.len() {
                let u = level.orbit[qi];
                qi += 1;
                for g in &gens {
                    let v = g.apply(u);
                    if level.transversal[v as usize].is_none() {
                        let t = level.transversal[u as usize]
                            .as_ref()
                            .unwrap()
                            .compose(g)
                            .unwrap();
                        level.transversal[v as usize] = Some(t);
                        level.orbit.push(v);
                    }
                }
            }
            self.levels[i] = level;

            for oi in 0..self.levels[i].orbit.len() {
                for g in &gens {
                    let u = self.levels[i].orbit[oi];
                    let v = g.apply(u);
                    let t_u = self.levels[i].transversal[u as usize].as_ref().unwrap();
                    let t_v = self.levels[i].transversal[v as usize].as_ref().unwrap();
                    let s = t_u.compose(g).unwrap().compose(&t_v.inverse()).unwrap();
                    if s.is_identity() {
                        continue;
                    }
                    let (residue, j) = self.sift(s, i + 1);
                    if residue.is_identity() {
                        continue;
                    }
                    if j == self.levels.len() {
                        let base = match hint.get(j) {
                            Some(&b) => b,
                            None => residue
                                .first_moved_point()
                                .expect("non-identity residue moves a point"),
                        };
                        self.levels.push(ChainLevel::new(base, self.degree));
                    }
                    if !self.strong.contains(&residue) {
                        self.strong.push(residue);
                    }
                    for l in (i + 1..=j).rev() {
                        self.establish(l, hint);
                    }
                    // The strong set grew, so this level's Schreier scan is
                    // stale; start it over.
                    continue 'rescan;
                }
            }
            return;
        }
    }
}

/// Brute-force closure of a generating set, for cross-checking chain orders.
/// Returns `None` if the closure exceeds `cap` elements.
pub fn closure_elements(generators: &[Permutation], cap: usize) -> Option<Vec<Permutation>> {
    use std::collections::HashSet;
    let degree = generators.first()?.degree();
    let mut seen: HashSet<Vec<Point>> = HashSet::new();
    let id = Permutation::identity(degree);
    seen.insert(id.images().to_vec());
    let mut elems = vec![id];
    let mut i = 0;
    while i < elems.len() {
        let e = elems[i].clone();
        i += 1;
        for g in generators {
            let f = e.compose(g).ok()?;
            if seen.insert(f.images().to_vec()) {
                if elems.len() >= cap {
                    return None;
                }
                elems.push(f);
            }
        }
    }
    Some(elems)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    fn group(gens: &[&str], n: usize) -> PermutationGroup {
        PermutationGroup::new(gens.iter().map(|s| perm(s, n)).collect()).unwrap()
    }

    #[test]
    fn symmetric_5_order() {
        let g = group(&["(0 1)", "(0 1 2 3 4)"], 5);
        assert_eq!(g.order(), BigUint::from(120u32));
    }

    #[test]
    fn chain_order_matches_closure_on_small_groups() {
        let cases: Vec<(PermutationGroup, usize)> = vec![
            (group(&["(0 1 2 3 4)"], 5), 5),
            (group(&["(0 1 2 3 4)", "(1 4)(2 3)"], 5), 10),
            (group(&["(0 1 2 3)", "(0 2)"], 4), 8),
            (group(&["(0 1 2)", "(3 4)"], 5), 6),
            (group(&["(0 1)", "(0 1 2 3 4 5)"], 6), 720),
        ];
        for (g, expected) in cases {
            let closure = closure_elements(g.generators(), 100_000).unwrap();
            assert_eq!(closure.len(), expected);
            assert_eq!(g.order(), BigUint::from(expected));
        }
    }

    #[test]
    fn membership_accepts_products_and_rejects_outsiders() {
        let g = group(&["(0 1 2 3 4)", "(1 4)(2 3)"], 5); // dihedral, order 10
        let elems = closure_elements(g.generators(), 1000).unwrap();
        assert_eq!(elems.len(), 10);
        for e in &elems {
            assert!(g.contains(e));
        }
        // A 5-cycle composed with a transposition is odd of order > 2: not in D10.
        let outsider = perm("(0 1)", 5);
        assert!(!g.contains(&outsider));
    }

    #[test]
    fn point_orbits_partition_domain() {
        let g = group(&["(0 1 2)"], 5);
        assert_eq!(g.point_orbits(), vec![vec![0, 1, 2], vec![3], vec![4]]);
        let h = group(&["(0 1)(2 3)"], 4);
        assert_eq!(h.point_orbits(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn stabilizer_orders() {
        let s4 = group(&["(0 1)", "(0 1 2 3)"], 4);
        assert_eq!(s4.stabilizer(0).order(), BigUint::from(6u32));
        let c5 = group(&["(0 1 2 3 4)"], 5);
        assert_eq!(c5.stabilizer(0).order(), BigUint::from(1u32));
    }

    #[test]
    fn orbit_stabilizer_identity_holds() {
        let g = group(&["(0 1 2 3 4 5)", "(1 5)(2 4)"], 6); // D12
        for a in 0..6 {
            let orbit = g.orbit(a).len();
            let stab = g.stabilizer(a).order();
            assert_eq!(stab * BigUint::from(orbit), g.order());
        }
    }

    #[test]
    fn elements_enumeration_matches_closure() {
        let g = group(&["(0 1 2)", "(0 1)"], 3);
        let mut from_chain = g.elements(100).unwrap();
        let mut from_closure = closure_elements(g.generators(), 100).unwrap();
        from_chain.sort();
        from_closure.sort();
        assert_eq!(from_chain, from_closure);
    }

    #[test]
    fn transporter_maps_points() {
        let g = group(&["(0 1 2 3 4)"], 5);
        let t = g.transporter(1, 4).unwrap();
        assert_eq!(t.apply(1), 4);
        assert!(g.contains(&t));
        let h = group(&["(0 1)"], 3);
        assert!(h.transporter(0, 2).is_none());
    }

    #[test]
    fn random_elements_are_members() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let g = group(&["(0 1)", "(0 1 2 3 4)"], 5);
        for _ in 0..50 {
            let e = g.random_element(&mut rng);
            assert!(g.contains(&e));
        }
    }
}
