//! Ordered set partitions of a point set into exactly k non-empty blocks,
//! enumerated through restricted growth strings in lexicographic order.

use crate::perm::Point;

/// A partition of an l-subset (the support) into k disjoint non-empty
/// blocks. Canonical form: each block sorted, blocks ordered by minimum
/// element — which is exactly the first-occurrence order of a restricted
/// growth string.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialPartition {
    blocks: Vec<Vec<Point>>,
}

impl PartialPartition {
    /// Builds a partition, canonicalizing block order. Blocks must be
    /// non-empty and pairwise disjoint.
    pub fn new(mut blocks: Vec<Vec<Point>>) -> Result<PartialPartition, crate::Error> {
        if blocks.is_empty() || blocks.iter().any(|b| b.is_empty()) {
            return Err(crate::Error::InvalidArgument(
                "partition blocks must be non-empty".into(),
            ));
        }
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_by_key(|b| b[0]);
        let mut support: Vec<Point> = blocks.iter().flatten().copied().collect();
        let before = support.len();
        support.sort_unstable();
        support.dedup();
        if support.len() != before {
            return Err(crate::Error::InvalidArgument(
                "partition blocks overlap".into(),
            ));
        }
        Ok(PartialPartition { blocks })
    }

    pub fn blocks(&self) -> &[Vec<Point>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// The union of the blocks, sorted.
    pub fn support(&self) -> Vec<Point> {
        let mut s: Vec<Point> = self.blocks.iter().flatten().copied().collect();
        s.sort_unstable();
        s
    }

    pub fn support_size(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum()
    }
}

/// Iterator over all partitions of `support` into exactly `k` blocks.
///
/// Internally walks restricted growth strings `a` with `a[0] = 0` and
/// `a[i] ≤ max(a[..i]) + 1`, pruned to strings using exactly `k` labels.
pub struct Partitions {
    support: Vec<Point>,
    k: usize,
    rgs: Vec<u8>,
    started: bool,
    exhausted: bool,
}

impl Partitions {
    pub fn new(support: &[Point], k: usize) -> Partitions {
        let mut support = support.to_vec();
        support.sort_unstable();
        let exhausted = k == 0 || k > support.len();
        Partitions {
            support,
            k,
            rgs: Vec::new(),
            started: false,
            exhausted,
        }
    }

    /// The current restricted growth string (valid after `next`).
    pub fn rgs(&self) -> &[u8] {
        &self.rgs
    }

    fn first(&mut self) -> bool {
        // Lexicographically least exact-k string: 0,0,…,0,1,2,…,k-1.
        let m = self.support.len();
        self.rgs = vec![0; m];
        for i in 0..self.k {
            self.rgs[m - self.k + i] = i as u8;
        }
        true
    }

    /// Advances to the next exact-k restricted growth string.
    fn advance(&mut self) -> bool {
        let m = self.support.len();
        let k = self.k as u8;
        // Prefix maxima for the growth constraint.
        let mut maxima = vec![0u8; m];
        let mut mx = 0;
        for i in 0..m {
            if i > 0 {
                mx = mx.max(self.rgs[i - 1]);
            }
            maxima[i] = mx;
        }
        let mut i = m;
        loop {
            if i == 1 {
                return false; // a[0] is pinned at 0
            }
            i -= 1;
            let cap = (maxima[i] + 1).min(k - 1);
            if self.rgs[i] < cap {
                self.rgs[i] += 1;
                // Fill the suffix with the least completion that can still
                // reach exactly k labels.
                let mut used = 0u8;
                for j in 0..=i {
                    used = used.max(self.rgs[j] + 1);
                }
                for j in i + 1..m {
                    let missing = k.saturating_sub(used);
                    let remaining = (m - j) as u8;
                    if missing >= remaining {
                        // Forced to open new labels from here on.
                        self.rgs[j] = used;
                        used += 1;
                    } else {
                        self.rgs[j] = 0;
                    }
                }
                if used <= k {
                    // Suffix filling always reaches exactly k labels when
                    // feasible; infeasible bumps fall through to more carry.
                    let mut labels = 0u8;
                    for j in 0..m {
                        labels = labels.max(self.rgs[j] + 1);
                    }
                    if labels == k {
                        return true;
                    }
                }
            }
        }
    }

    fn materialize(&self) -> PartialPartition {
        let mut blocks: Vec<Vec<Point>> = vec![Vec::new(); self.k];
        for (i, &label) in self.rgs.iter().enumerate() {
            blocks[label as usize].push(self.support[i]);
        }
        PartialPartition { blocks }
    }
}

impl Iterator for Partitions {
    type Item = PartialPartition;

    fn next(&mut self) -> Option<PartialPartition> {
        if self.exhausted {
            return None;
        }
        let ok = if !self.started {
            self.started = true;
            self.first()
        } else {
            self.advance()
        };
        if !ok {
            self.exhausted = true;
            return None;
        }
        Some(self.materialize())
    }
}

/// Stirling number of the second kind S(m,k), saturating at `u128::MAX`.
pub fn stirling2(m: usize, k: usize) -> u128 {
    if k == 0 {
        return (m == 0) as u128;
    }
    if k > m {
        return 0;
    }
    let mut row = vec![0u128; k + 1];
    row[0] = 1; // S(0,0)
    for _ in 1..=m {
        for j in (1..=k).rev() {
            row[j] = row[j - 1].saturating_add((j as u128).saturating_mul(row[j]));
        }
        row[0] = 0;
    }
    row[k]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Independent oracle: recursive enumeration by choosing, for each
    /// element in turn, an existing block or a new one.
    fn brute_force_partitions(support: &[Point], k: usize) -> Vec<Vec<Vec<Point>>> {
        fn rec(
            rest: &[Point],
            blocks: &mut Vec<Vec<Point>>,
            k: usize,
            out: &mut Vec<Vec<Vec<Point>>>,
        ) {
            match rest.first() {
                None => {
                    if blocks.len() == k {
                        out.push(blocks.clone());
                    }
                }
                Some(&x) => {
                    for i in 0..blocks.len() {
                        blocks[i].push(x);
                        rec(&rest[1..], blocks, k, out);
                        blocks[i].pop();
                    }
                    if blocks.len() < k {
                        blocks.push(vec![x]);
                        rec(&rest[1..], blocks, k, out);
                        blocks.pop();
                    }
                }
            }
        }
        let mut out = Vec::new();
        rec(support, &mut Vec::new(), k, &mut out);
        out
    }

    #[test]
    fn all_singletons_is_the_only_partition_when_k_equals_size() {
        let parts: Vec<_> = Partitions::new(&[2, 5, 9], 3).collect();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].blocks(), &[vec![2], vec![5], vec![9]]);
    }

    #[test]
    fn counts_match_recursive_oracle() {
        for (m, k) in [(5usize, 2usize), (6, 3), (7, 4), (6, 1), (5, 5)] {
            let support: Vec<Point> = (0..m as Point).collect();
            let oracle = brute_force_partitions(&support, k);
            let iterated: Vec<_> = Partitions::new(&support, k).collect();
            assert_eq!(iterated.len(), oracle.len(), "m={m} k={k}");
            assert_eq!(iterated.len() as u128, stirling2(m, k), "m={m} k={k}");
            // Same partitions, not just the same count.
            let canon: HashSet<Vec<Vec<Point>>> =
                oracle.into_iter().map(|mut blocks| {
                    blocks.sort_by_key(|b| b[0]);
                    blocks
                }).collect();
            for p in &iterated {
                assert!(canon.contains(p.blocks()));
            }
        }
    }

    #[test]
    fn seven_choose_four_blocks_count() {
        // S(7,4) computed by the oracle above once and frozen.
        let support: Vec<Point> = (0..7).collect();
        assert_eq!(Partitions::new(&support, 4).count(), 350);
        assert_eq!(stirling2(7, 4), 350);
    }

    #[test]
    fn ten_choose_four_blocks_count() {
        let support: Vec<Point> = (0..10).collect();
        assert_eq!(Partitions::new(&support, 4).count(), 34105);
        assert_eq!(stirling2(10, 4), 34105);
    }

    #[test]
    fn no_duplicates_and_canonical_form() {
        let support: Vec<Point> = vec![1, 3, 4, 8, 9, 11];
        let mut seen = HashSet::new();
        for p in Partitions::new(&support, 3) {
            assert!(seen.insert(p.blocks().to_vec()), "duplicate {p:?}");
            assert_eq!(p.support(), support);
            for w in p.blocks().windows(2) {
                assert!(w[0][0] < w[1][0], "blocks out of order: {p:?}");
            }
            for b in p.blocks() {
                assert!(b.windows(2).all(|w| w[0] < w[1]));
            }
        }
        assert_eq!(seen.len() as u128, stirling2(6, 3));
    }

    #[test]
    fn degenerate_arguments() {
        assert_eq!(Partitions::new(&[0, 1, 2], 4).count(), 0);
        assert_eq!(Partitions::new(&[0, 1, 2], 0).count(), 0);
        assert_eq!(Partitions::new(&[], 1).count(), 0);
    }

    #[test]
    fn partition_constructor_validates() {
        assert!(PartialPartition::new(vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(PartialPartition::new(vec![vec![0], vec![]]).is_err());
        let p = PartialPartition::new(vec![vec![5, 3], vec![1]]).unwrap();
        assert_eq!(p.blocks(), &[vec![1], vec![3, 5]]);
    }

    #[test]
    fn stirling_reference_values() {
        assert_eq!(stirling2(10, 3), 9330);
        assert_eq!(stirling2(9, 3), 3025);
        assert_eq!(stirling2(9, 4), 7770);
        assert_eq!(stirling2(0, 0), 1);
        assert_eq!(stirling2(5, 6), 0);
    }
}
