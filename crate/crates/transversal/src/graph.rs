//! Orbital graphs (group orbits on 2-subsets), induced-subgraph
//! connectivity, and the connectedness test for primitivity.

use crate::group::PermutationGroup;
use crate::perm::Point;

/// One group orbit on 2-subsets, viewed as a graph on the full domain.
#[derive(Debug, Clone)]
pub struct OrbitalGraph {
    /// Edges as ordered pairs `(a, b)` with `a < b`.
    pub edges: Vec<(Point, Point)>,
    /// Common vertex degree, present when the group is transitive.
    pub valency: Option<usize>,
}

impl OrbitalGraph {
    pub fn adjacency(&self, n: usize) -> Vec<Vec<Point>> {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        adj
    }

    pub fn is_connected(&self, n: usize) -> bool {
        induced_connected(&self.adjacency(n), &(0..n as Point).collect::<Vec<_>>())
    }
}

/// The orbits of the group on 2-subsets, each with its valency when the
/// group is transitive. Valencies sum to n-1 in that case.
pub fn orbital_graphs(group: &PermutationGroup) -> Vec<OrbitalGraph> {
    let n = group.degree();
    let transitive = group.is_transitive();
    let mut orbit_of = vec![u32::MAX; n * n];
    let idx = |a: Point, b: Point| a as usize * n + b as usize;
    let mut graphs = Vec::new();
    for a in 0..n as Point {
        for b in a + 1..n as Point {
            if orbit_of[idx(a, b)] != u32::MAX {
                continue;
            }
            let id = graphs.len() as u32;
            let mut edges = vec![(a, b)];
            orbit_of[idx(a, b)] = id;
            let mut qi = 0;
            while qi < edges.len() {
                let (x, y) = edges[qi];
                qi += 1;
                for g in group.generators() {
                    let (mut u, mut v) = (g.apply(x), g.apply(y));
                    if u > v {
                        std::mem::swap(&mut u, &mut v);
                    }
                    if orbit_of[idx(u, v)] == u32::MAX {
                        orbit_of[idx(u, v)] = id;
                        edges.push((u, v));
                    }
                }
            }
            edges.sort_unstable();
            let valency = transitive.then(|| 2 * edges.len() / n);
            graphs.push(OrbitalGraph { edges, valency });
        }
    }
    graphs
}

/// True iff the group is transitive and every orbital graph is connected.
pub fn is_primitive(group: &PermutationGroup) -> bool {
    if !group.is_transitive() {
        return false;
    }
    let n = group.degree();
    orbital_graphs(group).iter().all(|g| g.is_connected(n))
}

/// Connectivity of the subgraph induced on `vertices`: with `target = 1`
/// this is plain connectedness; for larger targets every deletion of
/// `target - 1` vertices must leave a connected graph. Intended for small
/// instances only.
pub fn connectivity_at_least(
    edges: &[(Point, Point)],
    vertices: &[Point],
    target: usize,
    n: usize,
) -> bool {
    if target == 0 {
        return true;
    }
    let graph = OrbitalGraph {
        edges: edges.to_vec(),
        valency: None,
    };
    let adj = graph.adjacency(n);
    if target == 1 {
        return induced_connected(&adj, vertices);
    }
    if vertices.len() <= target {
        // Vertex connectivity is at most |V| - 1 (complete-graph convention).
        return false;
    }
    for removed in subsets(vertices, target - 1) {
        let remaining: Vec<Point> = vertices
            .iter()
            .copied()
            .filter(|v| !removed.contains(v))
            .collect();
        if !induced_connected(&adj, &remaining) {
            return false;
        }
    }
    true
}

fn induced_connected(adj: &[Vec<Point>], vertices: &[Point]) -> bool {
    if vertices.is_empty() {
        return true;
    }
    let inside: std::collections::HashSet<Point> = vertices.iter().copied().collect();
    let mut seen = std::collections::HashSet::new();
    let mut stack = vec![vertices[0]];
    seen.insert(vertices[0]);
    while let Some(x) = stack.pop() {
        for &y in &adj[x as usize] {
            if inside.contains(&y) && seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen.len() == vertices.len()
}

fn subsets(items: &[Point], k: usize) -> Vec<Vec<Point>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(items: &[Point], k: usize, start: usize, current: &mut Vec<Point>, out: &mut Vec<Vec<Point>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..items.len() {
            current.push(items[i]);
            rec(items, k, i + 1, current, out);
            current.pop();
        }
    }
    rec(items, k, 0, &mut current, &mut out);
    out
}
