//! Tree decompositions: validation, a min-fill heuristic, and nice form.

mod nice;

use std::collections::{BTreeSet, VecDeque};

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::graph::{Graph, Vertex};

pub use nice::{niceify, NiceNode, NiceTreeDecomposition, NodeKind};

/// A tree decomposition: one sorted bag per node and the tree edges between nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<Vec<Vertex>>,
    edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NotATree { reason: String },
    BagVertexOutOfRange { node: usize, vertex: Vertex },
    MissingVertex { vertex: Vertex },
    MissingEdge { u: Vertex, v: Vertex },
    DisconnectedOccurrence { vertex: Vertex, pieces: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl TreeDecomposition {
    /// Bags are sorted and deduplicated; no validity check is made here.
    pub fn new(bags: Vec<Vec<Vertex>>, edges: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        TreeDecomposition { bags, edges }
    }

    /// The trivial decomposition with one bag holding every vertex.
    pub fn single_bag(g: &Graph) -> Self {
        TreeDecomposition::new(vec![g.vertices().collect()], Vec::new())
    }

    pub fn bags(&self) -> &[Vec<Vertex>] {
        &self.bags
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    /// Largest bag size minus one (`-1` is reported as 0 for empty bags).
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    pub(crate) fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            if a < adj.len() && b < adj.len() {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Checks the three decomposition axioms and the tree shape, reporting
    /// every violation with a witness.
    pub fn validate(&self, g: &Graph) -> ValidationReport {
        let mut violations = Vec::new();
        let k = self.bags.len();
        let n = g.vertex_count();

        if k == 0 {
            violations.push(Violation::NotATree { reason: "no nodes".into() });
        } else if self.edges.len() != k - 1 {
            violations.push(Violation::NotATree {
                reason: format!("{} edges for {} nodes", self.edges.len(), k),
            });
        }
        if let Some(&(a, b)) = self.edges.iter().find(|&&(a, b)| a >= k || b >= k || a == b) {
            violations.push(Violation::NotATree {
                reason: format!("bad tree edge ({a}, {b})"),
            });
        }
        let adj = self.adjacency();
        if k > 0 && reachable(&adj, 0, |_| true).count_ones(..) != k {
            violations.push(Violation::NotATree { reason: "tree is disconnected".into() });
        }

        let mut covered = FixedBitSet::with_capacity(n);
        for (node, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= n {
                    violations.push(Violation::BagVertexOutOfRange { node, vertex: v });
                } else {
                    covered.insert(v);
                }
            }
        }
        for v in 0..n {
            if !covered.contains(v) {
                violations.push(Violation::MissingVertex { vertex: v });
            }
        }

        let bag_sets: Vec<FixedBitSet> = self
            .bags
            .iter()
            .map(|bag| {
                let mut s = FixedBitSet::with_capacity(n);
                bag.iter().filter(|&&v| v < n).for_each(|&v| s.insert(v));
                s
            })
            .collect();
        for (u, v) in g.edges() {
            if !bag_sets.iter().any(|s| s.contains(u) && s.contains(v)) {
                violations.push(Violation::MissingEdge { u, v });
            }
        }

        for v in 0..n {
            let holders: Vec<usize> = (0..k).filter(|&i| bag_sets[i].contains(v)).collect();
            if holders.len() <= 1 {
                continue;
            }
            let mut pieces = 0;
            let mut seen = FixedBitSet::with_capacity(k);
            for &start in &holders {
                if seen.contains(start) {
                    continue;
                }
                pieces += 1;
                seen.union_with(&reachable(&adj, start, |i| bag_sets[i].contains(v)));
            }
            if pieces > 1 {
                violations.push(Violation::DisconnectedOccurrence { vertex: v, pieces });
            }
        }
        ValidationReport { violations }
    }

    /// The graph obtained from `g` by turning every bag into a clique.
    pub fn fill_in_graph(&self, g: &Graph) -> Graph {
        let mut filled = g.clone();
        for bag in &self.bags {
            for (i, &u) in bag.iter().enumerate() {
                for &v in &bag[i + 1..] {
                    filled.insert(u, v);
                }
            }
        }
        filled
    }
}

fn reachable(adj: &[Vec<usize>], start: usize, allowed: impl Fn(usize) -> bool) -> FixedBitSet {
    let mut seen = FixedBitSet::with_capacity(adj.len());
    if start >= adj.len() || !allowed(start) {
        return seen;
    }
    seen.insert(start);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if !seen.contains(y) && allowed(y) {
                seen.insert(y);
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Greedy min-fill-in elimination (ties: smaller degree, then smaller id).
pub fn min_fill_ordering(g: &Graph) -> Vec<Vertex> {
    let n = g.vertex_count();
    let mut adj: Vec<FixedBitSet> = g.vertices().map(|v| g.neighbor_row(v).clone()).collect();
    let mut alive = FixedBitSet::with_capacity(n);
    alive.insert_range(..);
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let (v, _) = alive
            .ones()
            .map(|v| {
                let nb: Vec<Vertex> = adj[v].ones().collect();
                let mut fill = 0usize;
                for (i, &a) in nb.iter().enumerate() {
                    fill += nb[i + 1..].iter().filter(|&&b| !adj[a].contains(b)).count();
                }
                (v, (fill, nb.len(), v))
            })
            .min_by_key(|&(_, key)| key)
            .expect("alive vertex");
        let nb: Vec<Vertex> = adj[v].ones().collect();
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        for &a in &nb {
            adj[a].set(v, false);
        }
        alive.set(v, false);
        order.push(v);
    }
    order
}

/// Builds the decomposition induced by an elimination ordering.
pub fn decomposition_from_ordering(g: &Graph, order: &[Vertex]) -> TreeDecomposition {
    let n = g.vertex_count();
    if n == 0 {
        return TreeDecomposition::new(vec![Vec::new()], Vec::new());
    }
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut adj: Vec<BTreeSet<Vertex>> = g.vertices().map(|v| g.neighbors(v).collect()).collect();
    let mut bags = Vec::with_capacity(n);
    let mut parent: Vec<Option<usize>> = vec![None; n];
    for (i, &v) in order.iter().enumerate() {
        let later: Vec<Vertex> = adj[v].iter().copied().filter(|&u| position[u] > i).collect();
        for (a_idx, &a) in later.iter().enumerate() {
            for &b in &later[a_idx + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        parent[i] = later.iter().map(|&u| position[u]).min();
        let mut bag = later;
        bag.push(v);
        bags.push(bag);
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut roots = Vec::new();
    for (i, p) in parent.iter().enumerate() {
        match p {
            Some(p) => edges.push((i, *p)),
            None => roots.push(i),
        }
    }
    // join the forest of components into one tree
    for pair in roots.windows(2) {
        edges.push((pair[0], pair[1]));
    }
    TreeDecomposition::new(bags, edges)
}

/// A valid (not necessarily optimal) decomposition from min-fill elimination.
pub fn heuristic_decomposition(g: &Graph) -> TreeDecomposition {
    decomposition_from_ordering(g, &min_fill_ordering(g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_bag_on_edge_is_valid() {
        let g = Graph::complete(2);
        let td = TreeDecomposition::new(vec![vec![0, 1]], vec![]);
        assert!(td.validate(&g).is_valid());
        assert_eq!(td.width(), 1);
    }

    #[test]
    fn split_edge_is_reported() {
        let g = Graph::complete(2);
        let td = TreeDecomposition::new(vec![vec![0], vec![1]], vec![(0, 1)]);
        assert_eq!(
            td.validate(&g).violations,
            vec![Violation::MissingEdge { u: 0, v: 1 }]
        );
    }

    #[test]
    fn path_two_bags() {
        let g = Graph::path(3);
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        let report = td.validate(&g);
        assert!(report.is_valid(), "{report:?}");
        assert_eq!(td.width(), 1);
    }

    #[test]
    fn reports_missing_vertex_and_disconnection() {
        let g = Graph::path(4);
        let td = TreeDecomposition::new(
            vec![vec![0, 1], vec![2, 3], vec![1, 2]],
            vec![(0, 1), (1, 2)],
        );
        let v = td.validate(&g).violations;
        assert!(v.contains(&Violation::DisconnectedOccurrence { vertex: 1, pieces: 2 }));

        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        assert!(td.validate(&g).violations.contains(&Violation::MissingVertex { vertex: 3 }));
    }

    #[test]
    fn reports_non_tree() {
        let g = Graph::new(2);
        let td = TreeDecomposition::new(vec![vec![0], vec![1]], vec![]);
        assert!(matches!(td.validate(&g).violations[0], Violation::NotATree { .. }));
    }

    #[test]
    fn heuristic_widths() {
        let tree = Graph::from_edges(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        let td = heuristic_decomposition(&tree);
        assert!(td.validate(&tree).is_valid());
        assert_eq!(td.width(), 1);

        let k4 = Graph::complete(4);
        let td = heuristic_decomposition(&k4);
        assert!(td.validate(&k4).is_valid());
        assert_eq!(td.width(), 3);

        let c5 = Graph::cycle(5);
        let td = heuristic_decomposition(&c5);
        assert!(td.validate(&c5).is_valid());
        assert_eq!(td.width(), 2);
    }

    #[test]
    fn heuristic_on_disconnected_and_empty() {
        let g = Graph::from_edges(5, &[(0, 1), (3, 4)]).unwrap();
        let td = heuristic_decomposition(&g);
        assert!(td.validate(&g).is_valid());
        let empty = Graph::new(0);
        assert!(heuristic_decomposition(&empty).validate(&empty).is_valid());
    }
}
