use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::TreeDecomposition;
use crate::graph::{Graph, Vertex};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NodeKind {
    Leaf,
    Introduce(Vertex),
    Forget(Vertex),
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NodeKind,
    /// Sorted bag.
    pub bag: Vec<Vertex>,
    pub children: Vec<usize>,
}

/// A rooted nice tree decomposition. Node ids are assigned bottom-up, so every
/// child has a smaller id than its parent and increasing id order is a post-order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    nodes: Vec<NiceNode>,
    root: usize,
}

impl NiceTreeDecomposition {
    pub fn nodes(&self) -> &[NiceNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &NiceNode {
        &self.nodes[id]
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0).saturating_sub(1)
    }

    /// Largest bag size.
    pub fn max_bag(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0)
    }

    /// Parent of every node (`None` for the root).
    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.nodes.len()];
        for (id, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                parent[c] = Some(id);
            }
        }
        parent
    }

    /// Vertices introduced somewhere in the subtree of every node (`V_w`).
    pub fn subtree_vertices(&self, n: usize) -> Vec<FixedBitSet> {
        let mut sets: Vec<FixedBitSet> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let mut s = FixedBitSet::with_capacity(n);
            for &c in &node.children {
                s.union_with(&sets[c]);
            }
            if let NodeKind::Introduce(v) = node.kind {
                s.insert(v);
            }
            sets.push(s);
        }
        sets
    }

    /// The underlying (unrooted) tree decomposition.
    pub fn to_tree_decomposition(&self) -> TreeDecomposition {
        let bags = self.nodes.iter().map(|n| n.bag.clone()).collect();
        let edges = self
            .nodes
            .iter()
            .enumerate()
            .flat_map(|(id, n)| n.children.iter().map(move |&c| (c, id)))
            .collect();
        TreeDecomposition::new(bags, edges)
    }

    /// Checks every node-kind rule plus the decomposition axioms for `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let bad = |id: usize, msg: &str| Err(Error::InvalidDecomposition(format!("node {id}: {msg}")));
        if !self.nodes[self.root].bag.is_empty() {
            return bad(self.root, "root bag is not empty");
        }
        let parents = self.parents();
        if parents.iter().filter(|p| p.is_none()).count() != 1 || parents[self.root].is_some() {
            return Err(Error::InvalidDecomposition("expected exactly one parentless root".into()));
        }
        for (id, node) in self.nodes.iter().enumerate() {
            if node.children.iter().any(|&c| c >= id) {
                return bad(id, "child id not below parent id");
            }
            let child_bag = |i: usize| &self.nodes[node.children[i]].bag;
            match node.kind {
                NodeKind::Leaf => {
                    if !node.children.is_empty() || !node.bag.is_empty() {
                        return bad(id, "leaf must be childless with an empty bag");
                    }
                }
                NodeKind::Introduce(v) => {
                    if node.children.len() != 1 {
                        return bad(id, "introduce needs one child");
                    }
                    let mut expect = child_bag(0).clone();
                    if expect.contains(&v) {
                        return bad(id, "introduced vertex already in child bag");
                    }
                    expect.push(v);
                    expect.sort_unstable();
                    if expect != node.bag {
                        return bad(id, "introduce bag mismatch");
                    }
                }
                NodeKind::Forget(v) => {
                    if node.children.len() != 1 {
                        return bad(id, "forget needs one child");
                    }
                    let child = child_bag(0);
                    if !child.contains(&v) {
                        return bad(id, "forgotten vertex not in child bag");
                    }
                    let expect: Vec<Vertex> = child.iter().copied().filter(|&u| u != v).collect();
                    if expect != node.bag {
                        return bad(id, "forget bag mismatch");
                    }
                }
                NodeKind::Join => {
                    if node.children.len() != 2 {
                        return bad(id, "join needs two children");
                    }
                    if child_bag(0) != &node.bag || child_bag(1) != &node.bag {
                        return bad(id, "join bags differ");
                    }
                }
            }
        }
        let report = self.to_tree_decomposition().validate(g);
        if !report.is_valid() {
            return Err(Error::InvalidDecomposition(format!("{:?}", report.violations)));
        }
        Ok(())
    }

    fn push(&mut self, kind: NodeKind, bag: Vec<Vertex>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { kind, bag, children });
        self.nodes.len() - 1
    }

    /// Walks from bag `from` (at node `top`) to bag `to`: forgets first, then
    /// introduces, each in increasing vertex order.
    fn transition(&mut self, mut top: usize, to: &[Vertex]) -> usize {
        let from = self.nodes[top].bag.clone();
        for &v in from.iter().filter(|v| to.binary_search(v).is_err()) {
            let bag: Vec<Vertex> = self.nodes[top].bag.iter().copied().filter(|&u| u != v).collect();
            top = self.push(NodeKind::Forget(v), bag, vec![top]);
        }
        for &v in to.iter().filter(|v| from.binary_search(v).is_err()) {
            let mut bag = self.nodes[top].bag.clone();
            let at = bag.binary_search(&v).unwrap_err();
            bag.insert(at, v);
            top = self.push(NodeKind::Introduce(v), bag, vec![top]);
        }
        top
    }
}

/// Converts a valid decomposition into nice form of the same width, rooted at
/// decomposition node 0. Nodes with more than two children are binarized by a
/// chain of joins over copies of the same bag.
pub fn niceify(td: &TreeDecomposition, g: &Graph) -> Result<NiceTreeDecomposition> {
    let report = td.validate(g);
    if !report.is_valid() {
        return Err(Error::InvalidDecomposition(format!("{:?}", report.violations)));
    }
    let adj = td.adjacency();
    let k = td.node_count();

    // root at 0; order nodes so that children precede parents
    let mut parent = vec![usize::MAX; k];
    let mut order = Vec::with_capacity(k);
    let mut stack = vec![0usize];
    parent[0] = 0;
    while let Some(x) = stack.pop() {
        order.push(x);
        for &y in adj[x].iter().rev() {
            if parent[y] == usize::MAX {
                parent[y] = x;
                stack.push(y);
            }
        }
    }
    let mut children = vec![Vec::new(); k];
    for &x in &order[1..] {
        children[parent[x]].push(x);
    }
    for c in &mut children {
        c.sort_unstable();
    }

    let mut nice = NiceTreeDecomposition { nodes: Vec::new(), root: 0 };
    let mut top = vec![usize::MAX; k];
    for &x in order.iter().rev() {
        let bag = &td.bags()[x];
        let branches: Vec<usize> = if children[x].is_empty() {
            let leaf = nice.push(NodeKind::Leaf, Vec::new(), Vec::new());
            vec![nice.transition(leaf, bag)]
        } else {
            children[x].iter().map(|&c| nice.transition(top[c], bag)).collect()
        };
        let mut acc = branches[0];
        for &b in &branches[1..] {
            acc = nice.push(NodeKind::Join, bag.clone(), vec![acc, b]);
        }
        top[x] = acc;
    }
    nice.root = nice.transition(top[0], &[]);
    debug_assert!(nice.validate(g).is_ok());
    Ok(nice)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::heuristic_decomposition;

    #[test]
    fn single_vertex_chain() {
        let g = Graph::new(1);
        let td = TreeDecomposition::new(vec![vec![0]], vec![]);
        let nice = niceify(&td, &g).unwrap();
        let kinds: Vec<NodeKind> = nice.nodes().iter().map(|n| n.kind).collect();
        assert_eq!(kinds, vec![NodeKind::Leaf, NodeKind::Introduce(0), NodeKind::Forget(0)]);
        assert_eq!(nice.root(), 2);
    }

    #[test]
    fn path_introduces_each_vertex_once() {
        let g = Graph::path(3);
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        let nice = niceify(&td, &g).unwrap();
        nice.validate(&g).unwrap();
        let count = |f: fn(&NodeKind) -> bool| nice.nodes().iter().filter(|n| f(&n.kind)).count();
        assert_eq!(count(|k| matches!(k, NodeKind::Introduce(_))), 3);
        assert_eq!(count(|k| matches!(k, NodeKind::Forget(_))), 3);
        assert_eq!(nice.width(), 1);
    }

    #[test]
    fn star_of_bags_is_binarized() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let td = TreeDecomposition::new(
            vec![vec![0], vec![0, 1], vec![0, 2], vec![0, 3]],
            vec![(0, 1), (0, 2), (0, 3)],
        );
        let nice = niceify(&td, &g).unwrap();
        nice.validate(&g).unwrap();
        assert!(nice.nodes().iter().all(|n| n.children.len() <= 2));
        assert_eq!(nice.nodes().iter().filter(|n| n.kind == NodeKind::Join).count(), 2);
    }

    #[test]
    fn rejects_invalid_input() {
        let g = Graph::complete(2);
        let td = TreeDecomposition::new(vec![vec![0], vec![1]], vec![(0, 1)]);
        assert!(matches!(niceify(&td, &g), Err(Error::InvalidDecomposition(_))));
    }

    #[test]
    fn empty_graph() {
        let g = Graph::new(0);
        let nice = niceify(&heuristic_decomposition(&g), &g).unwrap();
        assert_eq!(nice.node_count(), 1);
        assert_eq!(nice.node(nice.root()).kind, NodeKind::Leaf);
    }
}
