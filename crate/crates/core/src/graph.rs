//! Simple undirected graphs with contiguous vertex ids.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;

use crate::{Error, Result};

pub type Vertex = usize;

/// Undirected simple graph on vertices `0..n`.
///
/// Adjacency is kept both as one bitset row per vertex (constant-time probes)
/// and as an ordered edge set (deterministic iteration).
#[derive(Clone, Debug)]
pub struct Graph {
    rows: Vec<FixedBitSet>,
    edges: BTreeSet<(Vertex, Vertex)>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.rows.len() == other.rows.len() && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph {
            rows: (0..n).map(|_| FixedBitSet::with_capacity(n)).collect(),
            edges: BTreeSet::new(),
        }
    }

    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.insert(u, v);
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::new(n);
        for v in 1..n {
            g.insert(v - 1, v);
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.insert(0, n - 1);
        }
        g
    }

    /// Adds an edge; adding an existing edge is a no-op.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        let n = self.vertex_count();
        if u >= n || v >= n {
            return Err(Error::VertexOutOfRange {
                vertex: u.max(v),
                n,
            });
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        self.insert(u, v);
        Ok(())
    }

    pub(crate) fn insert(&mut self, u: Vertex, v: Vertex) {
        debug_assert!(u != v);
        self.rows[u].insert(v);
        self.rows[v].insert(u);
        self.edges.insert((u.min(v), u.max(v)));
    }

    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) {
        if u < self.rows.len() && v < self.rows.len() {
            self.rows[u].set(v, false);
            self.rows[v].set(u, false);
            self.edges.remove(&(u.min(v), u.max(v)));
        }
    }

    /// Appends `count` isolated vertices and returns the id of the first one.
    pub fn add_vertices(&mut self, count: usize) -> Vertex {
        let first = self.rows.len();
        let n = first + count;
        for row in &mut self.rows {
            row.grow(n);
        }
        self.rows
            .extend((0..count).map(|_| FixedBitSet::with_capacity(n)));
        first
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.rows[u].contains(v)
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.rows.len()
    }

    /// Edges as ordered pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.edges.iter().copied()
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.rows[v].ones()
    }

    pub fn neighbor_row(&self, v: Vertex) -> &FixedBitSet {
        &self.rows[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.rows[v].count_ones(..)
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn complement(&self) -> Graph {
        let n = self.vertex_count();
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if !self.has_edge(u, v) {
                    g.insert(u, v);
                }
            }
        }
        g
    }

    /// Induced subgraph on `keep`; vertex `keep[i]` becomes vertex `i`.
    pub fn induced(&self, keep: &[Vertex]) -> Graph {
        let mut g = Graph::new(keep.len());
        for (i, &u) in keep.iter().enumerate() {
            for (j, &v) in keep.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.insert(i, j);
                }
            }
        }
        g
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.vertex_count()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let offset = self.vertex_count();
        let mut g = self.clone();
        g.add_vertices(other.vertex_count());
        for (u, v) in other.edges() {
            g.insert(u + offset, v + offset);
        }
        g
    }

    pub fn is_clique(&self, vs: &[Vertex]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(i, &u)| vs[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    pub fn is_independent(&self, vs: &[Vertex]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(i, &u)| vs[i + 1..].iter().all(|&v| !self.has_edge(u, v)))
    }

    /// Connected components restricted to `scope` (all vertices when `None`),
    /// each sorted, listed by smallest member.
    pub fn components(&self, scope: Option<&[Vertex]>) -> Vec<Vec<Vertex>> {
        let n = self.vertex_count();
        let mut allowed = FixedBitSet::with_capacity(n);
        match scope {
            Some(s) => s.iter().for_each(|&v| allowed.insert(v)),
            None => allowed.insert_range(..),
        }
        let mut seen = FixedBitSet::with_capacity(n);
        let mut out = Vec::new();
        for start in allowed.ones() {
            if seen.contains(start) {
                continue;
            }
            seen.insert(start);
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for w in self.rows[u].ones() {
                    if allowed.contains(w) && !seen.contains(w) {
                        seen.insert(w);
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components(None).len() <= 1
    }
}
