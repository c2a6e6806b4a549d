//! Induced (optionally color-respecting) embeddings of labeled pattern subsets.

use std::ops::ControlFlow;

use arrayvec::ArrayVec;
use fixedbitset::FixedBitSet;

use crate::graph::{Graph, Vertex};
use crate::pattern::{Coloring, Label, LabelSet, Pattern, MAX_PATTERN_SIZE};

/// An injective map from a label subset `D` into the graph that preserves
/// adjacency and non-adjacency exactly.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Embedding {
    domain: LabelSet,
    /// Image of each label of `domain`, in increasing label order.
    images: ArrayVec<Vertex, MAX_PATTERN_SIZE>,
}

impl Embedding {
    pub fn domain(&self) -> LabelSet {
        self.domain
    }

    pub fn image(&self, label: Label) -> Option<Vertex> {
        self.domain
            .contains(label)
            .then(|| self.images[self.domain.rank(label)])
    }

    /// Images in increasing label order.
    pub fn images(&self) -> &[Vertex] {
        &self.images
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Label, Vertex)> + '_ {
        self.domain.iter().zip(self.images.iter().copied())
    }

    /// Label mapped to `v`, if any.
    pub fn preimage(&self, v: Vertex) -> Option<Label> {
        self.pairs().find(|&(_, w)| w == v).map(|(l, _)| l)
    }

    /// Re-checks the induced-embedding conditions from scratch.
    pub fn is_valid(&self, g: &Graph, pattern: &Pattern, coloring: Option<&Coloring>) -> bool {
        let pairs: Vec<_> = self.pairs().collect();
        for (i, &(a, u)) in pairs.iter().enumerate() {
            if coloring.is_some_and(|c| c.label(u) != a) {
                return false;
            }
            for &(b, v) in &pairs[i + 1..] {
                if u == v || g.has_edge(u, v) != pattern.adjacent(a, b) {
                    return false;
                }
            }
        }
        true
    }
}

/// Backtracking matcher for one label subset over a vertex scope.
struct Matcher<'a> {
    g: &'a Graph,
    pattern: &'a Pattern,
    coloring: Option<&'a Coloring>,
    scope: &'a [Vertex],
    in_scope: FixedBitSet,
    order: ArrayVec<Label, MAX_PATTERN_SIZE>,
}

impl<'a> Matcher<'a> {
    fn new(
        g: &'a Graph,
        pattern: &'a Pattern,
        domain: LabelSet,
        scope: &'a [Vertex],
        coloring: Option<&'a Coloring>,
    ) -> Self {
        let mut in_scope = FixedBitSet::with_capacity(g.vertex_count());
        for &v in scope {
            in_scope.insert(v);
        }
        Matcher {
            g,
            pattern,
            coloring,
            scope,
            in_scope,
            order: placement_order(pattern, domain),
        }
    }

    fn run<F>(&self, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[(Label, Vertex)]) -> ControlFlow<()>,
    {
        let mut placed: ArrayVec<(Label, Vertex), MAX_PATTERN_SIZE> = ArrayVec::new();
        self.extend(&mut placed, visit)
    }

    fn extend<F>(
        &self,
        placed: &mut ArrayVec<(Label, Vertex), MAX_PATTERN_SIZE>,
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[(Label, Vertex)]) -> ControlFlow<()>,
    {
        let depth = placed.len();
        if depth == self.order.len() {
            return visit(placed);
        }
        let label = self.order[depth];
        let anchor = placed
            .iter()
            .find(|&&(b, _)| self.pattern.adjacent(label, b))
            .map(|&(_, v)| v);
        let mut try_vertex = |x: Vertex, placed: &mut ArrayVec<(Label, Vertex), MAX_PATTERN_SIZE>| {
            if self.coloring.is_some_and(|c| c.label(x) != label) {
                return ControlFlow::Continue(());
            }
            for &(b, v) in placed.iter() {
                if v == x || self.g.has_edge(v, x) != self.pattern.adjacent(label, b) {
                    return ControlFlow::Continue(());
                }
            }
            placed.push((label, x));
            let flow = self.extend(placed, visit);
            placed.pop();
            flow
        };
        match anchor {
            Some(a) => {
                for x in self.g.neighbors(a) {
                    if self.in_scope.contains(x) {
                        try_vertex(x, placed)?;
                    }
                }
            }
            None => {
                for &x in self.scope {
                    try_vertex(x, placed)?;
                }
            }
        }
        ControlFlow::Continue(())
    }
}

/// Placement order: highest degree inside `domain` first, then repeatedly the
/// label with most already-placed neighbors (ties: degree, then label).
fn placement_order(pattern: &Pattern, domain: LabelSet) -> ArrayVec<Label, MAX_PATTERN_SIZE> {
    let mut order = ArrayVec::new();
    let mut left = domain;
    let mut placed = LabelSet::EMPTY;
    while !left.is_empty() {
        let next = left
            .iter()
            .max_by_key(|&l| {
                let nb = pattern.neighbors(l);
                (
                    nb.intersection(placed).len(),
                    nb.intersection(domain).len(),
                    std::cmp::Reverse(l),
                )
            })
            .expect("non-empty");
        order.push(next);
        placed = placed.with(next);
        left = left.without(next);
    }
    order
}

fn to_embedding(domain: LabelSet, placed: &[(Label, Vertex)]) -> Embedding {
    let mut pairs: ArrayVec<(Label, Vertex), MAX_PATTERN_SIZE> = placed.iter().copied().collect();
    pairs.sort_unstable();
    Embedding {
        domain,
        images: pairs.iter().map(|&(_, v)| v).collect(),
    }
}

/// Calls `visit` for every induced embedding of `domain` into `scope`, in
/// search order. Returning `Break` stops the enumeration.
pub fn for_each_embedding<F>(
    g: &Graph,
    pattern: &Pattern,
    domain: LabelSet,
    scope: &[Vertex],
    coloring: Option<&Coloring>,
    mut visit: F,
) -> ControlFlow<()>
where
    F: FnMut(&Embedding) -> ControlFlow<()>,
{
    debug_assert!(domain.is_subset(pattern.all()));
    let m = Matcher::new(g, pattern, domain, scope, coloring);
    m.run(&mut |placed| visit(&to_embedding(domain, placed)))
}

/// All induced embeddings of the labels `domain` into `scope`, sorted
/// lexicographically by their image tuples (label order).
pub fn enumerate_induced_embeddings(
    g: &Graph,
    pattern: &Pattern,
    domain: LabelSet,
    scope: &[Vertex],
    coloring: Option<&Coloring>,
) -> Vec<Embedding> {
    let mut out = Vec::new();
    let _ = for_each_embedding(g, pattern, domain, scope, coloring, |e| {
        out.push(e.clone());
        ControlFlow::Continue(())
    });
    out.sort_unstable_by(|a, b| a.images.cmp(&b.images));
    out
}

/// True iff no induced (color-respecting) copy of the whole pattern lies in `scope`.
pub fn is_pattern_free(
    g: &Graph,
    pattern: &Pattern,
    scope: &[Vertex],
    coloring: Option<&Coloring>,
) -> bool {
    for_each_embedding(g, pattern, pattern.all(), scope, coloring, |_| ControlFlow::Break(()))
        .is_continue()
}

/// `V(G) \ removed`, sorted.
pub fn remaining_vertices(g: &Graph, removed: &[Vertex]) -> Vec<Vertex> {
    let mut gone = FixedBitSet::with_capacity(g.vertex_count());
    for &v in removed {
        gone.insert(v);
    }
    g.vertices().filter(|&v| !gone.contains(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all(g: &Graph) -> Vec<Vertex> {
        g.vertices().collect()
    }

    #[test]
    fn triangle_automorphisms() {
        let g = Graph::complete(3);
        let h = Pattern::parse("K3").unwrap();
        let embs = enumerate_induced_embeddings(&g, &h, h.all(), &all(&g), None);
        assert_eq!(embs.len(), 6);
        assert_eq!(embs[0].images(), &[0, 1, 2]);
        assert_eq!(embs[5].images(), &[2, 1, 0]);
    }

    #[test]
    fn path_has_no_triangle() {
        let g = Graph::path(3);
        let h = Pattern::parse("K3").unwrap();
        assert!(enumerate_induced_embeddings(&g, &h, h.all(), &all(&g), None).is_empty());
    }

    #[test]
    fn c5_has_no_induced_c4() {
        // oracle: check all 4-subsets of C5 directly
        let g = Graph::cycle(5);
        let brute = (0..5usize).any(|skip| {
            let vs: Vec<_> = (0..5).filter(|&v| v != skip).collect();
            let sub = g.induced(&vs);
            sub.edge_count() == 4 && sub.vertices().all(|v| sub.degree(v) == 2)
        });
        assert!(!brute);
        let h = Pattern::parse("K2,2").unwrap();
        assert!(enumerate_induced_embeddings(&g, &h, h.all(), &all(&g), None).is_empty());
    }

    #[test]
    fn pattern_free_examples() {
        let k4 = Graph::complete(4);
        assert!(!is_pattern_free(&k4, &Pattern::parse("K3").unwrap(), &all(&k4), None));
        assert!(is_pattern_free(&k4, &Pattern::parse("I2").unwrap(), &all(&k4), None));
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(!is_pattern_free(&star, &Pattern::parse("K1,3").unwrap(), &all(&star), None));
    }

    #[test]
    fn partial_domain_and_scope() {
        // P4: 0-1-2-3; labeled edge {z0,z1} of P3 maps onto each oriented edge
        let g = Graph::path(4);
        let h = Pattern::parse("P3").unwrap();
        let d = LabelSet::EMPTY.with(0).with(1);
        let embs = enumerate_induced_embeddings(&g, &h, d, &all(&g), None);
        assert_eq!(embs.len(), 6);
        let scoped = enumerate_induced_embeddings(&g, &h, d, &[0, 1, 3], None);
        assert_eq!(scoped.len(), 2);
        assert!(scoped.iter().all(|e| e.is_valid(&g, &h, None)));
    }

    #[test]
    fn coloring_filters() {
        let g = Graph::complete(3);
        let h = Pattern::parse("K3").unwrap();
        let c = Coloring::new(vec![2, 0, 1], 3).unwrap();
        let embs = enumerate_induced_embeddings(&g, &h, h.all(), &all(&g), Some(&c));
        assert_eq!(embs.len(), 1);
        assert_eq!(embs[0].images(), &[1, 2, 0]);
    }
}
