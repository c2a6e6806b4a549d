use serde::Serialize;

use super::constructions::{Construction, DeletionInstance};
use crate::decomp::TreeDecomposition;
use crate::graph::{Graph, Vertex};
use crate::oracle::min_hitting_set;
use crate::pattern::{Coloring, Label, Pattern};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VcKind {
    K3,
    I3,
    K2K1,
}

impl VcKind {
    pub fn construction(self) -> Construction {
        match self {
            VcKind::K3 => Construction::VcK3,
            VcKind::I3 => Construction::VcI3,
            VcKind::K2K1 => Construction::VcK2K1,
        }
    }

    fn pattern(self) -> &'static str {
        match self {
            VcKind::K3 => "K3",
            VcKind::I3 => "I3",
            VcKind::K2K1 => "K2+I1",
        }
    }
}

/// Bookkeeping of an edge-replacement instance. Original vertices keep
/// their ids `0..original`.
#[derive(Clone, Debug, Serialize)]
pub struct VcLayout {
    pub original: usize,
    pub edges: Vec<(Vertex, Vertex)>,
    /// Per edge, the five new vertices `[p, q, r, t, y]`: triangles
    /// `{u, p, q}`, `{r, p, t}`, `{v, y, t}`.
    pub gadgets: Vec<[Vertex; 5]>,
}

impl VcLayout {
    /// Hitting budget matching a cover of size `k`: one vertex per gadget
    /// plus the cover.
    pub fn budget_for(&self, k: usize) -> usize {
        k + self.edges.len()
    }

    /// The relation `k ↦ 2k` as stated for the construction.
    pub fn stated_budget_for(&self, k: usize) -> usize {
        2 * k
    }
}

/// Minimum vertex cover size and one cover.
pub fn min_vertex_cover(g: &Graph) -> (usize, Vec<Vertex>) {
    let edges: Vec<Vec<Vertex>> = g.edges().map(|(u, v)| vec![u, v]).collect();
    min_hitting_set(&edges, g.vertex_count())
}

/// Replaces each edge by a chain of three colorful triangles, then
/// complements per `kind`.
pub fn reduce_vc_colorful(g: &Graph, kind: VcKind) -> Result<DeletionInstance> {
    if let Some(v) = g.vertices().find(|&v| g.degree(v) > 3) {
        return Err(Error::Construction(format!(
            "vertex {v} has degree {}, the construction needs maximum degree at most 3",
            g.degree(v)
        )));
    }
    let n = g.vertex_count();
    let edges: Vec<(Vertex, Vertex)> = g.edges().collect();
    let mut out = Graph::new(n);
    let mut colors: Vec<Label> = vec![0; n];
    let mut gadgets = Vec::with_capacity(edges.len());
    for &(u, v) in &edges {
        let first = out.add_vertices(5);
        let [p, q, r, t, y] = [first, first + 1, first + 2, first + 3, first + 4];
        colors.extend([1, 2, 0, 2, 1]);
        for tri in [[u, p, q], [r, p, t], [v, y, t]] {
            out.insert(tri[0], tri[1]);
            out.insert(tri[0], tri[2]);
            out.insert(tri[1], tri[2]);
        }
        gadgets.push([p, q, r, t, y]);
    }
    let total = out.vertex_count();
    let flip = |a: Label, b: Label| match kind {
        VcKind::K3 => false,
        VcKind::I3 => a != b,
        VcKind::K2K1 => a != b && (a == 2 || b == 2),
    };
    let mut graph = Graph::new(total);
    for a in 0..total {
        for b in a + 1..total {
            if out.has_edge(a, b) != flip(colors[a], colors[b]) {
                graph.insert(a, b);
            }
        }
    }
    let coloring = Coloring::new(colors, 3)?;
    let layout = VcLayout { original: n, edges, gadgets };
    let budget = layout.budget_for(min_vertex_cover(g).0);
    let hint = TreeDecomposition::single_bag(&graph);
    Ok(DeletionInstance {
        construction: kind.construction(),
        graph,
        pattern: Pattern::parse(kind.pattern())?,
        coloring: Some(coloring),
        budget,
        h: 3,
        x: None,
        layout: None,
        vc: Some(layout),
        core: vec![0, 1, 2],
        hint,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::solve_with_limit;

    #[test]
    fn single_edge() {
        let inst = reduce_vc_colorful(&Graph::complete(2), VcKind::K3).unwrap();
        assert_eq!(inst.graph.vertex_count(), 7);
        let occ = crate::oracle::enumerate_occurrences(&inst.graph, &inst.pattern, inst.coloring.as_ref());
        assert_eq!(occ.len(), 3);
        let sol = solve_with_limit(&inst.graph, &inst.pattern, inst.coloring.as_ref(), None).unwrap();
        assert_eq!(sol.opt, 2);
    }

    #[test]
    fn sizes_and_degree_guard() {
        let inst = reduce_vc_colorful(&Graph::path(3), VcKind::I3).unwrap();
        assert_eq!(inst.graph.vertex_count(), 13);
        let star = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert!(reduce_vc_colorful(&star, VcKind::K3).is_err());
    }

    #[test]
    fn cycle_needs_one_per_gadget_plus_cover() {
        // the middle triangle {r, p, t} avoids both endpoints
        let inst = reduce_vc_colorful(&Graph::cycle(4), VcKind::K3).unwrap();
        let sol = solve_with_limit(&inst.graph, &inst.pattern, inst.coloring.as_ref(), None).unwrap();
        assert_eq!(min_vertex_cover(&Graph::cycle(4)).0, 2);
        assert_eq!(sol.opt, 6);
        assert_eq!(inst.budget, 6);
    }
}
