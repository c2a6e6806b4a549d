use serde::Serialize;

use super::frame::{build_frame, FrameColors, FrameLayout, FrameSpec, Gadget, Side};
use super::formula::Formula;
use super::vc::VcLayout;
use crate::decomp::TreeDecomposition;
use crate::graph::{Graph, Vertex};
use crate::pattern::{Coloring, Label, Pattern};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Construction {
    #[serde(rename = "k-e")]
    KMinusE,
    #[serde(rename = "kh+i2")]
    KhI2,
    #[serde(rename = "kvx")]
    Kvx,
    #[serde(rename = "khh")]
    Khh,
    #[serde(rename = "colorful")]
    Colorful,
    #[serde(rename = "vc-k3")]
    VcK3,
    #[serde(rename = "vc-i3")]
    VcI3,
    #[serde(rename = "vc-k2k1")]
    VcK2K1,
}

impl Construction {
    pub const ALL: [Construction; 8] = [
        Construction::KMinusE,
        Construction::KhI2,
        Construction::Kvx,
        Construction::Khh,
        Construction::Colorful,
        Construction::VcK3,
        Construction::VcI3,
        Construction::VcK2K1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Construction::KMinusE => "k-e",
            Construction::KhI2 => "kh+i2",
            Construction::Kvx => "kvx",
            Construction::Khh => "khh",
            Construction::Colorful => "colorful",
            Construction::VcK3 => "vc-k3",
            Construction::VcI3 => "vc-i3",
            Construction::VcK2K1 => "vc-k2k1",
        }
    }

    pub fn is_vertex_cover(self) -> bool {
        matches!(self, Construction::VcK3 | Construction::VcI3 | Construction::VcK2K1)
    }
}

impl std::str::FromStr for Construction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Construction::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Construction(format!("unknown construction {s:?}")))
    }
}

impl std::fmt::Display for Construction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A generated H-IS-Deletion instance with its budget and bookkeeping.
#[derive(Clone, Debug)]
pub struct DeletionInstance {
    pub construction: Construction,
    pub graph: Graph,
    pub pattern: Pattern,
    pub coloring: Option<Coloring>,
    pub budget: usize,
    pub h: usize,
    pub x: Option<usize>,
    pub layout: Option<FrameLayout>,
    pub vc: Option<VcLayout>,
    /// Labels of the pattern component the frame is built around.
    pub core: Vec<Label>,
    pub hint: TreeDecomposition,
}

#[derive(Clone, Debug, Serialize)]
pub struct Counts {
    pub vertices: usize,
    pub edges: usize,
    pub m: usize,
    pub t: usize,
    pub a: usize,
    pub b: usize,
    pub l_copies: usize,
    pub variables: usize,
    pub clauses: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub construction: Construction,
    pub h: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<usize>,
    pub s: usize,
    pub k: usize,
    pub counts: Counts,
}

impl DeletionInstance {
    pub fn manifest(&self) -> Manifest {
        let counts = match (&self.layout, &self.vc) {
            (Some(l), _) => Counts {
                vertices: self.graph.vertex_count(),
                edges: self.graph.edge_count(),
                m: l.s * l.columns,
                t: l.t.len(),
                a: l.a_sets.iter().map(Vec::len).sum(),
                b: l.b_set.len(),
                l_copies: l.copies.len(),
                variables: l.variables.first().map_or(0, Vec::len),
                clauses: l.b.len(),
            },
            (None, Some(v)) => Counts {
                vertices: self.graph.vertex_count(),
                edges: self.graph.edge_count(),
                m: 0,
                t: 0,
                a: v.original,
                b: 0,
                l_copies: v.gadgets.len(),
                variables: 0,
                clauses: 0,
            },
            (None, None) => unreachable!("instance without layout"),
        };
        Manifest {
            construction: self.construction,
            h: self.h,
            x: self.x,
            s: self.layout.as_ref().map_or(0, |l| l.s),
            k: self.budget,
            counts,
        }
    }
}

/// `2n + Σ_C (|C| - 1)` from the raw clauses.
fn base_budget(phi: &Formula) -> usize {
    2 * phi.variable_count() + phi.clauses().iter().map(|c| c.len() - 1).sum::<usize>()
}

fn closed_form(phi: &Formula, a: usize, b: usize) -> usize {
    (a * phi.variable_count())
        .checked_sub(b * phi.clause_count())
        .expect("budget is non-negative for clean formulas")
}

/// Star decomposition: centre `M'`, one bag `M' ∪ K` per component `K` of `G - M'`.
pub fn star_hint(g: &Graph, central: &[Vertex]) -> TreeDecomposition {
    let mut inside = vec![false; g.vertex_count()];
    central.iter().for_each(|&v| inside[v] = true);
    let rest: Vec<Vertex> = g.vertices().filter(|&v| !inside[v]).collect();
    let mut bags = vec![central.to_vec()];
    let mut edges = Vec::new();
    for comp in g.components(Some(&rest)) {
        let mut bag = central.to_vec();
        bag.extend(comp);
        bag.sort_unstable();
        edges.push((0, bags.len()));
        bags.push(bag);
    }
    TreeDecomposition::new(bags, edges)
}

fn gadget_from_pattern(p: &Pattern, ends: (Label, Label)) -> Gadget {
    Gadget { graph: p.graph().clone(), ends: (ends.0 as Vertex, ends.1 as Vertex), colors: None }
}

fn connect_column_except(g: &mut Graph, layout: &FrameLayout, v: Vertex, j: usize, skip: usize) {
    for i in 0..layout.s {
        if i != skip {
            g.insert(v, layout.m[i][j]);
        }
    }
}

/// Every `(vertex, clause, literal)` on the A side (all copies) and B side.
fn literal_vertices(layout: &FrameLayout) -> Vec<(Side, Vertex, usize, i32)> {
    let mut out = Vec::new();
    for ((c, l), _) in &layout.functions {
        for copy in 0..layout.variables.len() {
            out.push((Side::A, layout.a_vertex(copy, *c, *l), *c, *l));
        }
        out.push((Side::B, layout.b_vertex(*c, *l), *c, *l));
    }
    out
}

fn make_m_multipartite(g: &mut Graph, layout: &FrameLayout) {
    let m = layout.m_vertices();
    for (x, &u) in m.iter().enumerate() {
        for &v in &m[x + 1..] {
            if (u - layout.m[0][0]) % layout.columns != (v - layout.m[0][0]) % layout.columns {
                g.insert(u, v);
            }
        }
    }
}

fn finish(
    construction: Construction,
    graph: Graph,
    pattern: Pattern,
    coloring: Option<Coloring>,
    budget: usize,
    h: usize,
    x: Option<usize>,
    layout: FrameLayout,
    core: Vec<Label>,
) -> DeletionInstance {
    let hint = star_hint(&graph, &layout.central());
    debug_assert!(hint.validate(&graph).is_valid());
    DeletionInstance { construction, graph, pattern, coloring, budget, h, x, layout: Some(layout), vc: None, core, hint }
}

/// `H = K_{h+2} - e`.
pub fn reduce_k_minus_e(phi: &Formula, h: usize) -> Result<DeletionInstance> {
    if h == 0 {
        return Err(Error::Construction("K_{h+2} - e needs h >= 1".into()));
    }
    let pattern = Pattern::named("K-e", &[h + 2])?;
    let l = gadget_from_pattern(&pattern, (h as Label, h as Label + 1));
    let spec = FrameSpec { columns: h, t_size: 0, l_a: &l, l_b: &l, a_copies: 1, colors: None };
    let (mut g, layout, _) = build_frame(phi, &spec)?;
    make_m_multipartite(&mut g, &layout);
    for (_, v, c, lit) in literal_vertices(&layout) {
        for (j, &row) in layout.function(c, lit).iter().enumerate() {
            g.insert(v, layout.m[row][j]);
        }
    }
    let budget = base_budget(phi);
    assert_eq!(budget, closed_form(phi, 5, 1));
    let core = (0..pattern.size() as Label).collect();
    Ok(finish(Construction::KMinusE, g, pattern, None, budget, h, None, layout, core))
}

/// `H = K_h + I_2`.
pub fn reduce_kh_i2(phi: &Formula, h: usize) -> Result<DeletionInstance> {
    if h < 2 {
        return Err(Error::Construction(format!(
            "K_h + I_2 needs h >= 2: the attached K_h must have two distinct attachment vertices (h = {h})"
        )));
    }
    let pattern = Pattern::named("K+I", &[h, 2])?;
    let l = Gadget { graph: Graph::complete(h), ends: (0, 1), colors: None };
    let spec = FrameSpec { columns: h, t_size: 0, l_a: &l, l_b: &l, a_copies: 1, colors: None };
    let (mut g, layout, _) = build_frame(phi, &spec)?;
    let m = layout.m_vertices();
    for (x, &u) in m.iter().enumerate() {
        for &v in &m[x + 1..] {
            g.insert(u, v);
        }
    }
    for (_, v, c, lit) in literal_vertices(&layout) {
        for (j, &row) in layout.function(c, lit).iter().enumerate() {
            connect_column_except(&mut g, &layout, v, j, row);
        }
    }
    for copy in &layout.copies {
        for &v in &copy.internal {
            for &w in &m {
                g.insert(v, w);
            }
        }
    }
    let budget = base_budget(phi);
    assert_eq!(budget, closed_form(phi, 5, 1));
    let core = (0..pattern.size() as Label).collect();
    Ok(finish(Construction::KhI2, g, pattern, None, budget, h, None, layout, core))
}

/// `H = K_{h+1} + v_x`, a clique on `h+1` labels plus label `h+1` adjacent to `0..x`.
pub fn reduce_kvx(phi: &Formula, h: usize, x: usize) -> Result<DeletionInstance> {
    if h == 0 || x + 1 > h {
        return Err(Error::Construction(format!("K_{{h+1}} + v_x needs 0 <= x <= h - 1 (h = {h}, x = {x})")));
    }
    let columns = h - x - 1;
    if columns == 0 {
        return Err(Error::Construction(format!("K_{{h+1}} + v_x needs h - x - 1 >= 1 (h = {h}, x = {x})")));
    }
    let pattern = Pattern::named("Kvx", &[h, x])?;
    let l = if x == 0 {
        Gadget { graph: Graph::complete(h + 1), ends: (0, 1), colors: None }
    } else {
        gadget_from_pattern(&pattern, (0, h as Label + 1))
    };
    let spec = FrameSpec { columns, t_size: x + 1, l_a: &l, l_b: &l, a_copies: 1, colors: None };
    let (mut g, layout, _) = build_frame(phi, &spec)?;
    make_m_multipartite(&mut g, &layout);
    let m = layout.m_vertices();
    let a_all: Vec<Vertex> = layout.a_sets.concat();
    for (i, &s) in layout.t.iter().enumerate() {
        for &t in &layout.t[i + 1..] {
            g.insert(s, t);
        }
        for &v in m.iter().chain(&a_all) {
            g.insert(s, v);
        }
        if i > 0 {
            for &v in &layout.b_set {
                g.insert(s, v);
            }
        }
    }
    for (side, v, c, lit) in literal_vertices(&layout) {
        for (j, &row) in layout.function(c, lit).iter().enumerate() {
            match side {
                Side::A => g.insert(v, layout.m[row][j]),
                Side::B => connect_column_except(&mut g, &layout, v, j, row),
            }
        }
    }
    if x == 0 {
        for copy in layout.copies.iter().filter(|c| c.side == Side::B) {
            for (j, &v) in copy.internal.iter().enumerate().take(columns) {
                for i in 0..layout.s {
                    g.insert(v, layout.m[i][j]);
                }
            }
        }
    }
    let budget = base_budget(phi);
    assert_eq!(budget, closed_form(phi, 5, 1));
    let core = (0..pattern.size() as Label).collect();
    Ok(finish(Construction::Kvx, g, pattern, None, budget, h, Some(x), layout, core))
}

/// `H = K_{h,h}`.
pub fn reduce_khh(phi: &Formula, h: usize) -> Result<DeletionInstance> {
    if h < 2 {
        return Err(Error::Construction(format!("K_{{h,h}} needs h >= 2 (h = {h})")));
    }
    let pattern = Pattern::named("Kab", &[h, h])?;
    let l = gadget_from_pattern(&pattern, (0, 1));
    let spec = FrameSpec { columns: h, t_size: 0, l_a: &l, l_b: &l, a_copies: h - 1, colors: None };
    let (mut g, layout, _) = build_frame(phi, &spec)?;
    for (_, v, c, lit) in literal_vertices(&layout) {
        for (j, &row) in layout.function(c, lit).iter().enumerate() {
            g.insert(v, layout.m[row][j]);
        }
    }
    let budget = base_budget(phi) + 2 * (h - 2) * phi.variable_count();
    assert_eq!(budget, closed_form(phi, 2 * h + 1, 1));
    let core = (0..pattern.size() as Label).collect();
    Ok(finish(Construction::Khh, g, pattern, None, budget, h, None, layout, core))
}

/// Choice of the non-clique component and its distinguished labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColorfulShape {
    /// Labels of the chosen component, increasing.
    pub h0: Vec<Label>,
    pub z0: Label,
    pub z_end: Label,
    /// Remaining labels of the component; column `j` is colored `columns[j]`.
    pub columns: Vec<Label>,
    pub others: Vec<Vec<Label>>,
}

impl ColorfulShape {
    pub fn of(pattern: &Pattern) -> Result<Self> {
        let comps = pattern.components();
        let pos = comps
            .iter()
            .position(|c| {
                let vs: Vec<Vertex> = c.iter().map(|&l| l as Vertex).collect();
                !pattern.graph().is_clique(&vs)
            })
            .ok_or_else(|| Error::Construction("every component of the pattern is a clique".into()))?;
        let mut h0 = comps[pos].clone();
        h0.sort_unstable();
        let (z0, z_end) = h0
            .iter()
            .flat_map(|&a| h0.iter().map(move |&b| (a, b)))
            .find(|&(a, b)| a < b && !pattern.adjacent(a, b))
            .expect("a non-clique component has a non-edge");
        let columns = h0.iter().copied().filter(|&l| l != z0 && l != z_end).collect();
        let others = comps.into_iter().enumerate().filter(|&(i, _)| i != pos).map(|(_, c)| c).collect();
        Ok(ColorfulShape { h0, z0, z_end, columns, others })
    }

    /// Three copies of `H0` glued at two non-separating vertices, attached at
    /// the `anchor` vertices of the first and last copy. Colors are pattern labels.
    pub fn gadget(&self, pattern: &Pattern, anchor: Label) -> Gadget {
        let h0 = &self.h0;
        let k = h0.len();
        let local = |l: Label| h0.iter().position(|&x| x == l).expect("label in component");
        let sub = pattern.graph().induced(&h0.iter().map(|&l| l as Vertex).collect::<Vec<_>>());
        let non_separating: Vec<usize> = (0..k)
            .filter(|&v| {
                let rest: Vec<Vertex> = (0..k).filter(|&u| u != v).collect();
                sub.components(Some(&rest)).len() == 1
            })
            .collect();
        let a = local(anchor);
        let is_path = sub.edge_count() == k - 1 && sub.max_degree() <= 2;
        let (beta, gamma) = if is_path {
            let end = (0..k).find(|&v| v != a && sub.degree(v) == 1).expect("path has two ends");
            let inner = (0..k).find(|&v| v != a && sub.degree(v) == 2).expect("path on 3+ vertices");
            (end, inner)
        } else {
            let mut it = non_separating.iter().copied().filter(|&v| v != a);
            let b = it.next().expect("two non-separating vertices besides the anchor");
            let c = it.next().expect("two non-separating vertices besides the anchor");
            (b, c)
        };
        let mut graph = Graph::new(0);
        let mut colors: Vec<Label> = Vec::new();
        let mut copies: Vec<Vec<Vertex>> = Vec::with_capacity(3);
        for c in 0..3 {
            let shared = match c {
                1 => Some((beta, copies[0][beta])),
                2 => Some((gamma, copies[1][gamma])),
                _ => None,
            };
            let ids: Vec<Vertex> = (0..k)
                .map(|v| match shared {
                    Some((s, id)) if s == v => id,
                    _ => {
                        colors.push(h0[v]);
                        graph.add_vertices(1)
                    }
                })
                .collect();
            for (u, v) in sub.edges() {
                graph.insert(ids[u], ids[v]);
            }
            copies.push(ids);
        }
        if is_path {
            for u in (0..k).filter(|&u| u != gamma).map(|u| copies[1][u]) {
                for w in (0..k).filter(|&w| w != gamma).map(|w| copies[2][w]) {
                    graph.insert(u, w);
                }
            }
        }
        Gadget { graph, ends: (copies[0][a], copies[2][a]), colors: Some(colors) }
    }
}

/// Colorful `H`, where `H` has a component that is not a clique.
pub fn reduce_colorful(phi: &Formula, pattern: &Pattern) -> Result<DeletionInstance> {
    let shape = ColorfulShape::of(pattern)?;
    let l_a = shape.gadget(pattern, shape.z0);
    let l_b = shape.gadget(pattern, shape.z_end);
    let h = shape.columns.len();
    if h == 0 {
        return Err(Error::Construction("the non-clique component needs at least three vertices".into()));
    }
    let spec = FrameSpec {
        columns: h,
        t_size: 0,
        l_a: &l_a,
        l_b: &l_b,
        a_copies: 1,
        colors: Some(FrameColors { columns: shape.columns.clone(), a: shape.z0, b: shape.z_end }),
    };
    let (mut g, layout, mut colors) = build_frame(phi, &spec)?;
    for (x, &zx) in shape.columns.iter().enumerate() {
        for (y, &zy) in shape.columns.iter().enumerate().skip(x + 1) {
            if pattern.adjacent(zx, zy) {
                for i in 0..layout.s {
                    for i2 in 0..layout.s {
                        g.insert(layout.m[i][x], layout.m[i2][y]);
                    }
                }
            }
        }
    }
    for (side, v, c, lit) in literal_vertices(&layout) {
        let z = if side == Side::A { shape.z0 } else { shape.z_end };
        for (j, &row) in layout.function(c, lit).iter().enumerate() {
            if pattern.adjacent(z, shape.columns[j]) {
                g.insert(v, layout.m[row][j]);
            } else {
                connect_column_except(&mut g, &layout, v, j, row);
            }
        }
    }
    let n = phi.variable_count();
    let m = phi.clause_count();
    let budget = base_budget(phi) + 4 * n + (3 * m - 3 * n) + 3 * (3 * n - 2 * m);
    assert_eq!(budget, closed_form(phi, 15, 4));
    for comp in &shape.others {
        let sub = pattern.graph().induced(&comp.iter().map(|&l| l as Vertex).collect::<Vec<_>>());
        for _ in 0..=budget {
            let first = g.add_vertices(comp.len());
            colors.extend_from_slice(comp);
            for (u, v) in sub.edges() {
                g.insert(first + u, first + v);
            }
        }
    }
    let coloring = Coloring::new(colors, pattern.size())?;
    coloring.check_graph(&g)?;
    let core = shape.h0.clone();
    Ok(finish(Construction::Colorful, g, pattern.clone(), Some(coloring), budget, h, None, layout, core))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi() -> Formula {
        Formula::new(2, vec![vec![1, 2], vec![-1, -2], vec![1, -2]])
    }

    #[test]
    fn frame_counts_k4_minus_e() {
        let inst = reduce_k_minus_e(&phi(), 2).unwrap();
        let l = inst.layout.as_ref().unwrap();
        assert_eq!(l.s, 3);
        assert_eq!(l.m_vertices().len(), 6);
        assert_eq!(l.variables[0].len() * 4, 8);
        assert_eq!(l.b_set.iter().filter(|&&v| l.b.iter().flatten().any(|&(_, b)| b == v)).count(), 6);
        assert_eq!(l.copies.len(), 11);
    }

    #[test]
    fn budgets() {
        assert_eq!(reduce_k_minus_e(&phi(), 1).unwrap().budget, 7);
        assert_eq!(reduce_khh(&phi(), 2).unwrap().budget, 7);
        assert_eq!(reduce_colorful(&phi(), &Pattern::parse("P3").unwrap()).unwrap().budget, 18);
    }

    #[test]
    fn parameter_errors() {
        assert!(reduce_kh_i2(&phi(), 1).is_err());
        assert!(reduce_kvx(&phi(), 1, 0).is_err());
        assert!(reduce_kvx(&phi(), 2, 2).is_err());
        assert!(reduce_khh(&phi(), 1).is_err());
        assert!(reduce_colorful(&phi(), &Pattern::parse("K3+K1").unwrap()).is_err());
        let dirty = Formula::new(2, vec![vec![1, 2], vec![-1, 2], vec![1, -2], vec![-1, -2]]);
        assert!(matches!(reduce_k_minus_e(&dirty, 1), Err(Error::NotClean(_))));
    }

    #[test]
    fn kvx_shapes() {
        let inst = reduce_kvx(&phi(), 2, 0).unwrap();
        assert_eq!(inst.layout.as_ref().unwrap().columns, 1);
        assert_eq!(inst.layout.as_ref().unwrap().t.len(), 1);
        assert_eq!(inst.pattern.size(), 4);
        let inst = reduce_kvx(&phi(), 3, 1).unwrap();
        assert_eq!(inst.layout.as_ref().unwrap().columns, 1);
        assert_eq!(inst.layout.as_ref().unwrap().t.len(), 2);
    }

    #[test]
    fn khh_copies() {
        let inst = reduce_khh(&phi(), 3).unwrap();
        assert_eq!(inst.layout.as_ref().unwrap().variables.len(), 2);
    }

    #[test]
    fn colorful_shape_p3() {
        let p3 = Pattern::parse("P3").unwrap();
        let shape = ColorfulShape::of(&p3).unwrap();
        assert_eq!((shape.z0, shape.z_end, shape.columns.clone()), (0, 2, vec![1]));
        let c4 = Pattern::parse("C4").unwrap();
        let shape = ColorfulShape::of(&c4).unwrap();
        assert_eq!((shape.z0, shape.z_end), (0, 2));
    }

    #[test]
    fn hints_are_valid() {
        for inst in [
            reduce_k_minus_e(&phi(), 1).unwrap(),
            reduce_kh_i2(&phi(), 2).unwrap(),
            reduce_kvx(&phi(), 2, 0).unwrap(),
            reduce_khh(&phi(), 2).unwrap(),
            reduce_colorful(&phi(), &Pattern::parse("C4+K1").unwrap()).unwrap(),
        ] {
            assert!(inst.hint.validate(&inst.graph).is_valid(), "{}", inst.construction);
        }
    }
}
