use serde::Serialize;

use super::formula::Formula;
use crate::graph::{Graph, Vertex};
use crate::pattern::Label;
use crate::{Error, Result};

/// A graph `L` glued between two existing vertices at its `ends`.
#[derive(Clone, Debug)]
pub struct Gadget {
    pub graph: Graph,
    pub ends: (Vertex, Vertex),
    /// Colors of the gadget's vertices, for colorful constructions.
    pub colors: Option<Vec<Label>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    A,
    B,
}

/// One attached copy of `L`.
#[derive(Clone, Debug, Serialize)]
pub struct LCopy {
    pub side: Side,
    /// Index of the A-copy (always 0 on the B side).
    pub a_copy: usize,
    pub ends: (Vertex, Vertex),
    /// New vertices in increasing gadget-vertex order.
    pub internal: Vec<Vertex>,
}

/// The four vertices of a variable gadget. `c1` and `c3` carry the literal
/// occurring twice, `c2` the opposite literal, `dummy` has no clause.
#[derive(Clone, Debug, Serialize)]
pub struct VariableGadget {
    pub variable: usize,
    /// The literal occurring twice.
    pub literal: i32,
    pub clauses: [usize; 3],
    pub c1: Vertex,
    pub c2: Vertex,
    pub c3: Vertex,
    pub dummy: Vertex,
}

impl VariableGadget {
    /// The two pairs one of which every small solution contains:
    /// `(c1, c3)` (literal true) and `(dummy, c2)` (literal false).
    pub fn pairs(&self) -> [(Vertex, Vertex); 2] {
        [(self.c1, self.c3), (self.dummy, self.c2)]
    }

    /// Gadget vertex of the occurrence in `clause`.
    pub fn vertex_for(&self, clause: usize) -> Option<Vertex> {
        [self.c1, self.c2, self.c3]
            .into_iter()
            .zip(self.clauses)
            .find(|&(_, c)| c == clause)
            .map(|(v, _)| v)
    }
}

/// Vertex bookkeeping of a frame graph.
#[derive(Clone, Debug, Serialize)]
pub struct FrameLayout {
    pub s: usize,
    pub columns: usize,
    /// `m[i][j]`: row `i`, column `j`.
    pub m: Vec<Vec<Vertex>>,
    pub t: Vec<Vertex>,
    /// Variable gadgets per A-copy.
    pub variables: Vec<Vec<VariableGadget>>,
    /// `b[c]`: `(literal, vertex)` for each literal of clause `c`.
    pub b: Vec<Vec<(i32, Vertex)>>,
    pub copies: Vec<LCopy>,
    /// `(clause, literal)` with the 0-based row picked in every column.
    pub functions: Vec<((usize, i32), Vec<usize>)>,
    /// All vertices of each A-copy, attached gadgets included.
    pub a_sets: Vec<Vec<Vertex>>,
    /// All B vertices, attached gadgets included.
    pub b_set: Vec<Vertex>,
}

impl FrameLayout {
    pub fn function(&self, clause: usize, literal: i32) -> &[usize] {
        &self
            .functions
            .iter()
            .find(|((c, l), _)| *c == clause && *l == literal)
            .expect("every occurrence has a function")
            .1
    }

    /// `a_{x,C,ℓ}` in A-copy `copy`.
    pub fn a_vertex(&self, copy: usize, clause: usize, literal: i32) -> Vertex {
        let var = literal.unsigned_abs() as usize - 1;
        self.variables[copy][var].vertex_for(clause).expect("variable occurs in clause")
    }

    pub fn b_vertex(&self, clause: usize, literal: i32) -> Vertex {
        self.b[clause].iter().find(|&&(l, _)| l == literal).expect("literal in clause").1
    }

    /// `M' = M ∪ T`.
    pub fn central(&self) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self.m.iter().flatten().copied().chain(self.t.iter().copied()).collect();
        out.sort_unstable();
        out
    }

    pub fn m_vertices(&self) -> Vec<Vertex> {
        self.m.iter().flatten().copied().collect()
    }

    /// The clause-side vertices `a_{x,C,ℓ}` of every A-copy (no dummies, no gadget internals).
    pub fn a_literal_vertices(&self) -> Vec<Vertex> {
        self.variables
            .iter()
            .flatten()
            .flat_map(|g| [g.c1, g.c2, g.c3])
            .collect()
    }
}

/// Smallest positive `s` with `s^h ≥ 3n`.
pub fn rows_for(n: usize, h: usize) -> usize {
    let need = 3 * n;
    (1..)
        .find(|&s: &usize| s.checked_pow(h as u32).is_none_or(|p| p >= need))
        .expect("some s works")
}

/// The `i`-th pair gets the `i`-th tuple of `[s]^h` in lexicographic order
/// (0-based rows).
pub fn assign_functions(pairs: &[(usize, i32)], s: usize, h: usize) -> Result<Vec<((usize, i32), Vec<usize>)>> {
    let capacity = s.checked_pow(h as u32).unwrap_or(usize::MAX);
    if pairs.len() > capacity {
        return Err(Error::Construction(format!(
            "{} clause-literal pairs exceed the {capacity} functions [h] -> [s]",
            pairs.len()
        )));
    }
    Ok(pairs
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let mut digits = vec![0; h];
            let mut rest = i;
            for d in digits.iter_mut().rev() {
                *d = rest % s;
                rest /= s;
            }
            (p, digits)
        })
        .collect())
}

/// Copies `gadget` into `g`, identifying its ends with `u` and `v`.
pub(crate) fn attach(
    g: &mut Graph,
    colors: &mut Vec<Label>,
    gadget: &Gadget,
    u: Vertex,
    v: Vertex,
) -> Vec<Vertex> {
    let k = gadget.graph.vertex_count();
    let first = g.add_vertices(k - 2);
    let mut map = vec![0; k];
    let mut next = first;
    let mut internal = Vec::with_capacity(k - 2);
    for (x, slot) in map.iter_mut().enumerate() {
        *slot = if x == gadget.ends.0 {
            u
        } else if x == gadget.ends.1 {
            v
        } else {
            internal.push(next);
            next += 1;
            next - 1
        };
    }
    if let Some(c) = &gadget.colors {
        for x in 0..k {
            if x != gadget.ends.0 && x != gadget.ends.1 {
                colors.push(c[x]);
            }
        }
    }
    for (a, b) in gadget.graph.edges() {
        g.insert(map[a], map[b]);
    }
    internal
}

pub(crate) struct FrameSpec<'a> {
    pub columns: usize,
    pub t_size: usize,
    pub l_a: &'a Gadget,
    pub l_b: &'a Gadget,
    pub a_copies: usize,
    /// Colors of M columns, A literal vertices and B vertices (colorful case).
    pub colors: Option<FrameColors>,
}

pub(crate) struct FrameColors {
    pub columns: Vec<Label>,
    pub a: Label,
    pub b: Label,
}

/// Builds the frame graph: `M`, `T`, variable and clause gadgets with their
/// attached copies of `L`. No edges touch `M'` yet.
pub(crate) fn build_frame(phi: &Formula, spec: &FrameSpec<'_>) -> Result<(Graph, FrameLayout, Vec<Label>)> {
    let report = phi.validate_clean();
    if !report.is_empty() {
        return Err(Error::NotClean(format!("{report:?}")));
    }
    let n = phi.variable_count();
    let h = spec.columns;
    let s = rows_for(n, h);
    let mut g = Graph::new(0);
    let mut colors: Vec<Label> = Vec::new();

    let first = g.add_vertices(s * h);
    let m: Vec<Vec<Vertex>> = (0..s).map(|i| (0..h).map(|j| first + i * h + j).collect()).collect();
    if let Some(fc) = &spec.colors {
        for _ in 0..s {
            colors.extend_from_slice(&fc.columns);
        }
    }
    let t0 = g.add_vertices(spec.t_size);
    let t: Vec<Vertex> = (t0..t0 + spec.t_size).collect();

    // occurrences of each variable in clause order
    let mut occ: Vec<Vec<(usize, i32)>> = vec![Vec::new(); n];
    for (c, lit) in phi.occurrences() {
        occ[lit.unsigned_abs() as usize - 1].push((c, lit));
    }

    let mut copies = Vec::new();
    let mut variables = Vec::with_capacity(spec.a_copies);
    let mut a_sets = Vec::with_capacity(spec.a_copies);
    for copy in 0..spec.a_copies {
        let start = g.vertex_count();
        let mut gadgets = Vec::with_capacity(n);
        for (x, list) in occ.iter().enumerate() {
            let pos = list.iter().filter(|&&(_, l)| l > 0).count();
            let literal = if pos >= 2 { (x + 1) as i32 } else { -((x + 1) as i32) };
            let same: Vec<usize> = list.iter().filter(|&&(_, l)| l == literal).map(|&(c, _)| c).collect();
            let odd = list.iter().find(|&&(_, l)| l == -literal).expect("both polarities").0;
            let base = g.add_vertices(4);
            if let Some(fc) = &spec.colors {
                colors.extend([fc.a; 4]);
            }
            let gadget = VariableGadget {
                variable: x + 1,
                literal,
                clauses: [same[0], odd, same[1]],
                c1: base,
                c2: base + 1,
                c3: base + 2,
                dummy: base + 3,
            };
            for (u, v) in [
                (gadget.c1, gadget.c2),
                (gadget.c2, gadget.c3),
                (gadget.c3, gadget.dummy),
                (gadget.dummy, gadget.c1),
            ] {
                let internal = attach(&mut g, &mut colors, spec.l_a, u, v);
                copies.push(LCopy { side: Side::A, a_copy: copy, ends: (u, v), internal });
            }
            gadgets.push(gadget);
        }
        variables.push(gadgets);
        a_sets.push((start..g.vertex_count()).collect());
    }

    let b_start = g.vertex_count();
    let mut b = Vec::with_capacity(phi.clause_count());
    for clause in phi.clauses().iter() {
        let base = g.add_vertices(clause.len());
        if let Some(fc) = &spec.colors {
            colors.extend(std::iter::repeat_n(fc.b, clause.len()));
        }
        let verts: Vec<(i32, Vertex)> = clause.iter().enumerate().map(|(i, &l)| (l, base + i)).collect();
        for i in 0..verts.len() {
            for j in i + 1..verts.len() {
                let (u, v) = (verts[i].1, verts[j].1);
                let internal = attach(&mut g, &mut colors, spec.l_b, u, v);
                copies.push(LCopy { side: Side::B, a_copy: 0, ends: (u, v), internal });
            }
        }
        b.push(verts);
    }
    let b_set = (b_start..g.vertex_count()).collect();

    let functions = assign_functions(&phi.occurrences(), s, h)?;
    let layout = FrameLayout { s, columns: h, m, t, variables, b, copies, functions, a_sets, b_set };
    Ok((g, layout, colors))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_functions() {
        let f = assign_functions(&[(0, 1)], 2, 2).unwrap();
        assert_eq!(f[0].1, vec![0, 0]);
        let f = assign_functions(&[(0, 1), (0, 2), (1, 1)], 2, 2).unwrap();
        let rows: Vec<Vec<usize>> = f.into_iter().map(|(_, r)| r).collect();
        assert_eq!(rows, vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
        assert!(assign_functions(&[(0, 1); 5], 2, 2).is_err());
    }

    #[test]
    fn row_counts() {
        assert_eq!(rows_for(4, 2), 4);
        assert_eq!(rows_for(2, 2), 3);
        assert_eq!(rows_for(2, 1), 6);
        assert_eq!(rows_for(1, 3), 2);
    }
}
