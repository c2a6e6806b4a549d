use std::collections::BTreeSet;
use std::ops::ControlFlow;

use serde::Serialize;

use super::constructions::{Construction, DeletionInstance};
use super::formula::Formula;
use super::frame::{FrameLayout, Side};
use super::vc::min_vertex_cover;
use crate::embed::{for_each_embedding, is_pattern_free, remaining_vertices};
use crate::graph::{Graph, Vertex};
use crate::oracle::{enumerate_occurrences, hitting_set_at_most, min_hitting_set};
use crate::pattern::{Coloring, Label, Pattern};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Refuse instances with more vertices than this.
    pub max_vertices: usize,
    /// Check every assignment when the formula has at most this many variables.
    pub exhaustive_assignments: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { max_vertices: 400, exhaustive_assignments: 6 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentCheck {
    pub max_component: usize,
    pub bound: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShapeCheck {
    pub ok: bool,
    pub violations: Vec<String>,
    /// The assignment read off the variable pairs satisfies the formula.
    pub decodes: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OccurrenceCheck {
    pub assignments: usize,
    pub ok: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverRelation {
    pub cover: usize,
    pub edges: usize,
    pub opt: usize,
    /// `opt == 2 * cover`.
    pub stated_holds: bool,
    /// `opt == cover + edges`.
    pub corrected_holds: bool,
    pub vertex_count_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionReport {
    pub construction: Construction,
    pub vertices: usize,
    pub edges: usize,
    pub budget: usize,
    pub occurrences: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub components: Option<ComponentCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub satisfiable: Option<bool>,
    pub within_budget: bool,
    pub equivalence: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution_shape: Option<ShapeCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surviving_occurrences: Option<OccurrenceCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover: Option<CoverRelation>,
    pub passed: bool,
}

fn guard(inst: &DeletionInstance, opts: &VerifyOptions) -> Result<()> {
    let n = inst.graph.vertex_count();
    if n > opts.max_vertices {
        return Err(Error::OracleLimit { n, limit: opts.max_vertices });
    }
    Ok(())
}

/// Checks an edge-replacement instance against the vertex cover of `g`.
pub fn verify_vc(inst: &DeletionInstance, g: &Graph, opts: &VerifyOptions) -> Result<ReductionReport> {
    guard(inst, opts)?;
    let layout = inst.vc.as_ref().ok_or_else(|| Error::Construction("not a vertex cover instance".into()))?;
    let occ = enumerate_occurrences(&inst.graph, &inst.pattern, inst.coloring.as_ref());
    let n = inst.graph.vertex_count();
    let (opt, _) = min_hitting_set(&occ, n);
    let (cover, _) = min_vertex_cover(g);
    let edges = g.edge_count();
    let rel = CoverRelation {
        cover,
        edges,
        opt,
        stated_holds: opt == layout.stated_budget_for(cover),
        corrected_holds: opt == layout.budget_for(cover),
        vertex_count_ok: n == g.vertex_count() + 5 * edges,
    };
    let within = opt <= inst.budget;
    let passed = rel.corrected_holds && rel.vertex_count_ok && within;
    Ok(ReductionReport {
        construction: inst.construction,
        vertices: n,
        edges: inst.graph.edge_count(),
        budget: inst.budget,
        occurrences: occ.len(),
        components: None,
        satisfiable: None,
        within_budget: within,
        equivalence: rel.corrected_holds,
        solution_shape: None,
        surviving_occurrences: None,
        cover: Some(rel),
        passed,
    })
}

/// Checks a formula-based instance: component sizes off the centre,
/// satisfiability against the budget, the shape of a small solution and
/// the occurrences surviving assignment-induced deletions.
pub fn verify_reduction(inst: &DeletionInstance, phi: &Formula, opts: &VerifyOptions) -> Result<ReductionReport> {
    guard(inst, opts)?;
    let layout = inst.layout.as_ref().ok_or_else(|| Error::Construction("not a formula instance".into()))?;
    let g = &inst.graph;
    let n = g.vertex_count();

    let components = component_check(g, layout);
    let sat = phi.brute_force_sat();
    let occ = enumerate_occurrences(g, &inst.pattern, inst.coloring.as_ref());
    let witness = hitting_set_at_most(&occ, n, inst.budget);
    let within = witness.is_some();
    let equivalence = sat.is_some() == within;
    let shape = witness.as_ref().map(|w| shape_check(layout, phi, w));
    let survive = occurrence_check(inst, layout, phi, opts);

    let passed = components.ok
        && equivalence
        && shape.as_ref().is_none_or(|s| s.ok && s.decodes)
        && survive.ok;
    Ok(ReductionReport {
        construction: inst.construction,
        vertices: n,
        edges: g.edge_count(),
        budget: inst.budget,
        occurrences: occ.len(),
        components: Some(components),
        satisfiable: Some(sat.is_some()),
        within_budget: within,
        equivalence,
        solution_shape: shape,
        surviving_occurrences: Some(survive),
        cover: None,
        passed,
    })
}

fn component_check(g: &Graph, layout: &FrameLayout) -> ComponentCheck {
    let central = layout.central();
    let rest = remaining_vertices(g, &central);
    let max_component = g.components(Some(&rest)).iter().map(Vec::len).max().unwrap_or(0);
    let l_size = layout.copies.iter().map(|c| c.internal.len() + 2).max().unwrap_or(0);
    let bound = 4 * l_size;
    ComponentCheck { max_component, bound, ok: max_component <= bound }
}

fn shape_check(layout: &FrameLayout, phi: &Formula, w: &[Vertex]) -> ShapeCheck {
    let x: BTreeSet<Vertex> = w.iter().copied().collect();
    let mut violations = Vec::new();
    let mut assignment = 0u64;
    for (copy, gadgets) in layout.variables.iter().enumerate() {
        for g in gadgets {
            let [t, f] = g.pairs();
            let has_t = x.contains(&t.0) && x.contains(&t.1);
            let has_f = x.contains(&f.0) && x.contains(&f.1);
            if !has_t && !has_f {
                violations.push(format!("copy {copy}: variable {} keeps both pairs", g.variable));
            }
            // deleting the (c1, c3) pair means the doubled literal is true
            if copy == 0 && has_t == (g.literal > 0) {
                assignment |= 1 << (g.variable - 1);
            }
        }
    }
    for (c, lits) in layout.b.iter().enumerate() {
        let deleted = lits.iter().filter(|(_, v)| x.contains(v)).count();
        if deleted + 1 < lits.len() {
            violations.push(format!("clause {c}: only {deleted} of {} vertices deleted", lits.len()));
        }
    }
    ShapeCheck { ok: violations.is_empty(), violations, decodes: phi.satisfied_by(assignment) }
}

/// Deletions induced by `assignment`: true literal vertices in every A-copy
/// (dummy with the odd literal when it is true), all but the `keep` vertex of
/// every clause.
fn assignment_set(layout: &FrameLayout, assignment: u64, keep: &[i32]) -> Vec<Vertex> {
    let value = |lit: i32| (assignment >> (lit.unsigned_abs() - 1) & 1 == 1) == (lit > 0);
    let mut x = Vec::new();
    for gadgets in &layout.variables {
        for g in gadgets {
            let [t, f] = g.pairs();
            let (a, b) = if value(g.literal) { t } else { f };
            x.extend([a, b]);
        }
    }
    for (c, lits) in layout.b.iter().enumerate() {
        x.extend(lits.iter().filter(|&&(l, _)| l != keep[c]).map(|&(_, v)| v));
    }
    x.sort_unstable();
    x
}

/// The part of the instance carrying the core component, with labels
/// renumbered, or the whole instance when uncolored.
struct Core {
    graph: Graph,
    pattern: Pattern,
    coloring: Option<Coloring>,
    /// Core vertex to instance vertex.
    map: Vec<Vertex>,
}

fn core_of(inst: &DeletionInstance) -> Core {
    match &inst.coloring {
        None => Core {
            graph: inst.graph.clone(),
            pattern: inst.pattern.clone(),
            coloring: None,
            map: inst.graph.vertices().collect(),
        },
        Some(col) => {
            let map: Vec<Vertex> = inst.graph.vertices().filter(|&v| inst.core.contains(&col.label(v))).collect();
            let graph = inst.graph.induced(&map);
            let verts: Vec<Vertex> = inst.core.iter().map(|&l| l as Vertex).collect();
            let pattern = Pattern::new(inst.pattern.graph().induced(&verts)).expect("core is non-empty");
            let labels = map
                .iter()
                .map(|&v| inst.core.iter().position(|&l| l == col.label(v)).expect("core label") as Label)
                .collect();
            let coloring = Coloring::new(labels, inst.core.len()).expect("labels within the core");
            Core { graph, pattern, coloring: Some(coloring), map }
        }
    }
}

fn occurrence_check(inst: &DeletionInstance, layout: &FrameLayout, phi: &Formula, opts: &VerifyOptions) -> OccurrenceCheck {
    let nvars = phi.variable_count();
    let assignments: Vec<u64> = if nvars <= opts.exhaustive_assignments {
        (0..1u64 << nvars).collect()
    } else {
        let mut a = vec![0, (1u64 << nvars) - 1];
        a.extend(phi.brute_force_sat());
        a
    };
    let core = core_of(inst);
    let mut inverse = vec![usize::MAX; inst.graph.vertex_count()];
    for (i, &v) in core.map.iter().enumerate() {
        inverse[v] = i;
    }
    let mut tag: Vec<Option<(Side, usize, usize, i32)>> = vec![None; inst.graph.vertex_count()];
    for ((c, lit), _) in &layout.functions {
        for copy in 0..layout.variables.len() {
            tag[layout.a_vertex(copy, *c, *lit)] = Some((Side::A, copy, *c, *lit));
        }
        tag[layout.b_vertex(*c, *lit)] = Some((Side::B, 0, *c, *lit));
    }
    let copies = layout.variables.len();
    let mut failures = Vec::new();
    for &alpha in &assignments {
        let keep: Vec<i32> = phi
            .clauses()
            .iter()
            .map(|c| {
                *c.iter()
                    .find(|&&l| (alpha >> (l.unsigned_abs() - 1) & 1 == 1) == (l > 0))
                    .unwrap_or(&c[0])
            })
            .collect();
        let mut x = assignment_set(layout, alpha, &keep);
        if inst.coloring.is_some() {
            match gadget_extras(&core, &inverse, layout, &x) {
                Ok(extra) => x.extend(extra),
                Err(msg) => {
                    failures.push(format!("assignment {alpha:b}: {msg}"));
                    continue;
                }
            }
            x.sort_unstable();
        }
        let scope: Vec<Vertex> = remaining_vertices(&inst.graph, &x)
            .into_iter()
            .filter(|&v| inverse[v] != usize::MAX)
            .map(|v| inverse[v])
            .collect();
        let mut expected: BTreeSet<(usize, i32)> = BTreeSet::new();
        for (c, lits) in layout.b.iter().enumerate() {
            let lit = keep[c];
            if !lits.iter().any(|&(l, _)| l == lit) {
                continue;
            }
            let a_alive = (0..copies).all(|copy| x.binary_search(&layout.a_vertex(copy, c, lit)).is_err());
            if a_alive {
                expected.insert((c, lit));
            }
        }
        let mut seen: BTreeSet<(usize, i32)> = BTreeSet::new();
        let mut bad: Option<String> = None;
        let _ = for_each_embedding(&core.graph, &core.pattern, core.pattern.all(), &scope, core.coloring.as_ref(), |e| {
            let mut a_tags = Vec::new();
            let mut b_tags = Vec::new();
            for &v in e.images() {
                match tag[core.map[v]] {
                    Some((Side::A, copy, c, l)) => a_tags.push((copy, c, l)),
                    Some((Side::B, _, c, l)) => b_tags.push((c, l)),
                    None => {}
                }
            }
            a_tags.sort_unstable();
            let matched = b_tags.len() == 1
                && a_tags.len() == copies
                && a_tags.iter().enumerate().all(|(i, &(copy, c, l))| copy == i && (c, l) == b_tags[0]);
            if matched {
                seen.insert(b_tags[0]);
                ControlFlow::Continue(())
            } else {
                let verts: Vec<Vertex> = e.images().iter().map(|&v| core.map[v]).collect();
                bad = Some(format!("assignment {alpha:b}: unmatched occurrence on {verts:?}"));
                ControlFlow::Break(())
            }
        });
        if let Some(msg) = bad {
            failures.push(msg);
            continue;
        }
        if seen != expected {
            failures.push(format!("assignment {alpha:b}: occurrences for {seen:?}, expected {expected:?}"));
            continue;
        }
        if phi.satisfied_by(alpha) {
            let free = is_pattern_free(&inst.graph, &inst.pattern, &remaining_vertices(&inst.graph, &x), inst.coloring.as_ref());
            if !free || x.len() != inst.budget {
                failures.push(format!(
                    "assignment {alpha:b}: deletion set of size {} (budget {}) leaves the graph {}",
                    x.len(),
                    inst.budget,
                    if free { "free" } else { "with occurrences" }
                ));
            }
        }
    }
    OccurrenceCheck { assignments: assignments.len(), ok: failures.is_empty(), failures }
}

/// One internal vertex per attached gadget, chosen so that the gadget's own
/// core occurrences are hit given the deleted attachment vertices.
fn gadget_extras(core: &Core, inverse: &[usize], layout: &FrameLayout, x: &[Vertex]) -> std::result::Result<Vec<Vertex>, String> {
    let mut out = Vec::new();
    for copy in &layout.copies {
        let mut verts = vec![copy.ends.0, copy.ends.1];
        verts.extend(&copy.internal);
        let alive: Vec<Vertex> = verts.into_iter().filter(|v| x.binary_search(v).is_err()).collect();
        let pick = copy.internal.iter().copied().find(|&w| {
            let mut scope: Vec<Vertex> = alive.iter().filter(|&&v| v != w).map(|&v| inverse[v]).collect();
            scope.sort_unstable();
            is_pattern_free(&core.graph, &core.pattern, &scope, core.coloring.as_ref())
        });
        match pick {
            Some(w) => out.push(w),
            None => return Err(format!("no single internal vertex clears the gadget at {:?}", copy.ends)),
        }
    }
    Ok(out)
}
