//! Decomposition-free reference solver: list every induced occurrence, then
//! find a minimum hitting set by branch and bound.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::embed::{for_each_embedding, is_pattern_free, remaining_vertices};
use crate::graph::{Graph, Vertex};
use crate::pattern::{Coloring, Pattern};
use crate::{Error, Result};

/// Default instance size accepted by [`solve`].
pub const SOFT_LIMIT: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleSolution {
    pub opt: usize,
    pub witness: Vec<Vertex>,
    pub occurrence_count: usize,
}

/// Distinct vertex sets of induced (color-respecting) occurrences, each
/// sorted, the list sorted.
pub fn enumerate_occurrences(g: &Graph, pattern: &Pattern, coloring: Option<&Coloring>) -> Vec<Vec<Vertex>> {
    let scope: Vec<Vertex> = g.vertices().collect();
    let mut found = BTreeSet::new();
    let _ = for_each_embedding(g, pattern, pattern.all(), &scope, coloring, |e| {
        let mut set = e.images().to_vec();
        set.sort_unstable();
        found.insert(set);
        ControlFlow::Continue(())
    });
    found.into_iter().collect()
}

/// Size of a greedily built family of pairwise disjoint occurrences.
pub fn packing_bound(occurrences: &[Vec<Vertex>], n: usize) -> usize {
    let mut used = vec![false; n];
    let mut order: Vec<&Vec<Vertex>> = occurrences.iter().collect();
    order.sort_by_key(|o| o.len());
    let mut count = 0;
    for o in order {
        if o.iter().all(|&v| !used[v]) {
            o.iter().for_each(|&v| used[v] = true);
            count += 1;
        }
    }
    count
}

struct Search<'a> {
    occ: &'a [Vec<Vertex>],
    by_vertex: Vec<Vec<usize>>,
    chosen: Vec<bool>,
    banned: Vec<bool>,
    hits: Vec<u32>,
    picked: Vec<Vertex>,
    best: Option<Vec<Vertex>>,
    /// Solutions must be strictly smaller than this.
    bound: usize,
    mark: Vec<u32>,
    stamp: u32,
}

impl<'a> Search<'a> {
    fn new(occ: &'a [Vec<Vertex>], n: usize, bound: usize) -> Self {
        let mut by_vertex = vec![Vec::new(); n];
        for (i, o) in occ.iter().enumerate() {
            for &v in o {
                by_vertex[v].push(i);
            }
        }
        Search {
            occ,
            by_vertex,
            chosen: vec![false; n],
            banned: vec![false; n],
            hits: vec![0; occ.len()],
            picked: Vec::new(),
            best: None,
            bound,
            mark: vec![0; n],
            stamp: 0,
        }
    }

    fn take(&mut self, v: Vertex, on: bool) {
        self.chosen[v] = on;
        for &o in &self.by_vertex[v] {
            if on {
                self.hits[o] += 1;
            } else {
                self.hits[o] -= 1;
            }
        }
        if on {
            self.picked.push(v);
        } else {
            self.picked.pop();
        }
    }

    fn free(&self, o: usize) -> impl Iterator<Item = Vertex> + '_ {
        self.occ[o].iter().copied().filter(|&v| !self.banned[v])
    }

    /// Lower bound on extra vertices needed, or `None` when some open
    /// occurrence has no allowed vertex left. Also returns the branching
    /// occurrence (fewest allowed vertices, then smallest index).
    fn assess(&mut self) -> Option<(usize, Option<usize>)> {
        self.stamp += 1;
        let mut branch: Option<(usize, usize)> = None;
        let mut open: Vec<(usize, usize)> = Vec::new();
        for o in 0..self.occ.len() {
            if self.hits[o] > 0 {
                continue;
            }
            let k = self.free(o).count();
            if k == 0 {
                return None;
            }
            if branch.is_none_or(|(bk, _)| k < bk) {
                branch = Some((k, o));
            }
            open.push((k, o));
        }
        open.sort_unstable();
        let mut lb = 0;
        for &(_, o) in &open {
            let stamp = self.stamp;
            if self.free(o).all(|v| self.mark[v] != stamp) {
                let vs: Vec<Vertex> = self.free(o).collect();
                vs.into_iter().for_each(|v| self.mark[v] = stamp);
                lb += 1;
            }
        }
        Some((lb, branch.map(|(_, o)| o)))
    }

    /// Bans every allowed vertex whose open occurrences are covered by
    /// those of another allowed vertex (ties keep the smaller id).
    fn dominate(&mut self) -> Vec<Vertex> {
        let open: Vec<usize> = (0..self.occ.len()).filter(|&o| self.hits[o] == 0).collect();
        let mut rows: Vec<(Vertex, FixedBitSet)> = Vec::new();
        let mut index = vec![usize::MAX; self.chosen.len()];
        for (i, &o) in open.iter().enumerate() {
            for v in self.free(o).collect::<Vec<_>>() {
                if index[v] == usize::MAX {
                    index[v] = rows.len();
                    rows.push((v, FixedBitSet::with_capacity(open.len())));
                }
                rows[index[v]].1.insert(i);
            }
        }
        rows.sort_unstable_by_key(|(v, _)| *v);
        let mut out = Vec::new();
        for (a, (u, su)) in rows.iter().enumerate() {
            let dominated = rows.iter().enumerate().any(|(b, (_, sv))| {
                b != a && su.is_subset(sv) && (b < a || !sv.is_subset(su))
            });
            if dominated {
                out.push(*u);
            }
        }
        for &u in &out {
            self.banned[u] = true;
        }
        out
    }

    fn run(&mut self) {
        let dominated = self.dominate();
        self.branch();
        for v in dominated {
            self.banned[v] = false;
        }
    }

    fn branch(&mut self) {
        let Some((lb, branch)) = self.assess() else {
            return;
        };
        if self.picked.len() + lb >= self.bound {
            return;
        }
        let Some(o) = branch else {
            let mut w = self.picked.clone();
            w.sort_unstable();
            self.bound = w.len();
            self.best = Some(w);
            return;
        };
        let candidates: Vec<Vertex> = self.free(o).collect();
        let mut banned_here = Vec::new();
        for v in candidates {
            self.take(v, true);
            self.run();
            self.take(v, false);
            self.banned[v] = true;
            banned_here.push(v);
            if self.picked.len() + 1 >= self.bound {
                break;
            }
        }
        for v in banned_here {
            self.banned[v] = false;
        }
    }
}

/// Exact minimum hitting set over vertices `0..n`.
pub fn min_hitting_set(occurrences: &[Vec<Vertex>], n: usize) -> (usize, Vec<Vertex>) {
    let mut s = Search::new(occurrences, n, n + 1);
    s.run();
    let w = s.best.expect("taking every vertex always hits");
    let size = w.len();
    assert!(size >= packing_bound(occurrences, n), "hitting set below the packing bound");
    (size, w)
}

/// A hitting set of size at most `k`, if one exists.
pub fn hitting_set_at_most(occurrences: &[Vec<Vertex>], n: usize, k: usize) -> Option<Vec<Vertex>> {
    let mut s = Search::new(occurrences, n, k + 1);
    s.run();
    s.best
}

/// Every hitting set of minimum size, each sorted, in lexicographic order.
pub fn all_minimum_hitting_sets(occurrences: &[Vec<Vertex>], n: usize) -> Vec<Vec<Vertex>> {
    let (opt, _) = min_hitting_set(occurrences, n);
    let relevant: Vec<Vertex> = occurrences.iter().flatten().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let mut out = Vec::new();
    let mut pick = Vec::with_capacity(opt);
    combos(&relevant, opt, 0, &mut pick, &mut |set| {
        if occurrences.iter().all(|o| o.iter().any(|v| set.binary_search(v).is_ok())) {
            out.push(set.to_vec());
        }
    });
    out
}

fn combos(pool: &[Vertex], k: usize, from: usize, pick: &mut Vec<Vertex>, visit: &mut impl FnMut(&[Vertex])) {
    if pick.len() == k {
        visit(pick);
        return;
    }
    for i in from..pool.len() {
        if pool.len() - i < k - pick.len() {
            break;
        }
        pick.push(pool[i]);
        combos(pool, k, i + 1, pick, visit);
        pick.pop();
    }
}

/// Exact optimum for instances up to [`SOFT_LIMIT`] vertices.
pub fn solve(g: &Graph, pattern: &Pattern, coloring: Option<&Coloring>) -> Result<OracleSolution> {
    solve_with_limit(g, pattern, coloring, Some(SOFT_LIMIT))
}

/// Exact optimum; `limit = None` disables the size guard.
pub fn solve_with_limit(
    g: &Graph,
    pattern: &Pattern,
    coloring: Option<&Coloring>,
    limit: Option<usize>,
) -> Result<OracleSolution> {
    let n = g.vertex_count();
    if let Some(limit) = limit.filter(|&l| n > l) {
        return Err(Error::OracleLimit { n, limit });
    }
    if let Some(c) = coloring {
        c.check_graph(g)?;
    }
    let occ = enumerate_occurrences(g, pattern, coloring);
    let (opt, witness) = min_hitting_set(&occ, n);
    assert!(
        is_pattern_free(g, pattern, &remaining_vertices(g, &witness), coloring),
        "oracle witness leaves an occurrence"
    );
    Ok(OracleSolution { opt, witness, occurrence_count: occ.len() })
}
