//! Dynamic programming over a nice tree decomposition whose states are
//! rooted folios.
//!
//! A state at node `w` is a pair `(Ŝ, F)` where `Ŝ` is the part of the partial
//! solution inside the bag and `F = (L, R)` is a rooted folio:
//!
//! * `L` lists every nonempty proper label subset `D` that embeds into
//!   `X_w \ Ŝ`;
//! * `R` lists rooted triples `(D, R, ρ)`: some embedding of `D` into
//!   `G_w \ S_w` sends `R` onto bag vertices via `ρ` and `D \ R` (nonempty)
//!   onto already forgotten vertices.
//!
//! Each state stores the minimum size of a partial solution realizing it.

use std::collections::HashMap;
use std::ops::ControlFlow;

use arrayvec::ArrayVec;
use indexmap::map::Entry as MapEntry;
use indexmap::IndexMap;
use rayon::prelude::*;
use serde::Serialize;

use crate::decomp::{NiceTreeDecomposition, NodeKind};
use crate::embed::for_each_embedding;
use crate::graph::{Graph, Vertex};
use crate::pattern::{Coloring, Label, LabelSet, Pattern, MAX_PATTERN_SIZE};
use crate::{Error, Result};

/// Root images of a triple, in increasing label order of `R`.
pub type Roots = ArrayVec<u32, { MAX_PATTERN_SIZE - 2 }>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootedTriple {
    pub d: LabelSet,
    pub r: LabelSet,
    pub rho: Roots,
}

impl RootedTriple {
    /// Image of root label `l`.
    pub fn root(&self, l: Label) -> Option<Vertex> {
        self.r.contains(l).then(|| self.rho[self.r.rank(l)] as Vertex)
    }

    pub fn unrooted(&self) -> LabelSet {
        self.d.minus(self.r)
    }

    fn root_pairs(&self) -> impl Iterator<Item = (Label, Vertex)> + '_ {
        self.r.iter().zip(self.rho.iter().map(|&v| v as Vertex))
    }
}

/// Set of label subsets, one bit per subset mask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalSet([u64; 4]);

impl LocalSet {
    pub fn contains(&self, d: LabelSet) -> bool {
        let m = d.0 as usize;
        self.0[m >> 6] >> (m & 63) & 1 == 1
    }

    pub fn insert(&mut self, d: LabelSet) {
        let m = d.0 as usize;
        self.0[m >> 6] |= 1 << (m & 63);
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = LabelSet> + '_ {
        (0..256u16).map(LabelSet).filter(|&d| self.contains(d))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootedFolio {
    pub local: LocalSet,
    /// Sorted and duplicate-free.
    pub triples: Vec<RootedTriple>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    /// Sorted solution vertices inside the bag.
    pub s_hat: Vec<Vertex>,
    pub folio: RootedFolio,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cell {
    pub opt: u32,
    back: [u32; 2],
}

/// The table of one node: reachable states with their optimum, in discovery order.
#[derive(Clone, Debug, Default)]
pub struct Table {
    entries: IndexMap<State, Cell>,
}

impl Table {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, state: &State) -> Option<usize> {
        self.entries.get(state).map(|c| c.opt as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&State, usize)> {
        self.entries.iter().map(|(s, c)| (s, c.opt as usize))
    }

    fn offer(&mut self, state: State, opt: u32, back: [u32; 2]) {
        match self.entries.entry(state) {
            MapEntry::Occupied(mut e) => {
                if opt < e.get().opt {
                    *e.get_mut() = Cell { opt, back };
                }
            }
            MapEntry::Vacant(e) => {
                e.insert(Cell { opt, back });
            }
        }
    }

    fn state(&self, idx: u32) -> (&State, &Cell) {
        self.entries.get_index(idx as usize).expect("backpointer in range")
    }
}

#[derive(Clone, Copy, Debug)]
pub struct FolioOptions {
    pub witness: bool,
    pub keep_tables: bool,
    pub threads: usize,
}

impl Default for FolioOptions {
    fn default() -> Self {
        FolioOptions { witness: true, keep_tables: false, threads: 1 }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct FolioStats {
    pub node_count: usize,
    pub peak_state_count: usize,
    pub total_state_count: usize,
    pub peak_triple_count: usize,
}

#[derive(Debug)]
pub struct FolioOutcome {
    pub opt: usize,
    pub witness: Option<Vec<Vertex>>,
    pub stats: FolioStats,
    /// Per-node tables indexed like the decomposition's nodes (when kept).
    pub tables: Option<Vec<Table>>,
}

/// Minimum over a root table. All root states have an empty bag part, no
/// local occurrences and no roots.
pub fn root_extract(table: &Table) -> Option<usize> {
    for (state, _) in table.iter() {
        assert!(state.s_hat.is_empty(), "root state with a nonempty bag part");
        assert!(state.folio.local.is_empty(), "root state with local occurrences");
        assert!(state.folio.triples.iter().all(|t| t.r.is_empty()), "rooted triple at the root");
    }
    table.iter().map(|(_, opt)| opt).min()
}

/// Per-bag facts depending only on `X_w \ Ŝ`.
#[derive(Clone, Copy)]
struct LocalInfo {
    local: LocalSet,
    free: bool,
}

struct Ctx<'a> {
    g: &'a Graph,
    pattern: &'a Pattern,
    coloring: Option<&'a Coloring>,
    h: usize,
    all: LabelSet,
}

impl Ctx<'_> {
    fn embeds(&self, d: LabelSet, scope: &[Vertex]) -> bool {
        for_each_embedding(self.g, self.pattern, d, scope, self.coloring, |_| ControlFlow::Break(()))
            .is_break()
    }

    fn local_info(&self, scope: &[Vertex]) -> LocalInfo {
        let mut local = LocalSet::default();
        let mut free = true;
        for mask in 1..=self.all.0 {
            let d = LabelSet(mask);
            // an embedding restricts to every subset, so prune on missing subsets
            let blocked = d.iter().any(|l| {
                let sub = d.without(l);
                !sub.is_empty() && !local.contains(sub)
            });
            if blocked || !self.embeds(d, scope) {
                continue;
            }
            if d == self.all {
                free = false;
            } else {
                local.insert(d);
            }
        }
        LocalInfo { local, free }
    }

    /// Triples born when `v` leaves the bag: every embedding of a proper `D`
    /// into the old `X \ Ŝ` that uses `v` becomes rooted at the other vertices.
    fn forget_triples(&self, scope: &[Vertex], v: Vertex, local: &LocalSet) -> Vec<RootedTriple> {
        let mut out = Vec::new();
        for d in local.iter() {
            let _ = for_each_embedding(self.g, self.pattern, d, scope, self.coloring, |e| {
                if let Some(lv) = e.preimage(v) {
                    let rho = e.pairs().filter(|&(l, _)| l != lv).map(|(_, u)| u as u32).collect();
                    out.push(RootedTriple { d, r: d.without(lv), rho });
                }
                ControlFlow::Continue(())
            });
        }
        out
    }

    /// Does label `d` fit at the new vertex `v` next to the triple?
    fn extends(&self, t: &RootedTriple, d: Label, v: Vertex) -> bool {
        if self.coloring.is_some_and(|c| c.label(v) != d) {
            return false;
        }
        let nb = self.pattern.neighbors(d);
        // forgotten vertices are never adjacent to a newly introduced one
        if !nb.intersection(t.unrooted()).is_empty() {
            return false;
        }
        t.root_pairs().all(|(r, u)| nb.contains(r) == self.g.has_edge(v, u))
    }
}

fn sorted_dedup(mut v: Vec<RootedTriple>) -> Vec<RootedTriple> {
    v.sort_unstable();
    v.dedup();
    v
}

fn minus_vertex(bag: &[Vertex], s_hat: &[Vertex]) -> Vec<Vertex> {
    bag.iter().copied().filter(|v| s_hat.binary_search(v).is_err()).collect()
}

fn insert_sorted(s: &[Vertex], v: Vertex) -> Vec<Vertex> {
    let mut out = s.to_vec();
    let at = out.binary_search(&v).unwrap_err();
    out.insert(at, v);
    out
}

fn par_map<T, F>(n: usize, parallel: bool, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    if parallel {
        (0..n).into_par_iter().map(f).collect()
    } else {
        (0..n).map(f).collect()
    }
}

type Emitted = Vec<(State, u32, [u32; 2])>;

struct Solver<'a> {
    ctx: Ctx<'a>,
    ntd: &'a NiceTreeDecomposition,
    parallel: bool,
}

impl Solver<'_> {
    /// `L` and `H`-freeness for every distinct `Ŝ` among `keys` on `bag`.
    fn infos<'k>(&self, bag: &[Vertex], keys: impl Iterator<Item = &'k Vec<Vertex>>) -> HashMap<Vec<Vertex>, LocalInfo> {
        let mut distinct: Vec<Vec<Vertex>> = keys.cloned().collect();
        distinct.sort_unstable();
        distinct.dedup();
        let infos = par_map(distinct.len(), self.parallel, |i| {
            self.ctx.local_info(&minus_vertex(bag, &distinct[i]))
        });
        distinct.into_iter().zip(infos).collect()
    }

    fn leaf(&self) -> Table {
        let mut t = Table::default();
        t.offer(State { s_hat: Vec::new(), folio: RootedFolio::default() }, 0, [0, 0]);
        t
    }

    fn introduce(&self, child: &Table, bag: &[Vertex], v: Vertex) -> Table {
        let infos = self.infos(bag, child.entries.keys().map(|s| &s.s_hat));
        let h = self.ctx.h;
        let emitted: Vec<Emitted> = par_map(child.len(), self.parallel, |i| {
            let (state, cell) = child.state(i as u32);
            let mut out = Vec::with_capacity(2);
            out.push((
                State { s_hat: insert_sorted(&state.s_hat, v), folio: state.folio.clone() },
                cell.opt + 1,
                [i as u32, 0],
            ));
            let info = infos[&state.s_hat];
            if !info.free {
                return out;
            }
            let mut triples = state.folio.triples.clone();
            for t in &state.folio.triples {
                for d in self.ctx.all.minus(t.d).iter() {
                    if !self.ctx.extends(t, d, v) {
                        continue;
                    }
                    if t.d.len() + 1 == h {
                        // completes a full occurrence through v
                        return out;
                    }
                    let r = t.r.with(d);
                    let mut rho = Roots::new();
                    for l in r.iter() {
                        rho.push(if l == d { v as u32 } else { t.root(l).unwrap() as u32 });
                    }
                    triples.push(RootedTriple { d: t.d.with(d), r, rho });
                }
            }
            out.push((
                State {
                    s_hat: state.s_hat.clone(),
                    folio: RootedFolio { local: info.local, triples: sorted_dedup(triples) },
                },
                cell.opt,
                [i as u32, 0],
            ));
            out
        });
        collect(emitted)
    }

    fn forget(&self, child: &Table, child_bag: &[Vertex], bag: &[Vertex], v: Vertex) -> Table {
        let infos = self.infos(bag, child.entries.keys().filter(|s| s.s_hat.binary_search(&v).is_err()).map(|s| &s.s_hat));
        let child_infos = self.infos(child_bag, child.entries.keys().filter(|s| s.s_hat.binary_search(&v).is_err()).map(|s| &s.s_hat));
        let born: HashMap<&Vec<Vertex>, Vec<RootedTriple>> = {
            let keys: Vec<&Vec<Vertex>> = child_infos.keys().collect();
            let lists = par_map(keys.len(), self.parallel, |i| {
                let scope = minus_vertex(child_bag, keys[i]);
                self.ctx.forget_triples(&scope, v, &child_infos[keys[i]].local)
            });
            keys.into_iter().zip(lists).collect()
        };
        let emitted: Vec<Emitted> = par_map(child.len(), self.parallel, |i| {
            let (state, cell) = child.state(i as u32);
            if let Ok(pos) = state.s_hat.binary_search(&v) {
                let mut s_hat = state.s_hat.clone();
                s_hat.remove(pos);
                return vec![(State { s_hat, folio: state.folio.clone() }, cell.opt, [i as u32, 0])];
            }
            let mut triples = born[&state.s_hat].clone();
            for t in &state.folio.triples {
                match t.rho.iter().position(|&u| u as Vertex == v) {
                    None => triples.push(t.clone()),
                    Some(pos) => {
                        let mut rho = t.rho.clone();
                        rho.remove(pos);
                        let lv = t.r.iter().nth(pos).unwrap();
                        triples.push(RootedTriple { d: t.d, r: t.r.without(lv), rho });
                    }
                }
            }
            let folio = RootedFolio { local: infos[&state.s_hat].local, triples: sorted_dedup(triples) };
            vec![(State { s_hat: state.s_hat.clone(), folio }, cell.opt, [i as u32, 0])]
        });
        collect(emitted)
    }

    fn join(&self, left: &Table, right: &Table) -> Table {
        let mut by_key: HashMap<&Vec<Vertex>, Vec<u32>> = HashMap::new();
        for (j, state) in right.entries.keys().enumerate() {
            by_key.entry(&state.s_hat).or_default().push(j as u32);
        }
        let all = self.ctx.all;
        let emitted: Vec<Emitted> = par_map(left.len(), self.parallel, |i| {
            let (ls, lc) = left.state(i as u32);
            let Some(partners) = by_key.get(&ls.s_hat) else {
                return Vec::new();
            };
            let mut out = Vec::new();
            let mut left_groups: HashMap<(LabelSet, &Roots), Vec<LabelSet>> = HashMap::new();
            for t in &ls.folio.triples {
                left_groups.entry((t.r, &t.rho)).or_default().push(t.d);
            }
            'pair: for &j in partners {
                let (rs, rc) = right.state(j);
                assert_eq!(ls.folio.local, rs.folio.local, "join children disagree on local occurrences");
                let mut triples = ls.folio.triples.clone();
                triples.extend(rs.folio.triples.iter().cloned());
                for t2 in &rs.folio.triples {
                    let Some(ds) = left_groups.get(&(t2.r, &t2.rho)) else {
                        continue;
                    };
                    let u2 = t2.unrooted();
                    let nb2 = u2.iter().fold(LabelSet::EMPTY, |acc, l| acc.union(self.ctx.pattern.neighbors(l)));
                    for &d1 in ds {
                        let u1 = d1.minus(t2.r);
                        // the two forgotten parts live in different subtrees, hence are non-adjacent
                        if !u1.intersection(u2).is_empty() || !u1.intersection(nb2).is_empty() {
                            continue;
                        }
                        let d = d1.union(t2.d);
                        if d == all {
                            continue 'pair;
                        }
                        triples.push(RootedTriple { d, r: t2.r, rho: t2.rho.clone() });
                    }
                }
                let folio = RootedFolio { local: ls.folio.local, triples: sorted_dedup(triples) };
                let opt = lc.opt + rc.opt - ls.s_hat.len() as u32;
                out.push((State { s_hat: ls.s_hat.clone(), folio }, opt, [i as u32, j]));
            }
            out
        });
        collect(emitted)
    }
}

fn collect(emitted: Vec<Emitted>) -> Table {
    let mut t = Table::default();
    for batch in emitted {
        for (state, opt, back) in batch {
            t.offer(state, opt, back);
        }
    }
    t
}

/// Solves (colorful) `H`-IS-Deletion exactly over the given nice decomposition.
pub fn solve(
    g: &Graph,
    ntd: &NiceTreeDecomposition,
    pattern: &Pattern,
    coloring: Option<&Coloring>,
    options: FolioOptions,
) -> Result<FolioOutcome> {
    ntd.validate(g)?;
    if let Some(c) = coloring {
        c.check_graph(g)?;
        if let Some(&l) = c.labels().iter().find(|&&l| l as usize >= pattern.size()) {
            return Err(Error::Coloring(format!("label {l} exceeds the pattern")));
        }
    }
    let run = || solve_inner(g, ntd, pattern, coloring, options);
    if options.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.threads)
            .build()
            .map_err(|e| Error::Unsupported(e.to_string()))?;
        pool.install(run)
    } else {
        run()
    }
}

fn solve_inner(
    g: &Graph,
    ntd: &NiceTreeDecomposition,
    pattern: &Pattern,
    coloring: Option<&Coloring>,
    options: FolioOptions,
) -> Result<FolioOutcome> {
    let h = pattern.size();
    let solver = Solver {
        ctx: Ctx { g, pattern, coloring, h, all: pattern.all() },
        ntd,
        parallel: options.threads > 1,
    };
    let keep = options.keep_tables || options.witness;
    let mut tables: Vec<Option<Table>> = vec![None; ntd.node_count()];
    let mut stats = FolioStats { node_count: ntd.node_count(), ..FolioStats::default() };
    for (id, node) in ntd.nodes().iter().enumerate() {
        let table = {
            let child = |i: usize| tables[node.children[i]].as_ref().expect("child table computed");
            match node.kind {
                NodeKind::Leaf => solver.leaf(),
                NodeKind::Introduce(v) => solver.introduce(child(0), &node.bag, v),
                NodeKind::Forget(v) => {
                    let child_bag = &solver.ntd.node(node.children[0]).bag;
                    solver.forget(child(0), child_bag, &node.bag, v)
                }
                NodeKind::Join => solver.join(child(0), child(1)),
            }
        };
        stats.peak_state_count = stats.peak_state_count.max(table.len());
        stats.total_state_count += table.len();
        let most = table.entries.keys().map(|s| s.folio.triples.len()).max().unwrap_or(0);
        stats.peak_triple_count = stats.peak_triple_count.max(most);
        debug_assert!(
            most as f64 <= 4f64.powi(h as i32) * (node.bag.len().max(1) as f64).powi(h.saturating_sub(2) as i32),
            "triple count above the theoretical ceiling"
        );
        if !keep {
            for &c in &node.children {
                tables[c] = None;
            }
        }
        tables[id] = Some(table);
    }
    let root_table = tables[ntd.root()].as_ref().expect("root table");
    let opt = root_extract(root_table).expect("deleting every vertex is always feasible");

    let witness = options.witness.then(|| {
        let (best, _) = root_table
            .entries
            .values()
            .enumerate()
            .min_by_key(|&(i, c)| (c.opt, i))
            .expect("nonempty root table");
        let mut set = Vec::new();
        let mut stack = vec![(ntd.root(), best as u32)];
        while let Some((node, idx)) = stack.pop() {
            let (state, cell) = tables[node].as_ref().unwrap().state(idx);
            set.extend_from_slice(&state.s_hat);
            let n = ntd.node(node);
            for (k, &c) in n.children.iter().enumerate() {
                stack.push((c, cell.back[k]));
            }
        }
        set.sort_unstable();
        set.dedup();
        assert_eq!(set.len(), opt, "witness size disagrees with the optimum");
        set
    });
    if let Some(w) = &witness {
        let rest = crate::embed::remaining_vertices(g, w);
        assert!(crate::embed::is_pattern_free(g, pattern, &rest, coloring), "witness leaves an occurrence");
    }
    let tables = options
        .keep_tables
        .then(|| tables.into_iter().map(|t| t.unwrap_or_default()).collect());
    Ok(FolioOutcome { opt, witness, stats, tables })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{heuristic_decomposition, niceify, TreeDecomposition};

    fn run(g: &Graph, p: &str, coloring: Option<&Coloring>) -> FolioOutcome {
        let ntd = niceify(&heuristic_decomposition(g), g).unwrap();
        solve(g, &ntd, &Pattern::parse(p).unwrap(), coloring, FolioOptions::default()).unwrap()
    }

    #[test]
    fn single_occurrence_needs_one_deletion() {
        let g = Pattern::parse("K4-e").unwrap().graph().clone();
        let out = run(&g, "K4-e", None);
        assert_eq!(out.opt, 1);
        assert_eq!(out.witness.unwrap().len(), 1);
    }

    #[test]
    fn triangle_free_graph() {
        assert_eq!(run(&Graph::path(3), "K3", None).opt, 0);
    }

    #[test]
    fn triangle_and_cliques() {
        assert_eq!(run(&Graph::complete(3), "K3", None).opt, 1);
        assert_eq!(run(&Graph::complete(4), "K3", None).opt, 2);
        assert_eq!(run(&Graph::path(4), "P3", None).opt, 1);
    }

    #[test]
    fn colorful_c4_in_c5() {
        let g = Graph::cycle(5);
        let c = Coloring::new(vec![0, 1, 2, 3, 0], 4).unwrap();
        assert_eq!(run(&g, "C4", Some(&c)).opt, 0);
    }

    #[test]
    fn join_keeps_unrelated_forgotten_pieces() {
        // P3 split across a join: edge 1-2 below one side, vertex 3 below the other
        let g = Graph::from_edges(4, &[(0, 1), (1, 2)]).unwrap();
        let td = TreeDecomposition::new(
            vec![vec![0], vec![0, 1], vec![1, 2], vec![0, 3]],
            vec![(0, 1), (1, 2), (0, 3)],
        );
        let ntd = niceify(&td, &g).unwrap();
        let out = solve(&g, &ntd, &Pattern::parse("P3").unwrap(), None, FolioOptions::default()).unwrap();
        assert_eq!(out.opt, 1);
    }

    #[test]
    fn root_extract_is_a_minimum() {
        let mut t = Table::default();
        t.offer(State { s_hat: vec![], folio: RootedFolio::default() }, 4, [0, 0]);
        let other = RootedFolio {
            local: LocalSet::default(),
            triples: vec![RootedTriple { d: LabelSet(1), r: LabelSet::EMPTY, rho: Roots::new() }],
        };
        t.offer(State { s_hat: vec![], folio: other }, 2, [0, 0]);
        assert_eq!(root_extract(&t), Some(2));
    }

    #[test]
    fn threads_give_identical_tables() {
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 6), (2, 5)]).unwrap();
        let ntd = niceify(&heuristic_decomposition(&g), &g).unwrap();
        let p = Pattern::parse("P3").unwrap();
        let opts = |threads| FolioOptions { witness: true, keep_tables: true, threads };
        let a = solve(&g, &ntd, &p, None, opts(1)).unwrap();
        let b = solve(&g, &ntd, &p, None, opts(3)).unwrap();
        assert_eq!(a.opt, b.opt);
        assert_eq!(a.witness, b.witness);
        let (ta, tb) = (a.tables.unwrap(), b.tables.unwrap());
        for (x, y) in ta.iter().zip(&tb) {
            assert!(x.iter().eq(y.iter()));
        }
    }
}
