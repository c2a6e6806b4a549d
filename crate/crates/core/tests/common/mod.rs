//! Brute-force reference computations shared by the integration tests. They
//! work on adjacency bitmasks and share no code with the library solvers.

#![allow(dead_code)]

use isdel::{Coloring, Graph, Pattern, TreeDecomposition, Vertex};
use rand::seq::SliceRandom;
use rand::Rng;

/// Adjacency bitmasks, at most 64 vertices.
#[derive(Clone, Debug)]
pub struct Masks {
    pub n: usize,
    pub adj: Vec<u64>,
}

impl Masks {
    pub fn of(g: &Graph) -> Self {
        let n = g.vertex_count();
        assert!(n <= 64);
        let mut adj = vec![0u64; n];
        for (u, v) in g.edges() {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Masks { n, adj }
    }

    pub fn edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }
}

/// Every injective map `labels[i] ↦ image[i]` inducing `pattern[labels]` in
/// `g[scope]` and respecting `colors`.
pub fn embeddings(
    g: &Masks,
    scope: u64,
    pattern: &Masks,
    labels: &[usize],
    colors: Option<&[usize]>,
) -> Vec<Vec<usize>> {
    fn go(
        g: &Masks,
        scope: u64,
        p: &Masks,
        labels: &[usize],
        colors: Option<&[usize]>,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let i = cur.len();
        if i == labels.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..g.n {
            if scope >> v & 1 == 0 || cur.contains(&v) {
                continue;
            }
            if colors.is_some_and(|c| c[v] != labels[i]) {
                continue;
            }
            if (0..i).all(|j| g.edge(cur[j], v) == p.edge(labels[j], labels[i])) {
                cur.push(v);
                go(g, scope, p, labels, colors, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(g, scope, pattern, labels, colors, &mut Vec::new(), &mut out);
    out
}

pub fn colors_of(coloring: Option<&Coloring>) -> Option<Vec<usize>> {
    coloring.map(|c| c.labels().iter().map(|&l| l as usize).collect())
}

/// Vertex sets (as masks) of all full occurrences.
pub fn occurrence_masks(g: &Graph, pattern: &Pattern, coloring: Option<&Coloring>) -> Vec<u64> {
    let gm = Masks::of(g);
    let pm = Masks::of(pattern.graph());
    let labels: Vec<usize> = (0..pattern.size()).collect();
    let colors = colors_of(coloring);
    let mut out: Vec<u64> = embeddings(&gm, full(gm.n), &pm, &labels, colors.as_deref())
        .into_iter()
        .map(|e| e.iter().fold(0u64, |m, &v| m | 1 << v))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub fn full(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Minimum hitting set size of `sets` over `n ≤ 24` vertices by subset enumeration.
pub fn brute_min_hitting(sets: &[u64], n: usize) -> usize {
    assert!(n <= 24);
    let mut best = n;
    for s in 0u64..1 << n {
        let k = s.count_ones() as usize;
        if k < best && sets.iter().all(|&o| o & s != 0) {
            best = k;
        }
    }
    if sets.is_empty() {
        0
    } else {
        best
    }
}

/// All hitting sets of minimum size, as masks.
pub fn brute_all_min_hitting(sets: &[u64], n: usize) -> Vec<u64> {
    let k = brute_min_hitting(sets, n);
    (0u64..1 << n)
        .filter(|&s| s.count_ones() as usize == k && sets.iter().all(|&o| o & s != 0))
        .collect()
}

pub fn brute_opt(g: &Graph, pattern: &Pattern, coloring: Option<&Coloring>) -> usize {
    brute_min_hitting(&occurrence_masks(g, pattern, coloring), g.vertex_count())
}

pub fn independence_number(g: &Graph) -> usize {
    let m = Masks::of(g);
    (0u64..1 << m.n)
        .filter(|&s| (0..m.n).all(|v| s >> v & 1 == 0 || m.adj[v] & s == 0))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

pub fn vertex_cover_number(g: &Graph) -> usize {
    let n = g.vertex_count();
    let edges: Vec<u64> = g.edges().map(|(u, v)| 1 << u | 1 << v).collect();
    brute_min_hitting(&edges, n)
}

/// One graph per isomorphism class on `n ≤ 6` vertices.
pub fn graphs_up_to_iso(n: usize) -> Vec<Graph> {
    assert!(n <= 6);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let index = |u: usize, v: usize| pairs.iter().position(|&p| p == (u.min(v), u.max(v))).unwrap();
    let perms = permutations(n);
    let mapped: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| pairs.iter().map(|&(u, v)| index(p[u], p[v])).collect())
        .collect();
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for code in 0u32..1 << pairs.len() {
        let canon = mapped
            .iter()
            .map(|m| (0..pairs.len()).filter(|&i| code >> i & 1 == 1).fold(0u32, |acc, i| acc | 1 << m[i]))
            .min()
            .unwrap();
        if seen.insert(canon) {
            let edges: Vec<(usize, usize)> =
                (0..pairs.len()).filter(|&i| canon >> i & 1 == 1).map(|i| pairs[i]).collect();
            out.push(Graph::from_edges(n, &edges).unwrap());
        }
    }
    out
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// A random partial `t`-tree on `n > t` vertices with its width-`t`
/// decomposition; each edge of the full `t`-tree survives with probability `keep`.
pub fn partial_ktree<R: Rng>(n: usize, t: usize, keep: f64, rng: &mut R) -> (Graph, TreeDecomposition) {
    assert!(n > t);
    let mut order: Vec<Vertex> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    let base: Vec<Vertex> = order[..=t].to_vec();
    for (i, &u) in base.iter().enumerate() {
        for &v in &base[i + 1..] {
            edges.push((u, v));
        }
    }
    let mut bags = vec![base];
    let mut tree = Vec::new();
    for &v in &order[t + 1..] {
        let parent = rng.gen_range(0..bags.len());
        let mut clique = bags[parent].clone();
        clique.remove(rng.gen_range(0..clique.len()));
        for &u in &clique {
            edges.push((u, v));
        }
        clique.push(v);
        tree.push((parent, bags.len()));
        bags.push(clique);
    }
    edges.retain(|_| rng.gen_bool(keep));
    let g = Graph::from_edges(n, &edges).unwrap();
    for b in &mut bags {
        b.sort_unstable();
    }
    (g, TreeDecomposition::new(bags, tree))
}

/// A random chordal graph: intersection graph of random subtrees of a random tree.
pub fn random_chordal<R: Rng>(n: usize, tree_size: usize, rng: &mut R) -> Graph {
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); tree_size];
    for x in 1..tree_size {
        let p = rng.gen_range(0..x);
        nbrs[x].push(p);
        nbrs[p].push(x);
    }
    let subtrees: Vec<Vec<bool>> = (0..n)
        .map(|_| {
            let mut inside = vec![false; tree_size];
            let start = rng.gen_range(0..tree_size);
            inside[start] = true;
            let mut frontier = vec![start];
            let target = rng.gen_range(1..=tree_size.min(4));
            let mut size = 1;
            while size < target && !frontier.is_empty() {
                let i = rng.gen_range(0..frontier.len());
                let x = frontier[i];
                let fresh: Vec<usize> = nbrs[x].iter().copied().filter(|&y| !inside[y]).collect();
                if fresh.is_empty() {
                    frontier.swap_remove(i);
                    continue;
                }
                let y = fresh[rng.gen_range(0..fresh.len())];
                inside[y] = true;
                frontier.push(y);
                size += 1;
            }
            inside
        })
        .collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if (0..tree_size).any(|x| subtrees[u][x] && subtrees[v][x]) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// Evaluates a CNF on an assignment (bit `i` = variable `i+1`).
pub fn satisfies(clauses: &[Vec<i32>], assignment: u64) -> bool {
    clauses.iter().all(|c| {
        c.iter().any(|&l| {
            let bit = assignment >> (l.unsigned_abs() - 1) & 1 == 1;
            bit == (l > 0)
        })
    })
}

pub fn brute_sat(n: usize, clauses: &[Vec<i32>]) -> bool {
    (0u64..1 << n).any(|a| satisfies(clauses, a))
}
