mod common;

use common::*;
use isdel::decomp::{heuristic_decomposition, niceify};
use isdel::embed::{enumerate_induced_embeddings, is_pattern_free, remaining_vertices};
use isdel::folio::{self, FolioOptions};
use isdel::generate::rng;
use isdel::reductions::{self, Formula};
use isdel::special::{perfect_elimination_ordering, solve_clique_hitting, solve_colorful_pair, PairKind};
use isdel::{io, oracle, Coloring, Graph, LabelSet, NodeKind, Pattern};
use proptest::prelude::*;
use rand::seq::SliceRandom;

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            let edges: Vec<_> = pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e).collect();
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

fn small_pattern() -> impl Strategy<Value = Pattern> {
    prop::sample::select(vec!["P3", "K3", "I3", "K2+I1", "P4", "C4", "K1,3", "2K2", "K4-e"])
        .prop_map(|s| Pattern::parse(s).unwrap())
}

fn coloring_for(n: usize, h: usize) -> impl Strategy<Value = Coloring> {
    proptest::collection::vec(0..h as u8, n).prop_map(move |l| Coloring::new(l, h).unwrap())
}

fn solve(g: &Graph, p: &Pattern, c: Option<&Coloring>) -> (usize, Vec<usize>) {
    let ntd = niceify(&heuristic_decomposition(g), g).unwrap();
    let out = folio::solve(g, &ntd, p, c, FolioOptions::default()).unwrap();
    (out.opt, out.witness.unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn embeddings_are_induced_and_complement_dual(g in graph(7), p in small_pattern(), mask in 1u16..512) {
        let d = LabelSet(mask & p.all().0);
        prop_assume!(!d.is_empty());
        let scope: Vec<usize> = g.vertices().collect();
        let embs = enumerate_induced_embeddings(&g, &p, d, &scope, None);
        for e in &embs {
            for (a, u) in e.pairs() {
                for (b, v) in e.pairs() {
                    if a != b {
                        prop_assert_eq!(g.has_edge(u, v), p.adjacent(a, b));
                    }
                }
            }
        }
        let dual = enumerate_induced_embeddings(&g.complement(), &p.complement(), d, &scope, None);
        prop_assert_eq!(embs.len(), dual.len());
        let labels: Vec<usize> = d.iter().map(|l| l as usize).collect();
        let brute = embeddings(&Masks::of(&g), full(g.vertex_count()), &Masks::of(p.graph()), &labels, None);
        prop_assert_eq!(embs.len(), brute.len());
    }

    #[test]
    fn color_filter_only_removes(g in graph(7), p in small_pattern(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = isdel::generate::random_coloring(g.vertex_count(), p.size(), &mut r);
        let scope: Vec<usize> = g.vertices().collect();
        let all = enumerate_induced_embeddings(&g, &p, p.all(), &scope, None);
        let colored = enumerate_induced_embeddings(&g, &p, p.all(), &scope, Some(&c));
        for e in &colored {
            prop_assert!(all.contains(e));
            prop_assert!(e.pairs().all(|(l, v)| c.label(v) == l));
        }
    }

    #[test]
    fn decompositions_are_valid_and_niceify_keeps_width(g in graph(10)) {
        let td = heuristic_decomposition(&g);
        prop_assert!(td.validate(&g).is_valid());
        let ntd = niceify(&td, &g).unwrap();
        prop_assert!(ntd.validate(&g).is_ok());
        prop_assert_eq!(ntd.width(), td.width());
        prop_assert!(ntd.node(ntd.root()).bag.is_empty());
        for v in g.vertices() {
            let forgets = ntd.nodes().iter().filter(|n| n.kind == NodeKind::Forget(v)).count();
            prop_assert_eq!(forgets, 1);
        }
        // every clique lies in a bag, and the bags' fill-in is chordal
        let m = Masks::of(&g);
        for s in 1u64..1 << g.vertex_count() {
            let clique = (0..m.n).all(|v| s >> v & 1 == 0 || (m.adj[v] | 1 << v) & s == s);
            if clique {
                prop_assert!(td.bags().iter().any(|b| s & !b.iter().fold(0u64, |a, &v| a | 1 << v) == 0));
            }
        }
        prop_assert!(perfect_elimination_ordering(&td.fill_in_graph(&g)).is_some());
    }

    #[test]
    fn witness_is_valid(g in graph(9), p in small_pattern()) {
        let (opt, witness) = solve(&g, &p, None);
        prop_assert_eq!(witness.len(), opt);
        prop_assert!(is_pattern_free(&g, &p, &remaining_vertices(&g, &witness), None));
        prop_assert_eq!(opt, brute_opt(&g, &p, None));
    }

    #[test]
    fn colorful_never_exceeds_uncolored(g in graph(9), p in small_pattern(), seed in any::<u64>()) {
        let c = isdel::generate::random_coloring(g.vertex_count(), p.size(), &mut rng(seed));
        let (colored, w) = solve(&g, &p, Some(&c));
        prop_assert!(colored <= solve(&g, &p, None).0);
        prop_assert!(is_pattern_free(&g, &p, &remaining_vertices(&g, &w), Some(&c)));
    }

    #[test]
    fn isolated_vertices_and_disjoint_copies(g in graph(8), p in small_pattern()) {
        let (opt, _) = solve(&g, &p, None);
        let has_isolated = p.graph().vertices().any(|v| p.graph().degree(v) == 0);
        if !has_isolated {
            prop_assert_eq!(solve(&g.disjoint_union(&Graph::new(1)), &p, None).0, opt);
        }
        if p.graph().is_connected() {
            prop_assert_eq!(solve(&g.disjoint_union(p.graph()), &p, None).0, opt + 1);
        }
    }

    #[test]
    fn triple_count_respects_ceiling(g in graph(8), p in small_pattern()) {
        let ntd = niceify(&heuristic_decomposition(&g), &g).unwrap();
        let out = folio::solve(&g, &ntd, &p, None, FolioOptions { witness: false, keep_tables: true, threads: 1 }).unwrap();
        let h = p.size() as u32;
        for (node, table) in ntd.nodes().iter().zip(out.tables.unwrap()) {
            let cap = 4usize.pow(h) * node.bag.len().max(1).pow(h - 2);
            for (state, _) in table.iter() {
                prop_assert!(state.folio.triples.len() <= cap);
            }
        }
    }

    #[test]
    fn clique_and_matching_solvers_agree(g in graph(9), h in 2usize..=4, seed in any::<u64>()) {
        let ntd = niceify(&heuristic_decomposition(&g), &g).unwrap();
        let p = Pattern::named("K", &[h]).unwrap();
        prop_assert_eq!(solve_clique_hitting(&g, &ntd, h, None).unwrap(), solve(&g, &p, None).0);
        let c = isdel::generate::random_coloring(g.vertex_count(), 2, &mut rng(seed));
        let (k2, _) = solve_colorful_pair(&g, &c, PairKind::K2).unwrap();
        prop_assert_eq!(k2, brute_opt(&g, &Pattern::parse("K2").unwrap(), Some(&c)));
    }

    #[test]
    fn oracle_is_deterministic_and_above_packing(g in graph(10), p in small_pattern()) {
        let a = oracle::solve(&g, &p, None).unwrap();
        let b = oracle::solve(&g, &p, None).unwrap();
        prop_assert_eq!(&a, &b);
        let occ = oracle::enumerate_occurrences(&g, &p, None);
        prop_assert!(oracle::packing_bound(&occ, g.vertex_count()) <= a.opt);
        prop_assert!(is_pattern_free(&g, &p, &remaining_vertices(&g, &a.witness), None));
        for o in &occ {
            prop_assert!(o.windows(2).all(|w| w[0] < w[1]));
        }
        prop_assert!(occ.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn graph_and_decomposition_files_round_trip(g in graph(12)) {
        prop_assert_eq!(io::parse_gr(&io::write_gr(&g)).unwrap(), g.clone());
        let td = heuristic_decomposition(&g);
        prop_assert_eq!(io::parse_td(&io::write_td(&td, g.vertex_count())).unwrap(), td);
    }

    #[test]
    fn coloring_files_round_trip(c in (0usize..10, 1usize..5).prop_flat_map(|(n, h)| coloring_for(n, h))) {
        let h = c.labels().iter().map(|&l| l as usize + 1).max().unwrap_or(1).max(1);
        let text = io::write_coloring(&c);
        let back = io::parse_coloring(&text, c.len(), 4.max(h)).unwrap();
        prop_assert_eq!(back.labels(), c.labels());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn clean_formulas_and_budgets(n in 2usize..=7, seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = Formula::random_clean(n, &mut r);
        prop_assert!(f.validate_clean().is_empty());
        prop_assert_eq!(io::parse_dimacs(&io::write_dimacs(&f)).unwrap(), f.clone());

        // renaming variables and flipping polarities keeps the canonical form
        let mut perm: Vec<i32> = (1..=n as i32).collect();
        perm.shuffle(&mut r);
        let flips: Vec<bool> = (0..n).map(|_| rand::Rng::gen_bool(&mut r, 0.5)).collect();
        let renamed = Formula::new(n, f.clauses().iter().map(|c| c.iter().map(|&l| {
            let v = l.unsigned_abs() as usize - 1;
            let sign = if (l > 0) != flips[v] { 1 } else { -1 };
            sign * perm[v]
        }).collect()).collect());
        prop_assert_eq!(renamed.canonical(), f.canonical());

        let m = f.clause_count();
        let base = 2 * n + f.clauses().iter().map(|c| c.len() - 1).sum::<usize>();
        prop_assert_eq!(base, 5 * n - m);
        prop_assert_eq!(base + 4 * n + (3 * m - 3 * n) + 3 * (3 * n - 2 * m), 15 * n - 4 * m);
        for h in 2..=4 {
            prop_assert_eq!(5 * n - m + 2 * (h - 2) * n, (2 * h + 1) * n - m);
        }

        let inst = reductions::reduce_k_minus_e(&f, 2).unwrap();
        prop_assert_eq!(inst.budget, 5 * n - m);
        prop_assert!(inst.hint.validate(&inst.graph).is_valid());
        let layout = inst.layout.as_ref().unwrap();
        let mut images: Vec<&Vec<usize>> = layout.functions.iter().map(|(_, f)| f).collect();
        images.sort();
        images.dedup();
        prop_assert_eq!(images.len(), layout.functions.len());
        prop_assert_eq!(reductions::reduce_khh(&f, 3).unwrap().budget, 7 * n - m);
    }

    #[test]
    fn colorful_frames_are_well_colored(n in 2usize..=5, seed in any::<u64>(), which in 0usize..3) {
        let f = Formula::random_clean(n, &mut rng(seed));
        let p = Pattern::parse(["P3", "C4", "P4+K1"][which]).unwrap();
        let inst = reductions::reduce_colorful(&f, &p).unwrap();
        prop_assert_eq!(inst.budget, 15 * n - 4 * f.clause_count());
        let c = inst.coloring.as_ref().unwrap();
        prop_assert_eq!(c.len(), inst.graph.vertex_count());
        let layout = inst.layout.as_ref().unwrap();
        for j in 0..layout.columns {
            let col: Vec<_> = (0..layout.s).map(|i| c.label(layout.m[i][j])).collect();
            prop_assert!(col.windows(2).all(|w| w[0] == w[1]));
        }
        let shape = reductions::ColorfulShape::of(&p).unwrap();
        let m: std::collections::HashSet<usize> = layout.m_vertices().into_iter().collect();
        for v in inst.graph.vertices().filter(|v| !m.contains(v)) {
            if inst.graph.neighbors(v).any(|u| m.contains(&u)) {
                let l = c.label(v);
                prop_assert!(l != shape.z0 || layout.a_sets.iter().flatten().any(|&a| a == v));
                prop_assert!(l != shape.z_end || layout.b_set.contains(&v));
            }
        }
        // components off the centre stay bounded by the gadget size, whatever n is
        let central = layout.central();
        let rest: Vec<usize> = inst.graph.vertices().filter(|v| !central.contains(v)).collect();
        let largest = inst.graph.components(Some(&rest)).iter().map(Vec::len).max().unwrap_or(0);
        prop_assert!(largest <= 4 * (3 * shape.h0.len() - 2), "component of {} vertices", largest);
        prop_assert!(inst.hint.validate(&inst.graph).is_valid());
    }
}

#[test]
fn seeded_generation_is_reproducible() {
    let a = isdel::generate::gnp_seeded(40, 0.3, 9).unwrap();
    let b = isdel::generate::gnp_seeded(40, 0.3, 9).unwrap();
    assert_eq!(a, b);
    assert_eq!(isdel::generate::gnp_seeded(0, 0.5, 1).unwrap().vertex_count(), 0);
    assert_eq!(isdel::generate::gnp_seeded(5, 1.0, 1).unwrap().edge_count(), 10);
}
