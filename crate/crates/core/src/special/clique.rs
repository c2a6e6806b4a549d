use indexmap::IndexMap;

use crate::decomp::{NiceTreeDecomposition, NodeKind};
use crate::embed::is_pattern_free;
use crate::graph::{Graph, Vertex};
use crate::pattern::{Coloring, Pattern};
use crate::{Error, Result};

/// Minimum number of deletions leaving no (colorful) `K_h`. Every clique sits
/// inside one bag, so the state is the bag part of the solution alone.
pub fn solve_clique_hitting(
    g: &Graph,
    ntd: &NiceTreeDecomposition,
    h: usize,
    coloring: Option<&Coloring>,
) -> Result<usize> {
    if h == 0 {
        return Err(Error::Pattern("clique size must be positive".into()));
    }
    ntd.validate(g)?;
    let kh = Pattern::named("K", &[h])?;
    if let Some(c) = coloring {
        c.check_graph(g)?;
    }
    let mut tables: Vec<Option<IndexMap<Vec<Vertex>, usize>>> = vec![None; ntd.node_count()];
    for (id, node) in ntd.nodes().iter().enumerate() {
        let mut out: IndexMap<Vec<Vertex>, usize> = IndexMap::new();
        let mut offer = |s: Vec<Vertex>, opt: usize| {
            let e = out.entry(s).or_insert(opt);
            *e = (*e).min(opt);
        };
        match node.kind {
            NodeKind::Leaf => offer(Vec::new(), 0),
            NodeKind::Introduce(v) => {
                for (s, &opt) in tables[node.children[0]].take().unwrap().iter() {
                    let mut with = s.clone();
                    with.insert(with.binary_search(&v).unwrap_err(), v);
                    offer(with, opt + 1);
                    let rest: Vec<Vertex> = node.bag.iter().copied().filter(|u| s.binary_search(u).is_err()).collect();
                    if is_pattern_free(g, &kh, &rest, coloring) {
                        offer(s.clone(), opt);
                    }
                }
            }
            NodeKind::Forget(v) => {
                for (s, &opt) in tables[node.children[0]].take().unwrap().iter() {
                    offer(s.iter().copied().filter(|&u| u != v).collect(), opt);
                }
            }
            NodeKind::Join => {
                let left = tables[node.children[0]].take().unwrap();
                let right = tables[node.children[1]].take().unwrap();
                for (s, &a) in &left {
                    if let Some(&b) = right.get(s) {
                        offer(s.clone(), a + b - s.len());
                    }
                }
            }
        }
        tables[id] = Some(out);
    }
    let root = tables[ntd.root()].take().unwrap();
    Ok(*root.get(&Vec::new()).expect("root state"))
}

/// Minimum deletions leaving no `K_h + I_l` as a (not necessarily induced)
/// subgraph: any `h`-clique together with `l` further vertices is one.
pub fn solve_kh_il_subgraph(g: &Graph, ntd: &NiceTreeDecomposition, h: usize, l: usize) -> Result<usize> {
    let n = g.vertex_count();
    if n < h + l {
        return Ok(0);
    }
    let k = solve_clique_hitting(g, ntd, h, None)?;
    let slack = n - (h + l);
    Ok(if k <= slack { k } else { slack + 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{heuristic_decomposition, niceify};

    fn nice(g: &Graph) -> NiceTreeDecomposition {
        niceify(&heuristic_decomposition(g), g).unwrap()
    }

    #[test]
    fn examples() {
        let k4 = Graph::complete(4);
        assert_eq!(solve_clique_hitting(&k4, &nice(&k4), 3, None).unwrap(), 2);
        let c5 = Graph::cycle(5);
        assert_eq!(solve_clique_hitting(&c5, &nice(&c5), 3, None).unwrap(), 0);
    }

    #[test]
    fn subgraph_examples() {
        let k3 = Graph::complete(3);
        assert_eq!(solve_kh_il_subgraph(&k3, &nice(&k3), 3, 1).unwrap(), 0);
        let k3k1 = Graph::complete(3).disjoint_union(&Graph::new(1));
        assert_eq!(solve_kh_il_subgraph(&k3k1, &nice(&k3k1), 3, 1).unwrap(), 1);
        let i5 = Graph::new(5);
        assert_eq!(solve_kh_il_subgraph(&i5, &nice(&i5), 2, 0).unwrap(), 0);
    }
}
