use std::collections::BTreeSet;

use crate::decomp::TreeDecomposition;
use crate::graph::{Graph, Vertex};
use crate::{Error, Result};

/// Does `g[scope]` contain `k` pairwise non-adjacent vertices?
pub fn has_independent_set(g: &Graph, scope: &[Vertex], k: usize) -> bool {
    fn go(g: &Graph, cand: &[Vertex], k: usize) -> bool {
        if k == 0 {
            return true;
        }
        if cand.len() < k {
            return false;
        }
        for (i, &v) in cand.iter().enumerate() {
            if cand.len() - i < k {
                break;
            }
            let rest: Vec<Vertex> = cand[i + 1..].iter().copied().filter(|&u| !g.has_edge(u, v)).collect();
            if go(g, &rest, k - 1) {
                return true;
            }
        }
        false
    }
    go(g, scope, k)
}

pub fn independence_number(g: &Graph) -> usize {
    let all: Vec<Vertex> = g.vertices().collect();
    (1..=all.len()).take_while(|&k| has_independent_set(g, &all, k)).last().unwrap_or(0)
}

fn for_each_combination(pool: &[Vertex], k: usize, visit: &mut impl FnMut(&[Vertex]) -> bool) -> bool {
    fn go(pool: &[Vertex], k: usize, from: usize, pick: &mut Vec<Vertex>, visit: &mut impl FnMut(&[Vertex]) -> bool) -> bool {
        if pick.len() == k {
            return visit(pick);
        }
        for i in from..=pool.len() - (k - pick.len()) {
            pick.push(pool[i]);
            let stop = go(pool, k, i + 1, pick, visit);
            pick.pop();
            if stop {
                return true;
            }
        }
        false
    }
    go(pool, k, 0, &mut Vec::with_capacity(k), visit)
}

/// Minimum number of deletions leaving no induced `I_h`. A solution's
/// complement is covered by at most `h - 1` bags, so it suffices to search
/// inside unions of that many bags for a largest `I_h`-free subset.
pub fn solve_independent_set_hitting(g: &Graph, td: &TreeDecomposition, h: usize) -> Result<usize> {
    if h == 0 {
        return Err(Error::Pattern("independent set size must be positive".into()));
    }
    let report = td.validate(g);
    if !report.is_valid() {
        return Err(Error::InvalidDecomposition(format!("{:?}", report.violations)));
    }
    let n = g.vertex_count();
    if h == 1 {
        return Ok(n);
    }
    let bags: Vec<Vec<Vertex>> = td.bags().iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let mut best = 0usize;
    let idx: Vec<usize> = (0..bags.len()).collect();
    for count in 1..=(h - 1).min(bags.len()) {
        for_each_combination(&idx, count, &mut |chosen| {
            let union: Vec<Vertex> = chosen
                .iter()
                .flat_map(|&b| bags[b].iter().copied())
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            for size in (best + 1..=union.len()).rev() {
                let found = for_each_combination(&union, size, &mut |keep| !has_independent_set(g, keep, h));
                if found {
                    best = size;
                    break;
                }
            }
            false
        });
    }
    Ok(n - best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::heuristic_decomposition;

    #[test]
    fn examples() {
        let k4 = Graph::complete(4);
        assert_eq!(solve_independent_set_hitting(&k4, &heuristic_decomposition(&k4), 2).unwrap(), 0);
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(solve_independent_set_hitting(&star, &heuristic_decomposition(&star), 2).unwrap(), 2);
        let c6 = Graph::cycle(6);
        // the two alternating triples are disjoint
        assert_eq!(solve_independent_set_hitting(&c6, &heuristic_decomposition(&c6), 3).unwrap(), 2);
    }

    #[test]
    fn independence_numbers() {
        assert_eq!(independence_number(&Graph::cycle(5)), 2);
        assert_eq!(independence_number(&Graph::new(4)), 4);
        assert_eq!(independence_number(&Graph::new(0)), 0);
    }
}
