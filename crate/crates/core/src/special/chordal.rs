use crate::graph::{Graph, Vertex};
use crate::{Error, Result};

/// Maximum cardinality search visiting order (ties: smallest id).
pub fn maximum_cardinality_search(g: &Graph) -> Vec<Vertex> {
    let n = g.vertex_count();
    let mut weight = vec![0usize; n];
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !done[v])
            .max_by_key(|&v| (weight[v], std::cmp::Reverse(v)))
            .expect("unvisited vertex");
        done[v] = true;
        order.push(v);
        for u in g.neighbors(v) {
            if !done[u] {
                weight[u] += 1;
            }
        }
    }
    order
}

/// True iff every vertex's later neighbors in `order` form a clique.
pub fn is_perfect_elimination_ordering(g: &Graph, order: &[Vertex]) -> bool {
    let n = g.vertex_count();
    if order.len() != n {
        return false;
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return false;
        }
        pos[v] = i;
    }
    order.iter().all(|&v| {
        let later: Vec<Vertex> = g.neighbors(v).filter(|&u| pos[u] > pos[v]).collect();
        match later.iter().min_by_key(|&&u| pos[u]) {
            None => true,
            Some(&first) => later.iter().all(|&u| u == first || g.has_edge(first, u)),
        }
    })
}

/// A perfect elimination ordering (simplicial vertices first), or `None`
/// when the graph is not chordal.
pub fn perfect_elimination_ordering(g: &Graph) -> Option<Vec<Vertex>> {
    let mut order = maximum_cardinality_search(g);
    order.reverse();
    is_perfect_elimination_ordering(g, &order).then_some(order)
}

/// Covers a chordal `I_h`-free graph by at most `h - 1` cliques: take the
/// closed neighborhood of a simplicial vertex and recurse on the rest.
pub fn chordal_clique_cover(g: &Graph, h: usize) -> Result<Vec<Vec<Vertex>>> {
    if perfect_elimination_ordering(g).is_none() {
        return Err(Error::NotChordal);
    }
    let n = g.vertex_count();
    let mut alive = vec![true; n];
    let mut left = n;
    let mut parts = Vec::new();
    while left > 0 {
        if parts.len() + 1 >= h.max(1) {
            // the chosen simplicial vertices plus any live vertex are independent
            return Err(Error::ContainsIndependentSet(h));
        }
        let v = (0..n)
            .find(|&v| {
                alive[v] && {
                    let nb: Vec<Vertex> = g.neighbors(v).filter(|&u| alive[u]).collect();
                    g.is_clique(&nb)
                }
            })
            .expect("chordal graphs have a simplicial vertex");
        let mut part: Vec<Vertex> = g.neighbors(v).filter(|&u| alive[u]).collect();
        part.push(v);
        part.sort_unstable();
        for &u in &part {
            alive[u] = false;
        }
        left -= part.len();
        parts.push(part);
    }
    Ok(parts)
}
