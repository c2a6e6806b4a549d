use serde::{Deserialize, Serialize};

use crate::graph::{Graph, Vertex};
use crate::pattern::Coloring;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairKind {
    K2,
    I2,
}

/// Colorful `K_2` / `I_2` deletion: occurrences are the pairs across the two
/// color classes that are edges (resp. non-edges), so the answer is a minimum
/// vertex cover of a bipartite graph. Returns the size and a cover.
pub fn solve_colorful_pair(g: &Graph, coloring: &Coloring, kind: PairKind) -> Result<(usize, Vec<Vertex>)> {
    coloring.check_graph(g)?;
    if let Some(&l) = coloring.labels().iter().find(|&&l| l > 1) {
        return Err(Error::Unsupported(format!("two-label solver got label {l}")));
    }
    let left = coloring.class(0);
    let right = coloring.class(1);
    let adj: Vec<Vec<usize>> = left
        .iter()
        .map(|&u| {
            (0..right.len())
                .filter(|&j| g.has_edge(u, right[j]) == (kind == PairKind::K2))
                .collect()
        })
        .collect();

    let mut match_r: Vec<Option<usize>> = vec![None; right.len()];
    let mut match_l: Vec<Option<usize>> = vec![None; left.len()];
    for i in 0..left.len() {
        let mut seen = vec![false; right.len()];
        augment(i, &adj, &mut seen, &mut match_l, &mut match_r);
    }

    // König: alternating reachability from unmatched left vertices
    let mut zl = vec![false; left.len()];
    let mut zr = vec![false; right.len()];
    let mut stack: Vec<usize> = (0..left.len()).filter(|&i| match_l[i].is_none()).collect();
    stack.iter().for_each(|&i| zl[i] = true);
    while let Some(i) = stack.pop() {
        for &j in &adj[i] {
            if !zr[j] && match_l[i] != Some(j) {
                zr[j] = true;
                if let Some(k) = match_r[j] {
                    if !zl[k] {
                        zl[k] = true;
                        stack.push(k);
                    }
                }
            }
        }
    }
    let mut cover: Vec<Vertex> = (0..left.len())
        .filter(|&i| !zl[i])
        .map(|i| left[i])
        .chain((0..right.len()).filter(|&j| zr[j]).map(|j| right[j]))
        .collect();
    cover.sort_unstable();
    let matched = match_l.iter().filter(|m| m.is_some()).count();
    debug_assert_eq!(cover.len(), matched);
    Ok((matched, cover))
}

fn augment(
    i: usize,
    adj: &[Vec<usize>],
    seen: &mut [bool],
    match_l: &mut [Option<usize>],
    match_r: &mut [Option<usize>],
) -> bool {
    for &j in &adj[i] {
        if seen[j] {
            continue;
        }
        seen[j] = true;
        if match_r[j].is_none_or(|k| augment(k, adj, seen, match_l, match_r)) {
            match_r[j] = Some(i);
            match_l[i] = Some(j);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let k2 = Graph::complete(2);
        let mono = Coloring::new(vec![0, 0], 2).unwrap();
        assert_eq!(solve_colorful_pair(&k2, &mono, PairKind::K2).unwrap().0, 0);
        let c4 = Graph::cycle(4);
        let proper = Coloring::new(vec![0, 1, 0, 1], 2).unwrap();
        let (size, cover) = solve_colorful_pair(&c4, &proper, PairKind::K2).unwrap();
        assert_eq!(size, 2);
        assert!(c4.edges().all(|(u, v)| cover.contains(&u) || cover.contains(&v)));
        assert_eq!(solve_colorful_pair(&c4, &proper, PairKind::I2).unwrap().0, 0);
    }
}
