//! PACE `.gr` / `.td`, coloring files and DIMACS CNF.

use std::fmt::Write as _;

use crate::decomp::TreeDecomposition;
use crate::graph::Graph;
use crate::pattern::{Coloring, Label};
use crate::reductions::Formula;
use crate::{Error, Result};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn numbers(line_no: usize, fields: &[&str]) -> Result<Vec<usize>> {
    fields
        .iter()
        .map(|f| f.parse::<usize>().map_err(|_| parse_err(line_no, format!("expected a non-negative integer, got `{f}`"))))
        .collect()
}

/// Meaningful lines with their 1-based line numbers (comments and blanks dropped).
fn content_lines<'a>(text: &'a str, comment: &'a str) -> impl Iterator<Item = (usize, Vec<&'a str>)> + 'a {
    text.lines().enumerate().filter_map(move |(i, line)| {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() || fields[0] == comment {
            None
        } else {
            Some((i + 1, fields))
        }
    })
}

/// Parses a PACE `.gr` file: `p tw n m`, then `m` lines `u v` (1-indexed).
pub fn parse_gr(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text, "c");
    let (no, header) = lines.next().ok_or_else(|| parse_err(0, "missing `p tw n m` header"))?;
    if header.len() != 4 || header[0] != "p" || header[1] != "tw" {
        return Err(parse_err(no, "expected `p tw n m`"));
    }
    let nm = numbers(no, &header[2..])?;
    let (n, m) = (nm[0], nm[1]);
    let mut g = Graph::new(n);
    let mut seen = 0;
    for (no, fields) in lines {
        if fields.len() != 2 {
            return Err(parse_err(no, "expected an edge line `u v`"));
        }
        let uv = numbers(no, &fields)?;
        if uv.iter().any(|&x| x == 0 || x > n) {
            return Err(parse_err(no, format!("vertex out of range 1..={n}")));
        }
        if uv[0] == uv[1] {
            return Err(parse_err(no, "self-loop"));
        }
        g.add_edge(uv[0] - 1, uv[1] - 1).map_err(|e| parse_err(no, e.to_string()))?;
        seen += 1;
    }
    if seen != m {
        return Err(parse_err(0, format!("header announces {m} edges, found {seen}")));
    }
    Ok(g)
}

pub fn write_gr(g: &Graph) -> String {
    let mut out = format!("p tw {} {}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{} {}", u + 1, v + 1);
    }
    out
}

/// Parses a PACE `.td` file: `s td bags width+1 n`, bag lines `b i v...`,
/// then tree edges `i j` (all 1-indexed).
pub fn parse_td(text: &str) -> Result<TreeDecomposition> {
    let mut lines = content_lines(text, "c");
    let (no, header) = lines.next().ok_or_else(|| parse_err(0, "missing `s td` header"))?;
    if header.len() != 5 || header[0] != "s" || header[1] != "td" {
        return Err(parse_err(no, "expected `s td bags width+1 n`"));
    }
    let h = numbers(no, &header[2..])?;
    let (count, max_bag, n) = (h[0], h[1], h[2]);
    let mut bags: Vec<Option<Vec<usize>>> = vec![None; count];
    let mut edges = Vec::new();
    for (no, fields) in lines {
        if fields[0] == "b" {
            let vals = numbers(no, &fields[1..])?;
            let (&id, verts) = vals.split_first().ok_or_else(|| parse_err(no, "bag line without index"))?;
            if id == 0 || id > count {
                return Err(parse_err(no, format!("bag index {id} out of range")));
            }
            if bags[id - 1].is_some() {
                return Err(parse_err(no, format!("bag {id} defined twice")));
            }
            if verts.iter().any(|&v| v == 0 || v > n) {
                return Err(parse_err(no, format!("bag vertex out of range 1..={n}")));
            }
            if verts.len() > max_bag {
                return Err(parse_err(no, format!("bag larger than announced size {max_bag}")));
            }
            bags[id - 1] = Some(verts.iter().map(|v| v - 1).collect());
        } else {
            if fields.len() != 2 {
                return Err(parse_err(no, "expected a tree edge `i j`"));
            }
            let ij = numbers(no, &fields)?;
            if ij.iter().any(|&x| x == 0 || x > count) {
                return Err(parse_err(no, "tree edge endpoint out of range"));
            }
            edges.push((ij[0] - 1, ij[1] - 1));
        }
    }
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| parse_err(0, format!("bag {} missing", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    Ok(TreeDecomposition::new(bags, edges))
}

pub fn write_td(td: &TreeDecomposition, n: usize) -> String {
    let max_bag = td.bags().iter().map(Vec::len).max().unwrap_or(0);
    let mut out = format!("s td {} {} {}\n", td.node_count(), max_bag, n);
    for (i, bag) in td.bags().iter().enumerate() {
        let _ = write!(out, "b {}", i + 1);
        for v in bag {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
    }
    for &(a, b) in td.tree_edges() {
        let _ = writeln!(out, "{} {}", a + 1, b + 1);
    }
    out
}

/// Parses `vertexId labelIndex` lines (vertex ids 1-indexed as in `.gr`,
/// labels 0-indexed). Every vertex must be listed exactly once.
pub fn parse_coloring(text: &str, n: usize, h: usize) -> Result<Coloring> {
    let mut labels: Vec<Option<Label>> = vec![None; n];
    for (no, fields) in content_lines(text, "c") {
        if fields.len() != 2 {
            return Err(parse_err(no, "expected `vertexId labelIndex`"));
        }
        let vl = numbers(no, &fields)?;
        let (v, l) = (vl[0], vl[1]);
        if v == 0 || v > n {
            return Err(parse_err(no, format!("vertex out of range 1..={n}")));
        }
        if l >= h {
            return Err(parse_err(no, format!("label {l} out of range for a pattern on {h} vertices")));
        }
        if labels[v - 1].replace(l as Label).is_some() {
            return Err(parse_err(no, format!("vertex {v} colored twice")));
        }
    }
    let labels = labels
        .into_iter()
        .enumerate()
        .map(|(v, l)| l.ok_or_else(|| Error::Coloring(format!("vertex {} has no label", v + 1))))
        .collect::<Result<Vec<_>>>()?;
    Coloring::new(labels, h)
}

pub fn write_coloring(c: &Coloring) -> String {
    let mut out = String::new();
    for (v, l) in c.labels().iter().enumerate() {
        let _ = writeln!(out, "{} {}", v + 1, l);
    }
    out
}

/// Parses DIMACS CNF (`p cnf vars clauses`, zero-terminated clauses).
pub fn parse_dimacs(text: &str) -> Result<Formula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    for (no, fields) in content_lines(text, "c") {
        if fields[0] == "p" {
            if header.is_some() || fields.len() != 4 || fields[1] != "cnf" {
                return Err(parse_err(no, "expected a single `p cnf vars clauses` header"));
            }
            let vc = numbers(no, &fields[2..])?;
            header = Some((vc[0], vc[1]));
            continue;
        }
        if fields[0] == "%" {
            break;
        }
        let (vars, _) = header.ok_or_else(|| parse_err(no, "clause before header"))?;
        for f in fields {
            let lit: i32 = f.parse().map_err(|_| parse_err(no, format!("bad literal `{f}`")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                if lit.unsigned_abs() as usize > vars {
                    return Err(parse_err(no, format!("literal {lit} exceeds {vars} variables")));
                }
                current.push(lit);
            }
        }
    }
    let (vars, count) = header.ok_or_else(|| parse_err(0, "missing `p cnf` header"))?;
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != count {
        return Err(parse_err(0, format!("header announces {count} clauses, found {}", clauses.len())));
    }
    Ok(Formula::new(vars, clauses))
}

pub fn write_dimacs(f: &Formula) -> String {
    let mut out = format!("p cnf {} {}\n", f.variable_count(), f.clauses().len());
    for clause in f.clauses() {
        for lit in clause {
            let _ = write!(out, "{lit} ");
        }
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gr_round_trip() {
        let text = "c a path\np tw 3 2\n1 2\nc mid\n2 3\n";
        let g = parse_gr(text).unwrap();
        assert_eq!(g, Graph::path(3));
        assert_eq!(parse_gr(&write_gr(&g)).unwrap(), g);
    }

    #[test]
    fn gr_errors_carry_line_numbers() {
        assert!(matches!(parse_gr("p tw 2 1\n1 3\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_gr("p tw 2 1\n1 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_gr("p tw 2 2\n1 2\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_gr("p td 2 2\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn td_round_trip() {
        let text = "s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n";
        let td = parse_td(text).unwrap();
        assert_eq!(td.bags(), &[vec![0, 1], vec![1, 2]]);
        assert!(td.validate(&Graph::path(3)).is_valid());
        assert_eq!(parse_td(&write_td(&td, 3)).unwrap(), td);
    }

    #[test]
    fn coloring_requires_every_vertex() {
        let c = parse_coloring("1 0\n2 1\n", 2, 2).unwrap();
        assert_eq!(c.labels(), &[0, 1]);
        assert!(parse_coloring("1 0\n", 2, 2).is_err());
        assert!(parse_coloring("1 0\n2 2\n", 2, 2).is_err());
    }

    #[test]
    fn dimacs_round_trip() {
        let f = parse_dimacs("c x\np cnf 2 3\n1 2 0\n-1 -2 0\n1 -2 0\n").unwrap();
        assert_eq!(f.clauses(), &[vec![1, 2], vec![-1, -2], vec![1, -2]]);
        assert_eq!(parse_dimacs(&write_dimacs(&f)).unwrap(), f);
    }
}
