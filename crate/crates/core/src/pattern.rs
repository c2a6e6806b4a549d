//! Fixed pattern graphs with labeled vertices, label subsets and colorings.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, Vertex};
use crate::{Error, Result};

/// Largest supported pattern; keeps every label subset inside a machine word.
pub const MAX_PATTERN_SIZE: usize = 8;

pub type Label = u8;

/// A subset of pattern labels as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LabelSet(pub u16);

impl LabelSet {
    pub const EMPTY: LabelSet = LabelSet(0);

    #[inline]
    pub fn full(h: usize) -> Self {
        LabelSet(((1u32 << h) - 1) as u16)
    }

    #[inline]
    pub fn single(label: Label) -> Self {
        LabelSet(1 << label)
    }

    #[inline]
    pub fn contains(self, label: Label) -> bool {
        self.0 >> label & 1 == 1
    }

    #[inline]
    pub fn with(self, label: Label) -> Self {
        LabelSet(self.0 | 1 << label)
    }

    #[inline]
    pub fn without(self, label: Label) -> Self {
        LabelSet(self.0 & !(1 << label))
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn union(self, other: LabelSet) -> Self {
        LabelSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: LabelSet) -> Self {
        LabelSet(self.0 & other.0)
    }

    #[inline]
    pub fn minus(self, other: LabelSet) -> Self {
        LabelSet(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset(self, other: LabelSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Labels in increasing order.
    pub fn iter(self) -> impl Iterator<Item = Label> {
        let bits = self.0;
        (0..16u8).filter(move |&l| bits >> l & 1 == 1)
    }

    /// Position of `label` among the members of this set (rank in increasing order).
    #[inline]
    pub fn rank(self, label: Label) -> usize {
        (self.0 & ((1u16 << label) - 1)).count_ones() as usize
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// The fixed graph `H` whose induced occurrences must be hit.
/// Vertices are the labels `0..h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    graph: Graph,
    adjacency: Vec<LabelSet>,
    name: String,
}

impl Pattern {
    pub fn new(graph: Graph) -> Result<Self> {
        Self::with_name(graph, String::new())
    }

    pub fn with_name(graph: Graph, name: impl Into<String>) -> Result<Self> {
        let h = graph.vertex_count();
        if h == 0 {
            return Err(Error::Pattern("pattern must have at least one vertex".into()));
        }
        if h > MAX_PATTERN_SIZE {
            return Err(Error::PatternTooLarge { h, max: MAX_PATTERN_SIZE });
        }
        let adjacency = graph
            .vertices()
            .map(|a| {
                let mut s = LabelSet::EMPTY;
                for b in graph.neighbors(a) {
                    s = s.with(b as Label);
                }
                s
            })
            .collect();
        Ok(Pattern { graph, adjacency, name: name.into() })
    }

    /// Builds one of the named pattern families.
    ///
    /// | name    | params   | graph                                            |
    /// |---------|----------|--------------------------------------------------|
    /// | `K`     | `h`      | clique                                           |
    /// | `I`     | `h`      | independent set                                  |
    /// | `P`     | `h`      | path `0-1-…-(h-1)`                               |
    /// | `C`     | `h`      | cycle                                            |
    /// | `Kab`   | `a, b`   | complete bipartite, parts `0..a` and `a..a+b`    |
    /// | `K-e`   | `h`      | clique minus the edge between the two top labels |
    /// | `Kvx`   | `h, x`   | `K_{h+1}` plus label `h+1` adjacent to `0..x`    |
    /// | `K+I`   | `h, l`   | `K_h` plus `l` isolated labels                   |
    pub fn named(name: &str, params: &[usize]) -> Result<Self> {
        let arity = |k: usize| -> Result<()> {
            if params.len() == k {
                Ok(())
            } else {
                Err(Error::Pattern(format!(
                    "pattern {name} takes {k} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        let graph = match name {
            "K" => {
                arity(1)?;
                Graph::complete(params[0])
            }
            "I" => {
                arity(1)?;
                Graph::new(params[0])
            }
            "P" => {
                arity(1)?;
                Graph::path(params[0])
            }
            "C" => {
                arity(1)?;
                if params[0] < 3 {
                    return Err(Error::Pattern("cycles need at least 3 vertices".into()));
                }
                Graph::cycle(params[0])
            }
            "Kab" => {
                arity(2)?;
                let (a, b) = (params[0], params[1]);
                if a == 0 || b == 0 {
                    return Err(Error::Pattern("K_{a,b} needs a, b >= 1".into()));
                }
                let mut g = Graph::new(a + b);
                for u in 0..a {
                    for v in a..a + b {
                        g.insert(u, v);
                    }
                }
                g
            }
            "K-e" => {
                arity(1)?;
                let h = params[0];
                if h < 2 {
                    return Err(Error::Pattern("K_h - e needs h >= 2".into()));
                }
                let mut g = Graph::complete(h);
                g.remove_edge(h - 2, h - 1);
                g
            }
            "Kvx" => {
                arity(2)?;
                let (h, x) = (params[0], params[1]);
                if h == 0 {
                    return Err(Error::Pattern("K_{h+1} + v_x needs h >= 1".into()));
                }
                if x + 1 > h {
                    return Err(Error::Pattern(format!(
                        "K_{{h+1}} + v_x needs x <= h - 1 (h = {h}, x = {x})"
                    )));
                }
                let mut g = Graph::complete(h + 1);
                let extra = g.add_vertices(1);
                for c in 0..x {
                    g.insert(c, extra);
                }
                g
            }
            "K+I" => {
                arity(2)?;
                Graph::complete(params[0]).disjoint_union(&Graph::new(params[1]))
            }
            other => return Err(Error::Pattern(format!("unknown pattern name {other:?}"))),
        };
        let label = match name {
            "Kab" => format!("K{},{}", params[0], params[1]),
            "K-e" => format!("K{}-e", params[0]),
            "Kvx" => format!("Kvx:{}:{}", params[0], params[1]),
            "K+I" => format!("K{}+I{}", params[0], params[1]),
            _ => format!("{name}{}", params[0]),
        };
        Pattern::with_name(graph, label)
    }

    /// Parses a pattern string such as `K3`, `I4`, `P3`, `C4`, `K2,2`, `K4-e`,
    /// `Kvx:3:1`, or a disjoint union of those joined by `+` (`K3+I1`, `2K2`).
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let mut graph: Option<Graph> = None;
        for term in spec.split('+') {
            let term = term.trim();
            let digits = term.chars().take_while(char::is_ascii_digit).count();
            let (copies, body) = if digits > 0 {
                (parse_num(&term[..digits], spec)?, &term[digits..])
            } else {
                (1, term)
            };
            let part = parse_term(body, spec)?;
            for _ in 0..copies {
                graph = Some(match graph {
                    None => part.graph.clone(),
                    Some(g) => g.disjoint_union(&part.graph),
                });
            }
        }
        let graph = graph.ok_or_else(|| Error::Pattern(format!("empty pattern {spec:?}")))?;
        Pattern::with_name(graph, spec)
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn all(&self) -> LabelSet {
        LabelSet::full(self.size())
    }

    #[inline]
    pub fn adjacent(&self, a: Label, b: Label) -> bool {
        self.adjacency[a as usize].contains(b)
    }

    /// Labels adjacent to `a`.
    #[inline]
    pub fn neighbors(&self, a: Label) -> LabelSet {
        self.adjacency[a as usize]
    }

    pub fn is_clique(&self) -> bool {
        let h = self.size();
        self.graph.edge_count() == h * (h - 1) / 2
    }

    pub fn is_edgeless(&self) -> bool {
        self.graph.edge_count() == 0
    }

    /// Connected components as label lists.
    pub fn components(&self) -> Vec<Vec<Label>> {
        self.graph
            .components(None)
            .into_iter()
            .map(|c| c.into_iter().map(|v| v as Label).collect())
            .collect()
    }

    /// The complement pattern on the same labels.
    pub fn complement(&self) -> Pattern {
        Pattern::with_name(self.graph.complement(), format!("co-{}", self.name))
            .expect("complement keeps the size")
    }
}

fn parse_num(s: &str, whole: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::Pattern(format!("bad number {s:?} in pattern {whole:?}")))
}

fn parse_term(term: &str, whole: &str) -> Result<Pattern> {
    if let Some(rest) = term.strip_prefix("Kvx:") {
        let nums: Vec<&str> = rest.split(':').collect();
        if nums.len() != 2 {
            return Err(Error::Pattern(format!("expected Kvx:h:x in {whole:?}")));
        }
        return Pattern::named("Kvx", &[parse_num(nums[0], whole)?, parse_num(nums[1], whole)?]);
    }
    let mut chars = term.chars();
    let head = chars
        .next()
        .ok_or_else(|| Error::Pattern(format!("empty term in pattern {whole:?}")))?;
    let rest = chars.as_str();
    match head {
        'K' => {
            if let Some((a, b)) = rest.split_once(',') {
                Pattern::named("Kab", &[parse_num(a, whole)?, parse_num(b, whole)?])
            } else if let Some(h) = rest.strip_suffix("-e") {
                Pattern::named("K-e", &[parse_num(h, whole)?])
            } else {
                Pattern::named("K", &[parse_num(rest, whole)?])
            }
        }
        'I' => Pattern::named("I", &[parse_num(rest, whole)?]),
        'P' => Pattern::named("P", &[parse_num(rest, whole)?]),
        'C' => Pattern::named("C", &[parse_num(rest, whole)?]),
        _ => Err(Error::Pattern(format!("cannot parse term {term:?} in {whole:?}"))),
    }
}

/// An `H`-coloring: every graph vertex carries one pattern label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    labels: Vec<Label>,
}

impl Coloring {
    pub fn new(labels: Vec<Label>, pattern_size: usize) -> Result<Self> {
        if let Some((v, &l)) = labels
            .iter()
            .enumerate()
            .find(|(_, &l)| l as usize >= pattern_size)
        {
            return Err(Error::Coloring(format!(
                "vertex {v} has label {l}, pattern has {pattern_size} labels"
            )));
        }
        Ok(Coloring { labels })
    }

    /// Checks that the coloring covers exactly the vertices of `g`.
    pub fn check_graph(&self, g: &Graph) -> Result<()> {
        if self.labels.len() != g.vertex_count() {
            return Err(Error::Coloring(format!(
                "coloring has {} entries for {} vertices",
                self.labels.len(),
                g.vertex_count()
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn label(&self, v: Vertex) -> Label {
        self.labels[v]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Vertices colored `label`, increasing.
    pub fn class(&self, label: Label) -> Vec<Vertex> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == label)
            .map(|(v, _)| v)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_examples() {
        let k3 = Pattern::named("K", &[3]).unwrap();
        assert_eq!(k3.size(), 3);
        assert_eq!(k3.graph().edge_count(), 3);

        let k4e = Pattern::named("K-e", &[4]).unwrap();
        assert_eq!(k4e.graph().edge_count(), 5);
        assert!(!k4e.adjacent(2, 3));

        let kvx = Pattern::named("Kvx", &[3, 1]).unwrap();
        assert_eq!(kvx.size(), 5);
        assert_eq!(kvx.graph().edge_count(), 7);
        assert_eq!(kvx.neighbors(4), LabelSet::single(0));
    }

    #[test]
    fn named_errors() {
        assert!(Pattern::named("Q", &[3]).is_err());
        assert!(Pattern::named("Kvx", &[3, 3]).is_err());
        assert!(matches!(
            Pattern::named("K", &[9]),
            Err(Error::PatternTooLarge { h: 9, max: 8 })
        ));
    }

    #[test]
    fn parse_strings() {
        let cases = [
            ("K3", 3, 3),
            ("I4", 4, 0),
            ("P3", 3, 2),
            ("K2,2", 4, 4),
            ("K4-e", 4, 5),
            ("Kvx:3:1", 5, 7),
            ("K3+I1", 4, 3),
            ("K2+K1", 3, 1),
            ("2K2", 4, 2),
        ];
        for (s, h, m) in cases {
            let p = Pattern::parse(s).unwrap();
            assert_eq!((p.size(), p.graph().edge_count()), (h, m), "{s}");
        }
        assert!(Pattern::parse("X3").is_err());
        assert!(Pattern::parse("K").is_err());
    }

    #[test]
    fn label_set_ops() {
        let s = LabelSet::EMPTY.with(1).with(4).with(6);
        assert_eq!(s.len(), 3);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![1, 4, 6]);
        assert_eq!(s.rank(4), 1);
        assert_eq!(s.rank(6), 2);
        assert!(LabelSet::single(4).is_subset(s));
        assert_eq!(s.without(4).minus(LabelSet::single(1)), LabelSet::single(6));
        assert_eq!(LabelSet::full(8).len(), 8);
    }

    #[test]
    fn coloring_validation() {
        assert!(Coloring::new(vec![0, 1, 2], 3).is_ok());
        assert!(Coloring::new(vec![0, 3], 3).is_err());
    }
}
