//! Exact solvers for hitting every induced copy of a fixed pattern graph `H`
//! (optionally color-constrained) in a graph of bounded treewidth.
//!
//! The crate bundles
//! * a dynamic program over nice tree decompositions whose states are rooted
//!   folios ([`folio`]),
//! * single-exponential and polynomial solvers for cliques, independent sets
//!   and two-label colorful patterns ([`special`]),
//! * a decomposition-free brute-force reference ([`oracle`]),
//! * generators for the lower-bound instance families together with an
//!   empirical verifier ([`reductions`]).

pub mod decomp;
pub mod embed;
pub mod engine;
pub mod folio;
pub mod generate;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod pattern;
pub mod reductions;
pub mod special;

pub use decomp::{NiceTreeDecomposition, NodeKind, TreeDecomposition};
pub use embed::{enumerate_induced_embeddings, is_pattern_free, Embedding};
pub use graph::{Graph, Vertex};
pub use pattern::{Coloring, Label, LabelSet, Pattern, MAX_PATTERN_SIZE};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("pattern has {h} vertices, the configured maximum is {max}")]
    PatternTooLarge { h: usize, max: usize },
    #[error("pattern: {0}")]
    Pattern(String),
    #[error("coloring: {0}")]
    Coloring(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("instance too large for the oracle: {n} vertices (limit {limit})")]
    OracleLimit { n: usize, limit: usize },
    #[error("graph is not chordal")]
    NotChordal,
    #[error("graph contains an independent set of size {0}")]
    ContainsIndependentSet(usize),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("formula is not clean: {0}")]
    NotClean(String),
    #[error("{0}")]
    Construction(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
