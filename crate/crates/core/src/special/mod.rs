//! Faster solvers for cliques, independent sets, `K_h + I_l` subgraphs and
//! two-label colorful patterns.

mod chordal;
mod clique;
mod independent;
mod matching;

pub use chordal::{chordal_clique_cover, is_perfect_elimination_ordering, maximum_cardinality_search, perfect_elimination_ordering};
pub use clique::{solve_clique_hitting, solve_kh_il_subgraph};
pub use independent::{has_independent_set, independence_number, solve_independent_set_hitting};
pub use matching::{solve_colorful_pair, PairKind};
