//! Picks a solver for a pattern and runs it with uniform reporting.

use std::time::Instant;

use serde::Serialize;

use crate::decomp::{heuristic_decomposition, niceify, TreeDecomposition};
use crate::folio::{self, FolioOptions};
use crate::graph::{Graph, Vertex};
use crate::oracle;
use crate::pattern::{Coloring, Pattern};
use crate::special::{solve_clique_hitting, solve_colorful_pair, solve_independent_set_hitting, PairKind};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Folio,
    Clique,
    Independent,
    Matching,
    Oracle,
}

impl Engine {
    pub const ALL: [Engine; 5] = [Engine::Folio, Engine::Clique, Engine::Independent, Engine::Matching, Engine::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Folio => "folio",
            Engine::Clique => "clique",
            Engine::Independent => "independent",
            Engine::Matching => "matching",
            Engine::Oracle => "oracle",
        }
    }
}

impl std::str::FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Engine::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown engine {s:?}")))
    }
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// The engine used when none is forced: cliques and uncolored independent
/// sets have dedicated solvers, colorful two-label cliques and independent
/// sets reduce to matching, everything else runs the folio program.
pub fn auto_engine(pattern: &Pattern, coloring: Option<&Coloring>) -> Engine {
    if pattern.is_clique() {
        if pattern.size() == 2 && coloring.is_some() {
            Engine::Matching
        } else {
            Engine::Clique
        }
    } else if pattern.is_edgeless() {
        if coloring.is_none() {
            Engine::Independent
        } else if pattern.size() == 2 {
            Engine::Matching
        } else {
            Engine::Folio
        }
    } else {
        Engine::Folio
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub engine: Option<Engine>,
    pub witness: bool,
    pub threads: usize,
    /// Size guard for the oracle engine; `None` disables it.
    pub oracle_limit: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { engine: None, witness: true, threads: 1, oracle_limit: Some(oracle::SOFT_LIMIT) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub opt: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Vertex>>,
    pub engine: Engine,
    /// Width of the decomposition the engine ran on (0 for the oracle and matching).
    pub width_used: usize,
    pub node_count: usize,
    pub peak_state_count: usize,
    pub wall_time_ms: f64,
}

/// Solves with the chosen (or automatic) engine. Without `td` a min-fill
/// decomposition is computed for the engines that need one.
pub fn solve(
    g: &Graph,
    td: Option<&TreeDecomposition>,
    pattern: &Pattern,
    coloring: Option<&Coloring>,
    options: &SolveOptions,
) -> Result<SolveReport> {
    let start = Instant::now();
    if let Some(c) = coloring {
        c.check_graph(g)?;
    }
    let engine = options.engine.unwrap_or_else(|| auto_engine(pattern, coloring));
    let decomposition = || -> Result<TreeDecomposition> {
        match td {
            Some(td) => {
                let report = td.validate(g);
                if !report.is_valid() {
                    return Err(Error::InvalidDecomposition(format!("{:?}", report.violations)));
                }
                Ok(td.clone())
            }
            None => Ok(heuristic_decomposition(g)),
        }
    };
    let mut report = SolveReport {
        opt: 0,
        witness: None,
        engine,
        width_used: 0,
        node_count: 0,
        peak_state_count: 0,
        wall_time_ms: 0.0,
    };
    match engine {
        Engine::Folio => {
            let ntd = niceify(&decomposition()?, g)?;
            let out = folio::solve(
                g,
                &ntd,
                pattern,
                coloring,
                FolioOptions { witness: options.witness, keep_tables: false, threads: options.threads.max(1) },
            )?;
            report.opt = out.opt;
            report.witness = out.witness;
            report.width_used = ntd.width();
            report.node_count = out.stats.node_count;
            report.peak_state_count = out.stats.peak_state_count;
        }
        Engine::Clique => {
            if !pattern.is_clique() {
                return Err(Error::Unsupported(format!("the clique engine needs a clique pattern, got {}", pattern.name())));
            }
            let ntd = niceify(&decomposition()?, g)?;
            report.opt = solve_clique_hitting(g, &ntd, pattern.size(), coloring)?;
            report.width_used = ntd.width();
            report.node_count = ntd.node_count();
        }
        Engine::Independent => {
            if !pattern.is_edgeless() || coloring.is_some() {
                return Err(Error::Unsupported(
                    "the independent-set engine needs an uncolored edgeless pattern".into(),
                ));
            }
            let td = decomposition()?;
            report.opt = solve_independent_set_hitting(g, &td, pattern.size())?;
            report.width_used = td.width();
            report.node_count = td.node_count();
        }
        Engine::Matching => {
            let kind = match (pattern.size(), pattern.is_clique(), coloring) {
                (2, true, Some(_)) => PairKind::K2,
                (2, false, Some(_)) => PairKind::I2,
                _ => {
                    return Err(Error::Unsupported(
                        "the matching engine needs a colorful two-label pattern".into(),
                    ))
                }
            };
            let (opt, witness) = solve_colorful_pair(g, coloring.expect("matched above"), kind)?;
            report.opt = opt;
            report.witness = options.witness.then_some(witness);
        }
        Engine::Oracle => {
            let sol = oracle::solve_with_limit(g, pattern, coloring, options.oracle_limit)?;
            report.opt = sol.opt;
            report.witness = options.witness.then_some(sol.witness);
        }
    }
    report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}
