use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use isdel::engine::{self, Engine, SolveOptions};
use isdel::reductions::{self, Construction, DeletionInstance, VcKind, VerifyOptions};
use isdel::{io, oracle, Coloring, Error, Graph, Pattern, TreeDecomposition};

const EXIT_OTHER: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_INVALID_TD: u8 = 3;
const EXIT_CAP: u8 = 4;
const EXIT_VERIFY: u8 = 5;

#[derive(Parser, Debug)]
#[command(name = "isdel", version, about = "Hit every induced copy of a small pattern graph")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print a single JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every random choice.
    #[arg(long, global = true, value_name = "INT", default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_name = "INT", default_value_t = 1)]
    threads: usize,
    /// Also write a run manifest (inputs with hashes, result, timing) here.
    #[arg(long, global = true, value_name = "FILE")]
    manifest: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimum deletion set with the chosen (or automatic) engine.
    Solve(SolveArgs),
    /// Decomposition-free exact solver for small graphs.
    Oracle(OracleArgs),
    /// Generate an instance from a clean formula or a cubic graph.
    Reduce(ReduceArgs),
    /// Generate an instance and check it against the source problem.
    Verify(VerifyArgs),
    /// Check a tree decomposition against a graph.
    ValidateTd(TdArgs),
    /// Convert a tree decomposition into a nice one.
    Niceify(TdArgs),
    /// Sample a G(n, p) graph.
    GenRandom(GenArgs),
}

#[derive(Args, Debug)]
struct PatternArgs {
    /// Pattern name such as K3, I4, P3, C4, K2,2, K4-e, Kvx:3:1 or K3+I1.
    #[arg(long, value_name = "SPEC", conflicts_with = "pattern_file", required_unless_present = "pattern_file")]
    pattern: Option<String>,
    /// Pattern as a `.gr` file; vertex i gets label i-1.
    #[arg(long, value_name = "FILE")]
    pattern_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long, value_name = "FILE")]
    graph: PathBuf,
    #[command(flatten)]
    pattern: PatternArgs,
    /// Tree decomposition (`.td`); a min-fill one is computed when absent.
    #[arg(long, value_name = "FILE")]
    td: Option<PathBuf>,
    /// Coloring file with `vertexId labelIndex` lines.
    #[arg(long, value_name = "FILE")]
    coloring: Option<PathBuf>,
    /// folio, clique, independent, matching or oracle.
    #[arg(long)]
    engine: Option<String>,
    #[arg(long)]
    no_witness: bool,
    /// Vertex limit for the oracle engine (0 disables it).
    #[arg(long, value_name = "INT", default_value_t = oracle::SOFT_LIMIT)]
    oracle_limit: usize,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long, value_name = "FILE")]
    graph: PathBuf,
    #[command(flatten)]
    pattern: PatternArgs,
    #[arg(long, value_name = "FILE")]
    coloring: Option<PathBuf>,
    /// Vertex limit (0 disables it).
    #[arg(long, value_name = "INT", default_value_t = oracle::SOFT_LIMIT)]
    limit: usize,
}

#[derive(Args, Debug)]
struct SourceArgs {
    /// k-e, kh+i2, kvx, khh, colorful, vc-k3, vc-i3 or vc-k2k1.
    #[arg(long)]
    construction: String,
    /// DIMACS CNF input for the formula-based constructions.
    #[arg(long, value_name = "FILE")]
    formula: Option<PathBuf>,
    /// Graph of maximum degree 3 for the vertex cover constructions.
    #[arg(long, value_name = "FILE")]
    graph: Option<PathBuf>,
    #[arg(long, value_name = "INT")]
    h: Option<usize>,
    #[arg(long, value_name = "INT")]
    x: Option<usize>,
    /// Pattern for the colorful construction.
    #[arg(long, value_name = "SPEC")]
    pattern: Option<String>,
}

#[derive(Args, Debug)]
struct ReduceArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Output prefix: writes PREFIX.gr, PREFIX.td, PREFIX.json and PREFIX.coloring when colored.
    #[arg(long, value_name = "PREFIX")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, value_name = "INT", default_value_t = VerifyOptions::default().max_vertices)]
    max_vertices: usize,
}

#[derive(Args, Debug)]
struct TdArgs {
    #[arg(long, value_name = "FILE")]
    graph: PathBuf,
    #[arg(long, value_name = "FILE")]
    td: PathBuf,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_name = "INT")]
    n: usize,
    #[arg(long, value_name = "FLOAT")]
    p: f64,
    /// Write here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

/// A failure with its exit status; `report` is printed before exiting.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
    report: Option<Value>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse { .. }
            | Error::Pattern(_)
            | Error::Coloring(_)
            | Error::Io(_)
            | Error::NotClean(_)
            | Error::VertexOutOfRange { .. }
            | Error::SelfLoop(_) => EXIT_PARSE,
            Error::InvalidDecomposition(_) => EXIT_INVALID_TD,
            Error::PatternTooLarge { .. } | Error::OracleLimit { .. } => EXIT_CAP,
            _ => EXIT_OTHER,
        };
        Failure { code, message: e.to_string(), report: None }
    }
}

type CmdResult = Result<Outcome, Failure>;

/// What a successful command prints and records.
struct Outcome {
    json: Value,
    text: String,
    engine: Option<String>,
    /// Exit status for completed commands whose checks failed.
    code: u8,
}

impl Outcome {
    fn ok(json: Value, text: String) -> Self {
        Outcome { json, text, engine: None, code: 0 }
    }
}

/// Inputs read during a run, for the manifest.
#[derive(Default)]
struct Inputs(Vec<(PathBuf, String)>);

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<String, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure {
            code: EXIT_PARSE,
            message: format!("{}: {e}", path.display()),
            report: None,
        })?;
        self.0.push((path.to_path_buf(), hex::encode(Sha256::digest(text.as_bytes()))));
        Ok(text)
    }
}

#[derive(Serialize)]
struct RunManifest<'a> {
    command: &'a str,
    args: Vec<String>,
    inputs: Vec<Value>,
    engine: Option<&'a str>,
    seed: u64,
    threads: usize,
    result: &'a Value,
    exit_code: u8,
    wall_time_ms: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut inputs = Inputs::default();
    let result = run(&cli, &mut inputs);
    let (code, value) = match result {
        Ok(out) => {
            if cli.json {
                println!("{}", out.json);
            } else {
                print!("{}", out.text);
            }
            (out.code, (out.json, out.engine))
        }
        Err(f) => {
            let value = json!({ "error": f.message, "exit_code": f.code, "report": f.report });
            if cli.json {
                println!("{value}");
            } else {
                eprintln!("error: {}", f.message);
                if let Some(r) = &f.report {
                    eprintln!("{}", serde_json::to_string_pretty(r).unwrap_or_default());
                }
            }
            (f.code, (value, None))
        }
    };
    if let Some(path) = &cli.manifest {
        let manifest = RunManifest {
            command: command_name(&cli.command),
            args: std::env::args().skip(1).collect(),
            inputs: inputs.0.iter().map(|(p, h)| json!({ "path": p, "sha256": h })).collect(),
            engine: value.1.as_deref(),
            seed: cli.seed,
            threads: cli.threads,
            result: &value.0,
            exit_code: code,
            wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        };
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
        if let Err(e) = std::fs::write(path, text) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(EXIT_PARSE);
        }
    }
    ExitCode::from(code)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Solve(_) => "solve",
        Command::Oracle(_) => "oracle",
        Command::Reduce(_) => "reduce",
        Command::Verify(_) => "verify",
        Command::ValidateTd(_) => "validate-td",
        Command::Niceify(_) => "niceify",
        Command::GenRandom(_) => "gen-random",
    }
}

fn run(cli: &Cli, inputs: &mut Inputs) -> CmdResult {
    match &cli.command {
        Command::Solve(a) => solve(cli, a, inputs),
        Command::Oracle(a) => run_oracle(a, inputs),
        Command::Reduce(a) => reduce(a, inputs),
        Command::Verify(a) => verify(a, inputs),
        Command::ValidateTd(a) => validate_td(a, inputs),
        Command::Niceify(a) => niceify(a, inputs),
        Command::GenRandom(a) => gen_random(cli, a),
    }
}

fn load_pattern(p: &PatternArgs, inputs: &mut Inputs) -> Result<Pattern, Failure> {
    match (&p.pattern, &p.pattern_file) {
        (Some(spec), _) => Ok(Pattern::parse(spec)?),
        (None, Some(path)) => {
            let g = io::parse_gr(&inputs.read(path)?)?;
            let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            Ok(Pattern::with_name(g, name)?)
        }
        (None, None) => unreachable!("clap requires one of them"),
    }
}

fn load_coloring(path: Option<&Path>, g: &Graph, h: usize, inputs: &mut Inputs) -> Result<Option<Coloring>, Failure> {
    path.map(|p| Ok(io::parse_coloring(&inputs.read(p)?, g.vertex_count(), h)?)).transpose()
}

fn one_based(vs: &[usize]) -> Vec<usize> {
    vs.iter().map(|v| v + 1).collect()
}

fn join(vs: &[usize]) -> String {
    vs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn solve(cli: &Cli, a: &SolveArgs, inputs: &mut Inputs) -> CmdResult {
    let g = io::parse_gr(&inputs.read(&a.graph)?)?;
    let pattern = load_pattern(&a.pattern, inputs)?;
    let td = a.td.as_deref().map(|p| Ok::<_, Failure>(io::parse_td(&inputs.read(p)?)?)).transpose()?;
    let coloring = load_coloring(a.coloring.as_deref(), &g, pattern.size(), inputs)?;
    let engine = a.engine.as_deref().map(str::parse::<Engine>).transpose()?;
    let opts = SolveOptions {
        engine,
        witness: !a.no_witness,
        threads: cli.threads,
        oracle_limit: (a.oracle_limit > 0).then_some(a.oracle_limit),
    };
    let mut report = engine::solve(&g, td.as_ref(), &pattern, coloring.as_ref(), &opts)?;
    report.witness = report.witness.map(|w| one_based(&w));
    let mut text = format!("opt {}\n", report.opt);
    if let Some(w) = &report.witness {
        text += &format!("witness {}\n", join(w));
    }
    text += &format!(
        "engine {} width {} nodes {} peak-states {} time-ms {:.3}\n",
        report.engine, report.width_used, report.node_count, report.peak_state_count, report.wall_time_ms
    );
    let json = serde_json::to_value(&report).expect("report serializes");
    Ok(Outcome { json, text, engine: Some(report.engine.to_string()), code: 0 })
}

fn run_oracle(a: &OracleArgs, inputs: &mut Inputs) -> CmdResult {
    let g = io::parse_gr(&inputs.read(&a.graph)?)?;
    let pattern = load_pattern(&a.pattern, inputs)?;
    let coloring = load_coloring(a.coloring.as_deref(), &g, pattern.size(), inputs)?;
    let mut sol = oracle::solve_with_limit(&g, &pattern, coloring.as_ref(), (a.limit > 0).then_some(a.limit))?;
    sol.witness = one_based(&sol.witness);
    let text = format!(
        "opt {}\nwitness {}\noccurrences {}\n",
        sol.opt,
        join(&sol.witness),
        sol.occurrence_count
    );
    let mut out = Outcome::ok(serde_json::to_value(&sol).expect("solution serializes"), text);
    out.engine = Some("oracle".into());
    Ok(out)
}

enum Source {
    Formula(reductions::Formula),
    Cover(Graph),
}

fn build(s: &SourceArgs, inputs: &mut Inputs) -> Result<(DeletionInstance, Source), Failure> {
    let construction: Construction = s.construction.parse()?;
    let need_h = || {
        s.h.ok_or_else(|| Failure {
            code: EXIT_PARSE,
            message: format!("construction {construction} needs --h"),
            report: None,
        })
    };
    if construction.is_vertex_cover() {
        let path = s.graph.as_deref().ok_or_else(|| Failure {
            code: EXIT_PARSE,
            message: format!("construction {construction} needs --graph"),
            report: None,
        })?;
        let g = io::parse_gr(&inputs.read(path)?)?;
        let kind = match construction {
            Construction::VcK3 => VcKind::K3,
            Construction::VcI3 => VcKind::I3,
            _ => VcKind::K2K1,
        };
        return Ok((reductions::reduce_vc_colorful(&g, kind)?, Source::Cover(g)));
    }
    let path = s.formula.as_deref().ok_or_else(|| Failure {
        code: EXIT_PARSE,
        message: format!("construction {construction} needs --formula"),
        report: None,
    })?;
    let phi = io::parse_dimacs(&inputs.read(path)?)?;
    let violations = phi.validate_clean();
    if !violations.is_empty() {
        return Err(Failure {
            code: EXIT_PARSE,
            message: format!("formula is not clean ({} violations)", violations.len()),
            report: Some(serde_json::to_value(&violations).expect("violations serialize")),
        });
    }
    let inst = match construction {
        Construction::KMinusE => reductions::reduce_k_minus_e(&phi, need_h()?)?,
        Construction::KhI2 => reductions::reduce_kh_i2(&phi, need_h()?)?,
        Construction::Kvx => reductions::reduce_kvx(&phi, need_h()?, s.x.unwrap_or(0))?,
        Construction::Khh => reductions::reduce_khh(&phi, need_h()?)?,
        Construction::Colorful => {
            let spec = s.pattern.as_deref().ok_or_else(|| Failure {
                code: EXIT_PARSE,
                message: "the colorful construction needs --pattern".into(),
                report: None,
            })?;
            reductions::reduce_colorful(&phi, &Pattern::parse(spec)?)?
        }
        _ => unreachable!("vertex cover constructions handled above"),
    };
    Ok((inst, Source::Formula(phi)))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure {
        code: EXIT_OTHER,
        message: format!("{}: {e}", path.display()),
        report: None,
    })
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn reduce(a: &ReduceArgs, inputs: &mut Inputs) -> CmdResult {
    let (inst, _) = build(&a.source, inputs)?;
    let n = inst.graph.vertex_count();
    write(&with_ext(&a.out, "gr"), &io::write_gr(&inst.graph))?;
    write(&with_ext(&a.out, "td"), &io::write_td(&inst.hint, n))?;
    if let Some(c) = &inst.coloring {
        write(&with_ext(&a.out, "coloring"), &io::write_coloring(c))?;
    }
    let manifest = serde_json::to_value(inst.manifest()).expect("manifest serializes");
    write(&with_ext(&a.out, "json"), &(manifest.to_string() + "\n"))?;
    let text = format!(
        "construction {} pattern {} vertices {} edges {} budget {} hint-width {}\n",
        inst.construction,
        inst.pattern.name(),
        n,
        inst.graph.edge_count(),
        inst.budget,
        inst.hint.width()
    );
    Ok(Outcome::ok(manifest, text))
}

fn verify(a: &VerifyArgs, inputs: &mut Inputs) -> CmdResult {
    let (inst, source) = match build(&a.source, inputs) {
        Ok(x) => x,
        Err(mut f) if f.report.is_some() => {
            // a formula failing clean validation is a failed check
            f.code = EXIT_VERIFY;
            return Err(f);
        }
        Err(f) => return Err(f),
    };
    let opts = VerifyOptions { max_vertices: a.max_vertices, ..VerifyOptions::default() };
    let report = match &source {
        Source::Formula(phi) => reductions::verify_reduction(&inst, phi, &opts)?,
        Source::Cover(g) => reductions::verify_vc(&inst, g, &opts)?,
    };
    let json = serde_json::to_value(&report).expect("report serializes");
    let mut text = serde_json::to_string_pretty(&json).expect("report serializes");
    text.push('\n');
    text += if report.passed { "PASS\n" } else { "FAIL\n" };
    Ok(Outcome { json, text, engine: None, code: if report.passed { 0 } else { EXIT_VERIFY } })
}

fn validate_td(a: &TdArgs, inputs: &mut Inputs) -> CmdResult {
    let g = io::parse_gr(&inputs.read(&a.graph)?)?;
    let td = io::parse_td(&inputs.read(&a.td)?)?;
    let report = td.validate(&g);
    let valid = report.is_valid();
    let json = json!({
        "valid": valid,
        "width": td.width(),
        "bags": td.node_count(),
        "violations": report.violations,
    });
    let mut text = format!("valid {valid} width {} bags {}\n", td.width(), td.node_count());
    for v in &report.violations {
        text += &format!("violation {}\n", serde_json::to_string(v).expect("violation serializes"));
    }
    Ok(Outcome { json, text, engine: None, code: if valid { 0 } else { EXIT_INVALID_TD } })
}

fn niceify(a: &TdArgs, inputs: &mut Inputs) -> CmdResult {
    let g = io::parse_gr(&inputs.read(&a.graph)?)?;
    let td: TreeDecomposition = io::parse_td(&inputs.read(&a.td)?)?;
    let ntd = isdel::decomp::niceify(&td, &g)?;
    let nodes: Vec<Value> = ntd
        .nodes()
        .iter()
        .enumerate()
        .map(|(id, node)| {
            let (kind, vertex) = match node.kind {
                isdel::NodeKind::Leaf => ("leaf", None),
                isdel::NodeKind::Introduce(v) => ("introduce", Some(v + 1)),
                isdel::NodeKind::Forget(v) => ("forget", Some(v + 1)),
                isdel::NodeKind::Join => ("join", None),
            };
            json!({
                "id": id + 1,
                "kind": kind,
                "vertex": vertex,
                "bag": one_based(&node.bag),
                "children": node.children.iter().map(|c| c + 1).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut text = format!("nice nodes {} width {} root {}\n", ntd.node_count(), ntd.width(), ntd.root() + 1);
    for (id, node) in ntd.nodes().iter().enumerate() {
        let kind = match node.kind {
            isdel::NodeKind::Leaf => "leaf".to_string(),
            isdel::NodeKind::Introduce(v) => format!("introduce {}", v + 1),
            isdel::NodeKind::Forget(v) => format!("forget {}", v + 1),
            isdel::NodeKind::Join => "join".to_string(),
        };
        let children: Vec<usize> = node.children.iter().map(|c| c + 1).collect();
        text += &format!("{} {kind} bag [{}] children [{}]\n", id + 1, join(&one_based(&node.bag)), join(&children));
    }
    let json = json!({
        "width": ntd.width(),
        "node_count": ntd.node_count(),
        "root": ntd.root() + 1,
        "nodes": nodes,
    });
    Ok(Outcome::ok(json, text))
}

fn gen_random(cli: &Cli, a: &GenArgs) -> CmdResult {
    let g = isdel::generate::gnp_seeded(a.n, a.p, cli.seed).map_err(|e| Failure {
        code: EXIT_PARSE,
        message: e.to_string(),
        report: None,
    })?;
    let text = io::write_gr(&g);
    if let Some(path) = &a.out {
        write(path, &text)?;
    }
    let json = json!({ "n": g.vertex_count(), "m": g.edge_count(), "seed": cli.seed, "p": a.p });
    let shown = if a.out.is_some() { String::new() } else { text };
    Ok(Outcome::ok(json, shown))
}
