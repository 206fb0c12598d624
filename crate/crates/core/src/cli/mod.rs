//! Command-line front end.

mod parse;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::construct::{join, synthesize, Fact1Trace, SynthConfig, SynthError, SynthesisResult};
use crate::exact::IntPoly;
use crate::fexpr::{Dag, ExportFormat, MaterializedTree, NodeId};
use crate::verify::{charpoly, verify, Verdict, VerifyConfig};

pub use parse::{parse_poly, ParseError, PolySpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_DIVISIBLE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "eigentree",
    version,
    about = "Trees with a prescribed algebraic integer as an eigenvalue"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Edges,
    Dot,
    Graph6,
    Json,
}

#[derive(clap::Args, Debug, Clone)]
pub struct BuildArgs {
    /// Number of random primes for Monte Carlo verification.
    #[arg(long, default_value_t = 5)]
    pub verify_primes: usize,
    /// Largest tree (in vertices) that is written out explicitly.
    #[arg(long, default_value_t = 1_000_000)]
    pub materialize_limit: u64,
    #[arg(long, value_enum, default_value_t = Emit::Json)]
    pub emit: Emit,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, env = "EIGENTREE_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build and verify a tree having a root of POLY as an eigenvalue.
    Synth {
        poly: String,
        #[command(flatten)]
        build: BuildArgs,
        /// Include the positive-integer search trace in the report.
        #[arg(long)]
        trace: bool,
    },
    /// Check that POLY divides the characteristic polynomial of a tree.
    Verify { treefile: PathBuf, poly: String },
    /// One tree for several polynomials at once.
    Join {
        #[arg(required = true)]
        polys: Vec<String>,
        #[command(flatten)]
        build: BuildArgs,
    },
    /// Print det(A − XI) of a tree.
    Charpoly { treefile: PathBuf },
}

#[derive(Serialize, Debug)]
pub struct Report {
    pub input: String,
    pub d: usize,
    pub d2: usize,
    pub verdict: Verdict,
    pub effective: String,
    pub tree_size: String,
    pub dag_nodes: usize,
    pub early_terminated: bool,
    pub materialized: bool,
    pub elapsed_ms: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Fact1Trace>,
}

#[derive(Serialize, Debug)]
struct JoinPart {
    input: String,
    effective: String,
    witness_size: String,
    verdict: Verdict,
}

#[derive(Serialize, Debug)]
struct JoinReport {
    inputs: Vec<JoinPart>,
    divisible: bool,
    tree_size: String,
    dag_nodes: usize,
    materialized: bool,
    elapsed_ms: u128,
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn fail(&mut self, code: i32, error: &str, message: String) -> i32 {
        let v = json!({ "error": error, "message": message });
        let _ = writeln!(self.out, "{v}");
        code
    }
}

/// Runs a parsed command, writing reports and trees to the given streams.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut io = Io { out, err };
    match cli.command {
        Command::Synth { poly, build, trace } => cmd_synth(&mut io, &poly, &build, trace),
        Command::Verify { treefile, poly } => cmd_verify(&mut io, &treefile, &poly),
        Command::Join { polys, build } => cmd_join(&mut io, &polys, &build),
        Command::Charpoly { treefile } => cmd_charpoly(&mut io, &treefile),
    }
}

fn synth_config(build: &BuildArgs) -> SynthConfig {
    SynthConfig {
        verify: VerifyConfig {
            num_primes: build.verify_primes,
            seed: build.seed,
            ..VerifyConfig::default()
        },
        ..SynthConfig::default()
    }
}

fn synth_error(io: &mut Io, e: SynthError) -> i32 {
    match e {
        SynthError::Validation(v) => io.fail(EXIT_INPUT, v.code(), v.to_string()),
        SynthError::Construct(c) => io.fail(EXIT_INTERNAL, "Internal", c.to_string()),
        SynthError::VerificationFailed(_) => {
            io.fail(EXIT_INTERNAL, "VerificationFailed", e.to_string())
        }
    }
}

fn parse_arg(io: &mut Io, s: &str) -> Result<PolySpec, i32> {
    s.parse::<PolySpec>()
        .map_err(|e| io.fail(EXIT_INPUT, "Parse", e.to_string()))
}

/// Writes the report and, for tree formats, the tree. A tree without `--out`
/// takes stdout and pushes the report to stderr.
fn emit(
    io: &mut Io,
    build: &BuildArgs,
    dag: &Dag,
    root: NodeId,
    report: impl FnOnce(bool) -> String,
) -> i32 {
    let format = match build.emit {
        Emit::Json => {
            let text = report(false);
            return match &build.out {
                Some(path) => write_file(io, path, &text, EXIT_OK, &text),
                None => {
                    let _ = writeln!(io.out, "{text}");
                    EXIT_OK
                }
            };
        }
        Emit::Edges => ExportFormat::Edges,
        Emit::Dot => ExportFormat::Dot,
        Emit::Graph6 => ExportFormat::Graph6,
    };
    let tree = match dag.materialize(root, build.materialize_limit) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(io.err, "not materialized: tree has {} vertices", e.size);
            let _ = writeln!(io.out, "{}", report(false));
            return EXIT_OK;
        }
    };
    let text = match tree.export(format) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(io.err, "not exported: {e}");
            let _ = writeln!(io.out, "{}", report(false));
            return EXIT_OK;
        }
    };
    let rep = report(true);
    match &build.out {
        Some(path) => write_file(io, path, &text, EXIT_OK, &rep),
        None => {
            let _ = writeln!(io.out, "{text}");
            let _ = writeln!(io.err, "{rep}");
            EXIT_OK
        }
    }
}

fn write_file(io: &mut Io, path: &Path, text: &str, code: i32, report: &str) -> i32 {
    if let Err(e) = std::fs::write(path, format!("{text}\n")) {
        return io.fail(EXIT_INTERNAL, "Io", format!("{}: {e}", path.display()));
    }
    let _ = writeln!(io.out, "{report}");
    code
}

fn synth_report(r: &SynthesisResult, materialized: bool, elapsed_ms: u128, trace: bool) -> Report {
    Report {
        input: r.input.to_string(),
        d: r.d,
        d2: r.d2,
        verdict: r.verdict.clone(),
        effective: r.effective.to_string(),
        tree_size: r.stats.tree_size.to_string(),
        dag_nodes: r.stats.dag_nodes,
        early_terminated: r.early_terminated,
        materialized,
        elapsed_ms,
        trace: if trace { r.trace.clone() } else { None },
    }
}

fn cmd_synth(io: &mut Io, poly: &str, build: &BuildArgs, trace: bool) -> i32 {
    let start = Instant::now();
    let spec = match parse_arg(io, poly) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let r = match synthesize(&spec.rat(), &synth_config(build)) {
        Ok(r) => r,
        Err(e) => return synth_error(io, e),
    };
    let elapsed = start.elapsed().as_millis();
    emit(io, build, r.store.dag(), r.witness, |materialized| {
        serde_json::to_string(&synth_report(&r, materialized, elapsed, trace))
            .expect("serializable report")
    })
}

fn read_tree(io: &mut Io, path: &Path) -> Result<MaterializedTree, i32> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| io.fail(EXIT_INPUT, "Io", format!("{}: {e}", path.display())))?;
    MaterializedTree::parse_edges(&text).map_err(|e| {
        let code = match e {
            crate::fexpr::TreeError::Malformed(_) => "Malformed",
            crate::fexpr::TreeError::NotATree(_) => "NotATree",
        };
        io.fail(EXIT_INPUT, code, e.to_string())
    })
}

fn cmd_verify(io: &mut Io, treefile: &Path, poly: &str) -> i32 {
    let spec = match parse_arg(io, poly) {
        Ok(s) => s,
        Err(code) => return code,
    };
    if spec.poly.is_zero() {
        return io.fail(
            EXIT_INPUT,
            "Parse",
            "the zero polynomial divides nothing".into(),
        );
    }
    let tree = match read_tree(io, treefile) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let phi = charpoly(&tree);
    let divisible = spec.poly.divides_over_q(&phi).expect("nonzero divisor");
    let v = json!({
        "input": spec.poly.to_string(),
        "n": tree.n(),
        "charpoly": phi.to_string(),
        "verdict": Verdict::Exact { divisible },
    });
    let _ = writeln!(io.out, "{v}");
    if divisible {
        EXIT_OK
    } else {
        EXIT_NOT_DIVISIBLE
    }
}

fn cmd_charpoly(io: &mut Io, treefile: &Path) -> i32 {
    let tree = match read_tree(io, treefile) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let v = json!({ "n": tree.n(), "charpoly": charpoly(&tree).to_string() });
    let _ = writeln!(io.out, "{v}");
    EXIT_OK
}

fn cmd_join(io: &mut Io, polys: &[String], build: &BuildArgs) -> i32 {
    let start = Instant::now();
    let mut specs = Vec::with_capacity(polys.len());
    for p in polys {
        match parse_arg(io, p) {
            Ok(s) => specs.push(s),
            Err(code) => return code,
        }
    }
    let config = synth_config(build);
    let mut dag = Dag::new();
    let mut roots = Vec::with_capacity(specs.len());
    let mut parts: Vec<(IntPoly, IntPoly, String)> = Vec::with_capacity(specs.len());
    for spec in &specs {
        let r = match synthesize(&spec.rat(), &config) {
            Ok(r) => r,
            Err(e) => return synth_error(io, e),
        };
        roots.push(dag.import(r.store.dag(), r.witness));
        parts.push((
            r.input.clone(),
            r.effective.clone(),
            r.stats.tree_size.to_string(),
        ));
    }
    let root = join(&mut dag, &roots);
    let inputs: Vec<JoinPart> = parts
        .into_iter()
        .map(|(input, effective, witness_size)| {
            let verdict = verify(&dag, root, &effective, &config.verify);
            JoinPart {
                input: input.to_string(),
                effective: effective.to_string(),
                witness_size,
                verdict,
            }
        })
        .collect();
    let divisible = inputs.iter().all(|p| p.verdict.divisible());
    if !divisible {
        return io.fail(
            EXIT_INTERNAL,
            "VerificationFailed",
            "joined tree failed verification".into(),
        );
    }
    let elapsed = start.elapsed().as_millis();
    let dag_nodes = dag.reachable(root).len();
    let tree_size = dag.size(root).to_string();
    emit(io, build, &dag, root, |materialized| {
        let rep = JoinReport {
            inputs,
            divisible,
            tree_size,
            dag_nodes,
            materialized,
            elapsed_ms: elapsed,
        };
        serde_json::to_string(&rep).expect("serializable report")
    })
}
