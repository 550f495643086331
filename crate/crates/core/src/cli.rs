//! The `lpa` command line.
//!
//! [`run`] takes the argument vector and returns the exit code together with
//! everything written to stdout and stderr, so tests can drive it in-process.
//! Exit codes: 0 on success, 1 when a check fails, 2 on usage or input errors.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::algebra::Algebra;
use crate::completion::{e_of, e_vertex};
use crate::error::{Error, Result};
use crate::expr::parse;
use crate::filtration::{min_ord, Order};
use crate::graph::{Graph, VertexSet};
use crate::scalar::Field;
use crate::specialization::Specialization;
use crate::structure::{decompose, verify, Suite};

#[derive(Debug, Parser)]
#[command(
    name = "lpa",
    version,
    about = "Leavitt path algebras: normal forms, completions and structure checks"
)]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Options {
    /// Graph file (JSON).
    #[arg(long, global = true, value_name = "FILE")]
    graph: Option<PathBuf>,
    /// Specialization file (JSON).
    #[arg(long, global = true, value_name = "FILE", conflicts_with = "auto_regular")]
    gamma: Option<PathBuf>,
    /// Use the deterministic regular specialization of the graph.
    #[arg(long, global = true)]
    auto_regular: bool,
    /// Coefficient field: `q` or `fp:<prime>`.
    #[arg(long, global = true, default_value = "q")]
    field: String,
    /// Precision K: an integer, `a/b` or `inf`.
    #[arg(long, global = true, default_value = "4")]
    prec: String,
    /// Emit JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Start checks in a seeded random order (the report order is fixed).
    #[arg(long, global = true, hide = true, value_name = "SEED")]
    shuffle_seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the minimal hereditary subsets, one per line.
    Frame {
        /// Graph file; defaults to --graph.
        file: Option<PathBuf>,
    },
    /// Build the regular specialization and print or write it.
    Specialize {
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Report frame-finiteness and regularity of the specialization.
    CheckSpec,
    /// Normal form of an expression.
    Nf {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Product of two expressions.
    Mul {
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
    },
    /// Least filtration order of an expression.
    Ord {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// The idempotent e(W) of a hereditary set, truncated at --prec.
    Idempotent {
        /// Vertex names separated by commas, e.g. `a,b`.
        #[arg(long, value_name = "W")]
        set: String,
    },
    /// The vertex idempotent e_v, truncated at --prec.
    Ev {
        #[arg(long, value_name = "V")]
        vertex: String,
    },
    /// Decompose the completion along the frame.
    Decompose,
    /// Run a verification suite.
    Verify {
        /// all, central-idempotent, partition, collapse, vertex-idempotents,
        /// components or vertex-recovery.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

/// Exit code and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the command line (`argv[0]` is the program name).
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(&cli) {
        Ok((code, stdout)) => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn load_graph(path: Option<&PathBuf>) -> Result<Graph> {
    let path = path.ok_or_else(|| Error::Precondition("a graph is required: pass --graph FILE".into()))?;
    Graph::from_json(&read(path)?)
}

fn load_gamma(opts: &Options, g: &Graph) -> Result<Specialization> {
    match (&opts.gamma, opts.auto_regular) {
        (Some(path), _) => Specialization::from_json(g, &read(path)?),
        (None, true) => Ok(Specialization::construct_regular(g)),
        (None, false) => Err(Error::Precondition(
            "a specialization is required: pass --gamma FILE or --auto-regular".into(),
        )),
    }
}

fn load_algebra(opts: &Options) -> Result<Algebra> {
    let g = load_graph(opts.graph.as_ref())?;
    let gamma = load_gamma(opts, &g)?;
    let field: Field = opts.field.parse()?;
    Algebra::new(g, gamma, field)
}

fn parse_set(g: &Graph, text: &str) -> Result<VertexSet> {
    let inner = text.trim().trim_start_matches('{').trim_end_matches('}');
    let names: Vec<&str> = inner
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .collect();
    if names.is_empty() {
        return Err(Error::EmptySet);
    }
    g.vertex_set(names)
}

fn emit(value: Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("JSON values serialize");
    s.push('\n');
    s
}

fn execute(cli: &Cli) -> Result<(i32, String)> {
    let opts = &cli.opts;
    let prec: Order = opts.prec.parse()?;
    match &cli.command {
        Command::Frame { file } => {
            let g = load_graph(file.as_ref().or(opts.graph.as_ref()))?;
            let frame = g.frame();
            if opts.json {
                let sets: Vec<Vec<&str>> = frame
                    .iter()
                    .map(|w| w.iter().map(|&v| g.vertex_name(v)).collect())
                    .collect();
                return Ok((0, emit(json!({"command": "frame", "frame": sets}))));
            }
            let mut out = String::new();
            for w in &frame {
                out.push_str(&g.fmt_set(w));
                out.push('\n');
            }
            Ok((0, out))
        }
        Command::Specialize { out } => {
            let g = load_graph(opts.graph.as_ref())?;
            let gamma = Specialization::construct_regular(&g);
            let text = gamma.to_json(&g);
            if let Some(path) = out {
                fs::write(path, format!("{text}\n"))?;
            }
            if opts.json {
                let value: Value = serde_json::from_str(&text)?;
                return Ok((0, emit(json!({"command": "specialize", "specialization": value}))));
            }
            Ok((0, format!("{text}\n")))
        }
        Command::CheckSpec => {
            let g = load_graph(opts.graph.as_ref())?;
            let gamma = load_gamma(opts, &g)?;
            let report = gamma.report(&g);
            if opts.json {
                return Ok((0, emit(json!({"command": "check-spec", "report": report.to_json(&g)}))));
            }
            Ok((0, report.render(&g)))
        }
        Command::Nf { expr } => {
            let alg = load_algebra(opts)?;
            let a = parse(&alg, expr)?;
            if opts.json {
                return Ok((0, emit(json!({"command": "nf", "result": a.to_string()}))));
            }
            Ok((0, format!("{a}\n")))
        }
        Command::Mul { left, right } => {
            let alg = load_algebra(opts)?;
            let a = &parse(&alg, left)? * &parse(&alg, right)?;
            if opts.json {
                return Ok((0, emit(json!({"command": "mul", "result": a.to_string()}))));
            }
            Ok((0, format!("{a}\n")))
        }
        Command::Ord { expr } => {
            let alg = load_algebra(opts)?;
            let o = min_ord(&parse(&alg, expr)?);
            if opts.json {
                return Ok((0, emit(json!({"command": "ord", "order": o}))));
            }
            Ok((0, format!("{o}\n")))
        }
        Command::Idempotent { set } => {
            let alg = load_algebra(opts)?;
            let w = parse_set(alg.graph(), set)?;
            let e = e_of(&alg, &w, prec)?;
            if opts.json {
                return Ok((
                    0,
                    emit(json!({
                        "command": "idempotent",
                        "set": w.iter().map(|&v| alg.graph().vertex_name(v)).collect::<Vec<_>>(),
                        "precision": e.prec(),
                        "result": e.to_string(),
                    })),
                ));
            }
            Ok((0, format!("{e}\n")))
        }
        Command::Ev { vertex } => {
            let alg = load_algebra(opts)?;
            let v = alg.graph().vertex(vertex)?;
            let e = e_vertex(&alg, v, prec)?;
            if opts.json {
                return Ok((
                    0,
                    emit(json!({
                        "command": "ev",
                        "vertex": vertex,
                        "precision": e.prec(),
                        "result": e.to_string(),
                    })),
                ));
            }
            Ok((0, format!("{e}\n")))
        }
        Command::Decompose => {
            let alg = load_algebra(opts)?;
            let report = decompose(&alg, prec)?;
            let code = i32::from(report.failed());
            if opts.json {
                let mut value = report.to_json(alg.graph());
                value["command"] = json!("decompose");
                value["requested_precision"] = json!(prec);
                return Ok((code, emit(value)));
            }
            Ok((code, report.render(alg.graph())))
        }
        Command::Verify { suite } => {
            let alg = load_algebra(opts)?;
            let suite: Suite = suite.parse()?;
            let report = verify(&alg, suite, prec, opts.shuffle_seed)?;
            let code = i32::from(report.failed());
            if opts.json {
                let mut value = report.to_json();
                value["command"] = json!("verify");
                return Ok((code, emit(value)));
            }
            Ok((code, report.render()))
        }
    }
}
