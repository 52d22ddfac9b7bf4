//! The `grsp` command line.
//!
//! Exit status: 0 on success, 1 on usage errors (bad flags, measure specs or
//! parameter values), 2 on data errors (unreadable or malformed input, unknown
//! nodes, capacity limits).

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::eval::{default_lambdas, eval_map, prank_sweep, EvalConfig};
use crate::graph::{load_edge_list, load_labels, EdgeListOptions, Graph, NodeId};
use crate::io::{format_score, open_text, write_table};
use crate::kernel::make_kernel;
use crate::measure::{MeasureSpec, SYNTAX_HELP};
use crate::montecarlo::{estimate, McConfig, DEFAULT_SEED};
use crate::query::{topk, QueryParams};
use crate::solver::{solve, SolveConfig};

#[derive(Debug, Parser)]
#[command(
    name = "grsp",
    version,
    about = "Random surfer-pair similarity measures"
)]
struct Cli {
    /// Maximum worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact all-pairs similarity table by fixed-point iteration.
    Solve(SolveArgs),
    /// Monte Carlo estimate for one node pair.
    Estimate(EstimateArgs),
    /// Top-k most similar nodes to a query node.
    Topk(TopkArgs),
    /// Mean average precision of top-k queries against node labels.
    Eval(EvalArgs),
    /// List the measure spec syntax.
    Kernels,
}

#[derive(Debug, Args)]
struct GraphArgs {
    /// Edge list, one `src dst` pair per line (gzip accepted).
    #[arg(long)]
    graph: PathBuf,
    /// Read every edge as `dst -> src`.
    #[arg(long)]
    reverse: bool,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Write here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Print scores with full precision instead of 6 decimals.
    #[arg(long)]
    full_precision: bool,
}

#[derive(Debug, Args)]
struct WalkArgs {
    #[arg(long = "C", alias = "decay", default_value_t = 0.8)]
    decay: f64,
    /// Walks per pair.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Truncation length of each walk.
    #[arg(long, default_value_t = 15)]
    max_steps: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

impl WalkArgs {
    fn config(&self) -> McConfig {
        McConfig {
            samples: self.samples,
            max_steps: self.max_steps,
            decay: self.decay,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    measure: String,
    #[arg(long = "C", alias = "decay", default_value_t = 0.8)]
    decay: f64,
    #[arg(long, default_value_t = 1e-9)]
    epsilon: f64,
    #[arg(long, default_value_t = 100)]
    k_max: usize,
    #[arg(long, default_value_t = 20_000)]
    memory_gate: usize,
    /// Only print entries strictly above this value.
    #[arg(long, default_value_t = 0.0)]
    threshold: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    measure: String,
    /// Node pair as `a,b`.
    #[arg(long)]
    pair: String,
    #[command(flatten)]
    walk: WalkArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct TopkArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    measure: String,
    #[arg(long)]
    query: String,
    #[arg(long, default_value_t = 100)]
    k: usize,
    #[arg(long, default_value_t = 4)]
    radius: usize,
    /// Drop candidates with zero estimated similarity.
    #[arg(long)]
    drop_zero: bool,
    #[command(flatten)]
    walk: WalkArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// `node<TAB>label` lines.
    #[arg(long)]
    labels: PathBuf,
    /// Measures to compare, in column order. Default: simrank, the best P-Rank of
    /// a lambda sweep, simrankstar, psimrank, psimrankstar.
    #[arg(long)]
    measure: Vec<String>,
    /// Also sweep P-Rank lambda over 0.0..=1.0 in steps of 0.1 and report each MAP.
    #[arg(long)]
    prank_sweep: bool,
    #[arg(long, default_value_t = 100)]
    k: usize,
    #[arg(long, default_value_t = 50)]
    num_queries: usize,
    #[arg(long, default_value_t = 50)]
    num_trials: usize,
    #[arg(long, default_value_t = 5)]
    min_in_degree: usize,
    #[arg(long, default_value_t = 5)]
    min_out_degree: usize,
    #[arg(long, default_value_t = 4)]
    radius: usize,
    #[command(flatten)]
    walk: WalkArgs,
    #[command(flatten)]
    output: OutputArgs,
}

fn is_usage_error(err: &Error) -> bool {
    matches!(err, Error::InvalidSpec(_) | Error::InvalidConfig(_))
}

/// Parses `args` (program name first) and runs the command. Returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    1
                }
            };
        }
    };
    let execute = || {
        let mut buffer = Vec::new();
        dispatch(&cli.command, &mut buffer).map(|()| buffer)
    };
    let outcome = match cli.workers {
        Some(0) => Err(Error::InvalidConfig("--workers must be at least 1".into())),
        Some(workers) => rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::InvalidConfig(e.to_string()))
            .and_then(|pool| pool.install(execute)),
        None => execute(),
    }
    .and_then(|buffer| Ok(stdout.write_all(&buffer)?));
    match outcome {
        Ok(()) => 0,
        Err(err) => {
            let kind = if is_usage_error(&err) {
                "usage"
            } else {
                "data"
            };
            let _ = writeln!(stderr, "grsp: {kind} error: {err}");
            if is_usage_error(&err) {
                1
            } else {
                2
            }
        }
    }
}

fn dispatch(command: &Command, stdout: &mut Vec<u8>) -> Result<()> {
    match command {
        Command::Solve(args) => run_solve(args, stdout),
        Command::Estimate(args) => run_estimate(args, stdout),
        Command::Topk(args) => run_topk(args, stdout),
        Command::Eval(args) => run_eval(args, stdout),
        Command::Kernels => {
            for (syntax, meaning) in SYNTAX_HELP {
                writeln!(stdout, "{syntax}\t{meaning}")?;
            }
            Ok(())
        }
    }
}

fn parse_measure(text: &str) -> Result<MeasureSpec> {
    text.parse()
}

fn load_graph(args: &GraphArgs) -> Result<Graph> {
    let options = EdgeListOptions {
        reverse: args.reverse,
        ..Default::default()
    };
    let (graph, _) = load_edge_list(open_text(&args.graph)?, &options)?;
    Ok(graph)
}

/// Runs `body` against the requested output file or stdout.
fn with_output(
    args: &OutputArgs,
    stdout: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> Result<()> {
    match &args.output {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            body(&mut file)?;
            file.flush()?;
            Ok(())
        }
        None => body(stdout),
    }
}

fn run_solve(args: &SolveArgs, stdout: &mut dyn Write) -> Result<()> {
    let spec = parse_measure(&args.measure)?;
    let cfg = SolveConfig {
        decay: args.decay,
        epsilon: args.epsilon,
        max_iterations: args.k_max,
        memory_gate: args.memory_gate,
    };
    cfg.validate()?;
    let graph = load_graph(&args.graph)?;
    let kernel = make_kernel(&spec, &graph)?;
    let table = solve(&kernel, &cfg)?;
    with_output(&args.output, stdout, |out| {
        writeln!(
            out,
            "# measure={spec} C={} iterations={} final_delta={:e} converged={}",
            cfg.decay, table.iterations_run, table.final_delta, table.converged
        )?;
        write_table(
            &graph,
            &table,
            args.threshold,
            args.output.full_precision,
            out,
        )
    })
}

fn parse_pair(graph: &Graph, text: &str) -> Result<(NodeId, NodeId)> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| Error::InvalidConfig(format!("--pair expects a,b, got '{text}'")))?;
    Ok((graph.resolve(a.trim())?, graph.resolve(b.trim())?))
}

fn run_estimate(args: &EstimateArgs, stdout: &mut dyn Write) -> Result<()> {
    let spec = parse_measure(&args.measure)?;
    let mc = args.walk.config();
    mc.validate()?;
    let graph = load_graph(&args.graph)?;
    let (a, b) = parse_pair(&graph, &args.pair)?;
    let kernel = make_kernel(&spec, &graph)?;
    let est = estimate(&kernel, (a, b), &mc)?;
    let full = args.output.full_precision;
    with_output(&args.output, stdout, |out| {
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            graph.display_name(a),
            graph.display_name(b),
            format_score(est.mean, full),
            format_score(est.std_error, full)
        )?;
        Ok(())
    })
}

fn run_topk(args: &TopkArgs, stdout: &mut dyn Write) -> Result<()> {
    let spec = parse_measure(&args.measure)?;
    let mc = args.walk.config();
    mc.validate()?;
    let params = QueryParams {
        k: args.k,
        radius: args.radius,
        drop_zero: args.drop_zero,
    };
    let graph = load_graph(&args.graph)?;
    let query = graph.resolve(&args.query)?;
    let kernel = make_kernel(&spec, &graph)?;
    let result = topk(&kernel, query, &params, &mc)?;
    let full = args.output.full_precision;
    with_output(&args.output, stdout, |out| {
        writeln!(
            out,
            "# measure={spec} query={} candidates={}",
            graph.display_name(query),
            result.candidates_considered
        )?;
        for r in &result.ranked {
            writeln!(
                out,
                "{}\t{}\t{}",
                graph.display_name(r.node),
                format_score(r.mean, full),
                format_score(r.std_error, full)
            )?;
        }
        Ok(())
    })
}

fn run_eval(args: &EvalArgs, stdout: &mut dyn Write) -> Result<()> {
    let explicit = args
        .measure
        .iter()
        .map(|m| parse_measure(m))
        .collect::<Result<Vec<_>>>()?;
    let cfg = EvalConfig {
        k: args.k,
        num_queries: args.num_queries,
        num_trials: args.num_trials,
        min_in_degree: args.min_in_degree,
        min_out_degree: args.min_out_degree,
        radius: args.radius,
        mc: args.walk.config(),
        seed: args.walk.seed,
    };
    cfg.validate()?;
    let graph = load_graph(&args.graph)?;
    let (labels, _) = load_labels(open_text(&args.labels)?, &graph)?;

    let sweep = if explicit.is_empty() || args.prank_sweep {
        Some(prank_sweep(&graph, &labels, &default_lambdas(), &cfg)?)
    } else {
        None
    };
    let specs = if explicit.is_empty() {
        let lambda = sweep.as_ref().map_or(0.5, |s| s.best_lambda);
        vec![
            MeasureSpec::SimRank,
            MeasureSpec::PRank { lambda },
            MeasureSpec::SimRankStar,
            MeasureSpec::PSimRank,
            MeasureSpec::PSimRankStar,
        ]
    } else {
        explicit
    };
    let report = eval_map(&graph, &labels, &specs, &cfg)?;
    let full = args.output.full_precision;
    with_output(&args.output, stdout, |out| {
        if let Some(sweep) = &sweep {
            for (lambda, map) in sweep.lambdas.iter().zip(&sweep.maps) {
                writeln!(
                    out,
                    "# prank_sweep lambda={lambda} map={}",
                    format_score(*map, full)
                )?;
            }
            writeln!(out, "# prank_sweep best_lambda={}", sweep.best_lambda)?;
        }
        out.write_all(report.to_tsv(full).as_bytes())?;
        Ok(())
    })
}
