//! Command-line driver.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::calculus::voronoi_assign;
use crate::error::{Error, Result};
use crate::oracle::{exact_k_means_with, ExactOptions, DEFAULT_PARTITION_BUDGET};
use crate::par::Execution;
use crate::point::Dataset;
use crate::solver::{run_trials, SolveParams, DEFAULT_MAX_CALLS};

use super::bench::{scaling_sweep, write_csv};
use super::csv_io::{read_dataset, write_dataset, CsvOptions};
use super::generate::{gen_mixture, MixtureSpec};
use super::graph::{graph_to_instance, read_edge_list};
use super::json::SolveOutput;

#[derive(Debug, Parser)]
#[command(
    name = "missing-kmeans",
    version,
    about = "k-means for points with missing coordinates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Approximate k-means by repeated randomized search.
    Solve(SolveArgs),
    /// Exact optimum by exhaustive enumeration (small inputs only).
    Exact(ExactArgs),
    /// Generate an instance as CSV.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Cost of the centers in a result file on a dataset.
    Eval(EvalArgs),
    /// Time the solver over increasing dataset sizes.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Cell text marking a missing coordinate; empty cells are always missing.
    #[arg(long, default_value = "?")]
    pub missing_token: String,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 10)]
    pub repeats: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON result here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MAX_CALLS)]
    pub max_calls: u64,
    /// Missing-coordinate bound; may only raise the observed one.
    #[arg(long)]
    pub delta: Option<usize>,
    /// Run trials one after another.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub k: usize,
    /// Largest allowed k^n.
    #[arg(long, default_value_t = DEFAULT_PARTITION_BUDGET)]
    pub budget: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Gaussian mixture with missing coordinates.
    Mixture(MixtureArgs),
    /// Instance encoding a graph given as an edge list.
    Coloring(ColoringArgs),
}

#[derive(Debug, Args)]
pub struct MixtureArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 1)]
    pub delta: usize,
    #[arg(long, default_value_t = 10.0)]
    pub separation: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.2)]
    pub missing_rate: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the ground-truth cluster of each point, one per line.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[arg(long, default_value = "?")]
    pub missing_token: String,
}

#[derive(Debug, Args)]
pub struct ColoringArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Vertex count, if larger than the largest vertex in the edge list.
    #[arg(long)]
    pub vertices: Option<usize>,
    #[arg(long, default_value = "?")]
    pub missing_token: String,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// JSON result holding a `centers` array.
    #[arg(long)]
    pub centers: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated, strictly increasing point counts.
    #[arg(long, value_delimiter = ',', default_value = "10000,20000,40000")]
    pub ns: Vec<usize>,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 8)]
    pub d: usize,
    #[arg(long, default_value_t = 1)]
    pub delta: usize,
    #[arg(long, default_value_t = 1.0)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1)]
    pub repeats: usize,
    #[arg(long, default_value_t = 5)]
    pub runs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 20.0)]
    pub separation: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.1)]
    pub missing_rate: f64,
    /// Write CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn load(input: &InputArgs) -> Result<Dataset> {
    let file =
        File::open(&input.input).map_err(|e| Error::usage(format!("cannot open {}: {e}", input.input.display())))?;
    read_dataset(
        BufReader::new(file),
        &CsvOptions {
            missing_token: input.missing_token.clone(),
        },
    )
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::usage(format!("cannot create {}: {e}", path.display())))
}

fn emit_json(value: &impl serde::Serialize, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => {
            let mut w = create(path)?;
            serde_json::to_writer_pretty(&mut w, value)?;
            writeln!(w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            serde_json::to_writer_pretty(&mut w, value)?;
            writeln!(w)?;
        }
    }
    Ok(())
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve(args) => {
            let data = load(&args.input)?;
            let mut params = SolveParams::new(args.k, args.epsilon)
                .with_repeats(args.repeats)
                .with_seed(args.seed)
                .with_max_calls(args.max_calls)
                .with_execution(if args.sequential {
                    Execution::Sequential
                } else {
                    Execution::Parallel
                });
            params.delta_override = args.delta;
            let start = Instant::now();
            let report = run_trials(&data, &params)?;
            let mut out = SolveOutput::new(&report, &params);
            out.seconds = Some(start.elapsed().as_secs_f64());
            emit_json(&out, args.output.as_deref())?;
            if args.output.is_some() {
                println!("cost {:?}", out.cost);
            }
        }
        Command::Exact(args) => {
            let data = load(&args.input)?;
            let res = exact_k_means_with(
                &data,
                args.k,
                ExactOptions {
                    budget: args.budget,
                    ..Default::default()
                },
            )?;
            println!("cost {}", res.opt_cost);
            if let Some(path) = args.output.as_deref() {
                emit_json(&res, Some(path))?;
            }
        }
        Command::Gen(GenCommand::Mixture(args)) => {
            let mixture = gen_mixture(&MixtureSpec {
                k: args.k,
                n: args.n,
                d: args.d,
                delta: args.delta,
                separation: args.separation,
                noise_sigma: args.sigma,
                missing_rate: args.missing_rate,
                seed: args.seed,
            })?;
            let opts = CsvOptions {
                missing_token: args.missing_token,
            };
            let mut w = create(&args.out)?;
            write_dataset(&mut w, &mixture.data, &opts)?;
            w.flush()?;
            if let Some(path) = args.truth {
                let mut w = create(&path)?;
                for t in &mixture.truth {
                    writeln!(w, "{t}")?;
                }
                w.flush()?;
            }
        }
        Command::Gen(GenCommand::Coloring(args)) => {
            let file = File::open(&args.graph)
                .map_err(|e| Error::usage(format!("cannot open {}: {e}", args.graph.display())))?;
            let graph = read_edge_list(BufReader::new(file), args.vertices)?;
            let data = graph_to_instance(&graph)?;
            let mut w = create(&args.out)?;
            write_dataset(
                &mut w,
                &data,
                &CsvOptions {
                    missing_token: args.missing_token,
                },
            )?;
            w.flush()?;
        }
        Command::Eval(args) => {
            let data = load(&args.input)?;
            let file = File::open(&args.centers)
                .map_err(|e| Error::usage(format!("cannot open {}: {e}", args.centers.display())))?;
            let result: SolveOutput = serde_json::from_reader(BufReader::new(file))
                .map_err(|e| Error::usage(format!("bad result file: {e}")))?;
            let clustering = voronoi_assign(&data, &data.all_indices(), &result.centers)?;
            println!("cost {:?}", clustering.cost);
        }
        Command::Bench(args) => {
            let base = MixtureSpec {
                k: args.k,
                n: args.ns.first().copied().unwrap_or(0),
                d: args.d,
                delta: args.delta,
                separation: args.separation,
                noise_sigma: args.sigma,
                missing_rate: args.missing_rate,
                seed: args.seed,
            };
            let params = SolveParams::new(args.k, args.epsilon)
                .with_repeats(args.repeats)
                .with_seed(args.seed);
            let rows = scaling_sweep(&base, &args.ns, &params, args.runs)?;
            match args.out {
                Some(path) => {
                    let mut w = create(&path)?;
                    write_csv(&rows, &mut w)?;
                    w.flush()?;
                }
                None => write_csv(&rows, io::stdout().lock())?,
            }
        }
    }
    Ok(())
}

/// Parses `argv` and runs it, returning the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
