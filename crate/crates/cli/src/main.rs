//! `graphfn`: power counting, graph polynomials, Monte Carlo evaluation and
//! planar duals from the command line.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 divergent graph,
//! 3 precondition refusal, 4 a duality check failed.

mod commands;
mod envelope;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "graphfn",
    version,
    about = "Graphical functions of position-space Feynman graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Power counting: every UV and IR condition with its margin.
    Check {
        file: PathBuf,
        /// Skip disconnected induced subgraphs in the UV scan.
        #[arg(long)]
        connected_only: bool,
    },
    /// Dual spanning forest polynomials and the second polynomial.
    Poly(PolyArgs),
    /// Monte Carlo estimate of the graphical function.
    Eval(EvalArgs),
    /// The parametric integrand: exponents, prefactor and numerator.
    Integrand {
        file: PathBuf,
        #[arg(long, default_value = "dual")]
        representation: String,
        /// Derivative order for one edge, `<edge>=<k>`; repeatable.
        #[arg(long = "n", value_name = "EDGE=K")]
        n: Vec<String>,
    },
    /// The planar dual as a graph file, with the edge bijection as comments.
    Dual {
        file: PathBuf,
        /// Print a JSON envelope instead of the graph file.
        #[arg(long)]
        json: bool,
        /// Also write the dual graph file here.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Checks the duality theorem: exact identities and a numeric comparison.
    VerifyDual {
        file: PathBuf,
        #[arg(long, default_value = "i", allow_hyphen_values = true)]
        z: String,
        #[command(flatten)]
        sampling: SamplingArgs,
        /// Skip the Monte Carlo comparison.
        #[arg(long)]
        exact_only: bool,
    },
}

#[derive(Args, Debug)]
pub struct PolyArgs {
    file: PathBuf,
    /// Partition of the external vertices, e.g. `01,z`; repeatable.
    #[arg(long)]
    partition: Vec<String>,
    /// Emit the second polynomial.
    #[arg(long)]
    phi: bool,
    /// Also emit the Cremona transform of every polynomial.
    #[arg(long)]
    cremona: bool,
    /// Plain `name = polynomial` lines instead of JSON.
    #[arg(long)]
    text: bool,
}

#[derive(Args, Debug)]
pub struct SamplingArgs {
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `plain` or `low-discrepancy`.
    #[arg(long, default_value = "plain")]
    sampler: String,
    /// Run on one thread; results are identical either way.
    #[arg(long)]
    serial: bool,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    file: PathBuf,
    /// Position of the third external vertex, e.g. `i` or `0.5+0.75i`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "s")]
    z: Option<String>,
    /// Squared distance between external vertices, `a,b=value`; repeatable.
    #[arg(long, value_name = "A,B=VALUE")]
    s: Vec<String>,
    #[command(flatten)]
    sampling: SamplingArgs,
    #[arg(long, default_value = "dual")]
    representation: String,
    /// Edge whose variable is fixed to one.
    #[arg(long)]
    chart: Option<String>,
    /// Derivative order for one edge, `<edge>=<k>`; repeatable.
    #[arg(long = "n", value_name = "EDGE=K")]
    n: Vec<String>,
    /// Exponent of the cube map.
    #[arg(long)]
    warp: Option<f64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match commands::run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            if let Some(out) = &failure.stdout {
                print!("{out}");
            }
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code as u8)
        }
    }
}
