mod ball;
mod field;
mod grid;
mod input;
mod lattice;
mod report;
mod val;
mod verify;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use report::{CliError, Outcome, Report};

#[derive(Parser, Debug)]
#[command(
    name = "latval",
    version,
    about = "Modular lattices, valuation rings and ball groups in exact arithmetic"
)]
struct Cli {
    /// Print a machine-readable JSON report
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every random choice
    #[arg(long, global = true, env = "LATVAL_SEED", default_value_t = 0)]
    seed: u64,
    /// Include wall-clock time in the report
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Finite lattices: modularity, ranks, pregeometries, rank axioms
    Lattice {
        #[command(subcommand)]
        cmd: lattice::LatticeCmd,
    },
    /// Generate a lattice from a spec such as `subgroups:d=2,4`
    Gen { spec: String },
    /// Intersections of valuation rings
    Val(val::ValArgs),
    /// Exact field arithmetic and truncated power series
    Field {
        /// Field tag: QQ, GF(p), QQ(t), GF(p)(t) or GF(p)(s)(t)
        #[arg(long, global = true, default_value = "QQ(t)")]
        field: String,
        #[command(subcommand)]
        cmd: field::FieldCmd,
    },
    /// Ball subgroups of a rational function field
    Ball(ball::BallArgs),
    /// Grids inside finite relations
    Grid {
        #[command(subcommand)]
        cmd: grid::GridCmd,
    },
    /// Run a property suite: lattice, pregeometry, valuation, ball, grid or all
    Verify { suite: String },
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Lattice { cmd } => lattice::run(cmd),
        Command::Gen { spec } => lattice::gen(spec),
        Command::Val(args) => val::run(args),
        Command::Field { field, cmd } => field::run(field, cmd),
        Command::Ball(args) => ball::run(args, cli.seed),
        Command::Grid { cmd } => grid::run(cmd),
        Command::Verify { suite } => verify::run(suite, cli.seed),
    }
}

fn emit(report: &Report, as_json: bool) -> ExitCode {
    let (out, err) = report.render(as_json);
    print!("{out}");
    eprint!("{err}");
    let _ = std::io::stdout().flush();
    ExitCode::from(report.exit_code() as u8)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let command: Vec<String> = argv[1..].to_vec();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) if command.iter().any(|a| a == "--json") => {
            let msg = e.render().to_string();
            let msg = msg.trim().trim_start_matches("error: ").to_string();
            let report = Report {
                command,
                outcome: Err(CliError::Usage(msg)),
                timing_ms: None,
            };
            return emit(&report, true);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(2);
        }
    };
    let start = Instant::now();
    let outcome = dispatch(&cli);
    let timing_ms = cli.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    let report = Report {
        command,
        outcome,
        timing_ms,
    };
    emit(&report, cli.json)
}
