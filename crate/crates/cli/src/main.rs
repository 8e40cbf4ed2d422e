use std::process::ExitCode;

use clap::{Parser, Subcommand};

use innerrate_cli::{
    cmd_compare, cmd_dot, cmd_family, cmd_triple, cmd_verify, CliError, RunReport, DEFAULT_SEED,
};

/// Inner rates of m-primary monomial ideals of C{x, y}.
///
/// Ideals are written as generator lists ("x^2, xy, y^2"), as JSON
/// ({"gens": [[2,0],[0,2]]}) or as I_n for the n-th power of (x, y).
#[derive(Debug, Parser)]
#[command(name = "innerrate", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for the randomized oracles.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Print the report as JSON.
    #[arg(long, global = true, conflicts_with = "dot")]
    json: bool,
    /// Print the triples as Graphviz DOT.
    #[arg(long, global = true)]
    dot: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Chain, per-ray invariants and (Γ, L, P) of one ideal.
    Triple {
        ideal: String,
        /// Cross-check the engine against the polynomial oracles.
        #[arg(long)]
        verify: bool,
    },
    /// Compare the triples, rate profiles and integral closures of two ideals.
    Compare { a: String, b: String },
    /// Triples of I_1 .. I_n.
    Family { n_max: u32 },
    /// Oracle cross-checks; with no ideals, runs the built-in corpus.
    Verify { ideals: Vec<String> },
    /// DOT rendering of the triple of one ideal.
    Dot { ideal: String },
}

fn run(cli: &Cli) -> Result<RunReport, CliError> {
    match &cli.command {
        Command::Triple { ideal, verify } => cmd_triple(ideal, *verify, cli.seed),
        Command::Compare { a, b } => cmd_compare(a, b, cli.seed),
        Command::Family { n_max } => cmd_family(*n_max, cli.seed),
        Command::Verify { ideals } => cmd_verify(ideals, cli.seed),
        Command::Dot { ideal } => cmd_dot(ideal, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let dot = cli.dot || matches!(cli.command, Command::Dot { .. });
            if cli.json {
                println!("{}", report.to_json());
            } else if dot {
                print!("{}", report.to_dot());
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
