use std::path::PathBuf;
use std::process::ExitCode;

use ckrg::{
    cmd_beta, cmd_decompose, cmd_report, cmd_trees, cmd_verify, configure_threads, parse_suites,
    CliError, Outcome, OutputFormat, RuleSource, RunConfig,
};
use clap::{Parser, Subcommand};

/// Exact verification of renormalization-group identities on the rooted-tree
/// Hopf algebra.
#[derive(Parser, Debug)]
#[command(name = "ckrg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Highest tree degree to work with.
    #[arg(long, global = true, default_value_t = 4)]
    max_degree: usize,

    /// Highest ε power kept in truncated series; at least --max-degree.
    /// Defaults to max(8, --max-degree).
    #[arg(long, global = true)]
    eps_trunc: Option<i32>,

    /// `ladder` or the path of a rule file.
    #[arg(long, global = true, default_value = "ladder")]
    rule: RuleSource,

    /// Number of hierarchy times.
    #[arg(long, global = true, default_value_t = 3)]
    hierarchy_depth: usize,

    /// Comma-separated suites: hopf, birkhoff, rg, scattering, recovery,
    /// ode, hierarchy, or all.
    #[arg(long, global = true, default_value = "all")]
    suite: String,

    /// json, csv or pretty.
    #[arg(long, global = true, default_value = "json")]
    output: OutputFormat,

    /// Directory for files written by `report`.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// List canonical tree encodings and per-degree counts.
    Trees,
    /// Birkhoff decomposition of the rule's character.
    Decompose,
    /// The β element.
    Beta,
    /// Run the verification suites; exit 1 if any identity fails.
    Verify,
    /// Write β, M and scattering tables as CSV.
    Report,
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    configure_threads(std::env::var("CKRG_THREADS").ok().as_deref())?;
    let cfg = RunConfig {
        max_degree: cli.max_degree,
        eps_trunc: cli
            .eps_trunc
            .unwrap_or_else(|| (cli.max_degree as i32).max(8)),
        rule: cli.rule,
        hierarchy_depth: cli.hierarchy_depth,
        suites: parse_suites(&cli.suite).map_err(CliError::Usage)?,
        output: cli.output,
        out_dir: cli.out,
    };
    match cli.command {
        Command::Trees => Ok(cmd_trees(&cfg)),
        Command::Decompose => cmd_decompose(&cfg),
        Command::Beta => cmd_beta(&cfg),
        Command::Verify => cmd_verify(&cfg),
        Command::Report => cmd_report(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
