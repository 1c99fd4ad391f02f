// SPDX-License-Identifier: Apache-2.0

//! `qsynth`: exact minimum-cost synthesis of 3-qubit reversible circuits.

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

use commands::CliError;

const PATTERN_HELP: &str = "Wires are numbered 0..2. A binary input pattern encodes wire values as \
4*v0 + 2*v1 + v2; permutations list the output pattern for inputs 0..7.";

#[derive(Parser, Debug)]
#[command(name = "qsynth", version, about = "Exact synthesis of 3-qubit circuits over NOT, CNOT, CV and CVDG", after_help = PATTERN_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print |G[k]| and |S8[k]| for k = 0..=K.
    Table(TableArgs),
    /// Synthesize a minimum-cost circuit for a reversible function.
    Synth(SynthArgs),
    /// Evaluate a circuit file on binary or all four-valued inputs.
    Eval(EvalArgs),
    /// Test whether NOT, CNOT and the given function generate all of S8.
    Universal(UniversalArgs),
    /// Split G[4] into CNOT-only and controlled-V members.
    #[command(name = "classify-g4")]
    ClassifyG4(DbArg),
    /// Check the NOT-layer coset decomposition over a database.
    Verify(VerifyArgs),
    /// Cost database management.
    #[command(subcommand)]
    Db(DbCommand),
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    /// Worker threads for layer expansion (output does not depend on it).
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Memory ceiling for the search, in MiB.
    #[arg(long = "mem-limit-mb")]
    pub mem_limit_mb: Option<usize>,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long = "max-cost")]
    pub max_cost: u32,
    /// Also allow NOT gates anywhere at cost 0.
    #[arg(long = "free-nots")]
    pub free_nots: bool,
    /// Read costs from this database instead of searching.
    #[arg(long)]
    pub db: Option<PathBuf>,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("target").required(true).args(["name", "perm", "perm_file"])))]
pub struct SynthArgs {
    /// toffoli, peres or identity.
    #[arg(long)]
    pub name: Option<String>,
    /// Eight output patterns, e.g. "0 1 2 3 4 5 7 6" (a leading "perm:" is accepted).
    #[arg(long)]
    pub perm: Option<String>,
    #[arg(long = "perm-file")]
    pub perm_file: Option<PathBuf>,
    /// Maximum two-qubit cost to search.
    #[arg(long, default_value_t = commands::DEFAULT_BOUND)]
    pub bound: u32,
    /// List every implementation at the minimum cost.
    #[arg(long = "all-at-min")]
    pub all_at_min: bool,
    /// Cost database to look targets up in.
    #[arg(long, conflicts_with = "dfs")]
    pub db: Option<PathBuf>,
    /// Use iterative deepening only, without building an in-memory cost table.
    #[arg(long)]
    pub dfs: bool,
    /// Side of the NOT layer [default: the database's order, else notfirst].
    #[arg(long, value_enum)]
    pub order: Option<OrderArg>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum OrderArg {
    Notfirst,
    Notlast,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum InputsArg {
    Binary,
    All,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    #[arg(long, value_enum, default_value_t = InputsArg::Binary)]
    pub inputs: InputsArg,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["circuit", "perm"])))]
pub struct UniversalArgs {
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    #[arg(long)]
    pub perm: Option<String>,
}

#[derive(Args, Debug)]
pub struct DbArg {
    #[arg(long)]
    pub db: PathBuf,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Run the coset decomposition checks.
    #[arg(long, required = true)]
    pub theorem2: bool,
    #[arg(long)]
    pub db: PathBuf,
}

#[derive(Subcommand, Debug)]
enum DbCommand {
    /// Build G[0..=K] and write it to a database file.
    Build(BuildArgs),
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[arg(long = "max-cost")]
    pub max_cost: u32,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub search: SearchArgs,
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Table(a) => commands::table(&a, out),
        Command::Synth(a) => commands::synth(&a, out),
        Command::Eval(a) => commands::eval(&a, out),
        Command::Universal(a) => commands::universal(&a, out),
        Command::ClassifyG4(a) => commands::classify_g4(&a.db, out),
        Command::Verify(a) => commands::verify(&a, out),
        Command::Db(DbCommand::Build(a)) => commands::db_build(&a, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = run(cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
