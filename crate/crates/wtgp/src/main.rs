use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use wtgp::config::{Command, Format, Overrides, ParamsFile, RunConfig};
use wtgp::{run::run, CliError, CliResult};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Capacity,
    Region,
    Transform,
    Simulate,
    Compare,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Fmt {
    Csv,
    Json,
}

/// Secrecy capacity, rate regions and finite-blocklength experiments for
/// wiretap and Gelfand-Pinsker broadcast channels.
#[derive(Debug, Parser)]
#[command(name = "wtgp", version)]
struct Args {
    command: Cmd,
    /// Channel file (JSON).
    #[arg(long)]
    channel: PathBuf,
    /// Region family tag, e.g. sd-wt or pd-ir-gp.
    #[arg(long)]
    family: Option<String>,
    /// Target state distribution: `uniform`, `induced` or a JSON file.
    #[arg(long)]
    qz: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Parameter file (JSON); flags take precedence over its values.
    #[arg(long)]
    params: Option<PathBuf>,
    /// Exact enumeration of induced joints.
    #[arg(long, conflicts_with = "mc")]
    exact: bool,
    /// Monte Carlo with this many trials per blocklength.
    #[arg(long, value_name = "TRIALS")]
    mc: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<Fmt>,
}

fn config(args: Args) -> CliResult<RunConfig> {
    let file = match &args.params {
        Some(p) => ParamsFile::load(p)?,
        None => ParamsFile::default(),
    };
    let command = match args.command {
        Cmd::Capacity => Command::Capacity,
        Cmd::Region => Command::Region,
        Cmd::Transform => Command::Transform,
        Cmd::Simulate => Command::Simulate,
        Cmd::Compare => Command::Compare,
    };
    let flags = Overrides {
        family: args.family,
        qz: args.qz,
        seed: args.seed,
        format: args.format.map(|f| match f {
            Fmt::Csv => Format::Csv,
            Fmt::Json => Format::Json,
        }),
        exact: args.exact,
        mc: args.mc,
    };
    RunConfig::resolve(command, args.channel, args.out, file, flags)
}

fn fail(e: CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cfg = match config(Args::parse()) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    match run(&cfg) {
        Ok(out) => {
            eprint!("{}", out.stderr);
            print!("{}", out.stdout);
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}
