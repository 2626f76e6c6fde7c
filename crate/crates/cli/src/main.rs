// SPDX-License-Identifier: Apache-2.0
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ergmk_cli::commands::{self, Options};
use ergmk_cli::CliError;

type Handler = fn(&std::path::Path, &Options) -> Result<(), CliError>;

#[derive(Parser)]
#[command(name = "ergmk", version, about = "Continuous-time graph processes with ERGM equilibria")]
struct Cli {
    /// Worker threads for replicates and verification.
    #[arg(long, global = true, env = "ERGMK_THREADS")]
    threads: Option<usize>,
    /// Suppress the console summary.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// TOML config, or a manifest.json from an earlier run.
    config: PathBuf,
    /// Overrides sim.seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides output.dir.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a toggle process and write its event log and summary.
    Simulate(RunArgs),
    /// Solve the rate matrix exactly and compare with the closed-form
    /// equilibrium.
    Verify(RunArgs),
    /// Compare simulated time averages with Metropolis samples.
    Crosscheck(RunArgs),
    /// Simulate the contact formation process.
    Cfp(RunArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let (run, args): (Handler, RunArgs) = match cli.command {
        Command::Simulate(a) => (commands::simulate_cmd, a),
        Command::Verify(a) => (commands::verify_cmd, a),
        Command::Crosscheck(a) => (commands::crosscheck_cmd, a),
        Command::Cfp(a) => (commands::cfp_cmd, a),
    };
    let opts = Options { seed: args.seed, out: args.out, quiet: cli.quiet };
    match run(&args.config, &opts) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
