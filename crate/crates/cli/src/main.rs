//! `bh`: reproducible experiment driver for the cyclic-group certificate
//! toolkit.
//!
//! One subcommand per verification surface; every command emits
//! machine-readable CSV or JSON and is byte-deterministic under a fixed
//! seed. Exit codes: 0 when every executed certificate holds, 1 when a
//! mathematical certificate fails (an implementation-bug indicator), 2 for
//! configuration and IO errors.

mod commands;
mod options;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "bh",
    version,
    about = "Fourier-analytic linearity certificates on finite cyclic groups",
    after_help = "Cost caps honor the BH_CAP_* environment variables; \
                  a config file given with --config overrides flags."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full certificate pipeline for one map.
    Pipeline(commands::pipeline::Args),
    /// Grid-doubling growth table of circle A-norms with model fits.
    Growth(commands::growth::Args),
    /// Verification sweeps for the product-measure section bound.
    Sections(commands::sections::Args),
    /// Extremal minimum-modulus ratio search on prime grids.
    Littlewood(commands::littlewood::Args),
    /// Power norms of convolution kernels.
    Operators(commands::operators::Args),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Pipeline(args) => commands::pipeline::run(args),
        Command::Growth(args) => commands::growth::run(args),
        Command::Sections(args) => commands::sections::run(args),
        Command::Littlewood(args) => commands::littlewood::run(args),
        Command::Operators(args) => commands::operators::run(args),
    };
    match outcome {
        Ok(commands::Verdict::AllCertificatesHold) => ExitCode::SUCCESS,
        Ok(commands::Verdict::CertificateFailed) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
