use std::path::PathBuf;

use anyhow::Result;
use bh_core::sections::{exhaustive_two_factor_sweep, random_sweep, SweepReport};
use clap::Parser;
use serde::Serialize;

use crate::commands::Verdict;
use crate::options::{emit, parse_sizes, FileConfig};

#[derive(Debug, Parser)]
pub struct Args {
    /// Two-factor product swept exhaustively over all subsets.
    #[arg(long, default_value = "4x4")]
    exhaustive: String,
    /// Product swept with seeded random subsets.
    #[arg(long, default_value = "3x3x3")]
    random: String,
    /// Number of random subsets (0 disables the random sweep).
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// Seed for the random sweep; mandatory when trials > 0.
    #[arg(long)]
    seed: Option<u64>,
    /// JSON summary output (stdout otherwise).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Config file (JSON or TOML); fields present there override flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Serialize)]
struct SectionsSummary {
    exhaustive_sizes: Vec<usize>,
    exhaustive: SweepReport,
    random_sizes: Vec<usize>,
    random_trials: u64,
    seed: Option<u64>,
    random: Option<SweepReport>,
    all_hold: bool,
}

pub fn run(args: Args) -> Result<Verdict> {
    let file = FileConfig::load(args.config.as_deref())?;
    let trials = file.trials.unwrap_or(args.trials);
    let seed = file.seed.or(args.seed);
    let out = file.out.or(args.out);

    let exhaustive_sizes = parse_sizes(&args.exhaustive)?;
    if exhaustive_sizes.len() != 2 {
        anyhow::bail!("--exhaustive needs exactly two factors, e.g. 4x4");
    }
    let random_sizes = parse_sizes(&args.random)?;

    let exhaustive = exhaustive_two_factor_sweep(exhaustive_sizes[0], exhaustive_sizes[1])
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    eprintln!(
        "exhaustive {}x{}: {} subsets, {} violations, worst slack {}",
        exhaustive_sizes[0],
        exhaustive_sizes[1],
        exhaustive.instances,
        exhaustive.violations,
        exhaustive.worst_slack
    );

    let random = if trials > 0 {
        let seed = seed.ok_or_else(|| {
            anyhow::anyhow!("--seed is mandatory for the randomized sweep (trials > 0)")
        })?;
        let report =
            random_sweep(&random_sizes, trials, seed).map_err(|e| anyhow::anyhow!("{e}"))?;
        eprintln!(
            "random {:?}: {} subsets, {} violations, worst slack {}",
            random_sizes, report.instances, report.violations, report.worst_slack
        );
        Some(report)
    } else {
        None
    };

    let all_hold = exhaustive.violations == 0
        && random.as_ref().map(|r| r.violations == 0).unwrap_or(true);
    eprintln!("sections: {}", if all_hold { "PASS" } else { "FAIL" });

    let summary = SectionsSummary {
        exhaustive_sizes,
        exhaustive,
        random_sizes,
        random_trials: trials,
        seed,
        random,
        all_hold,
    };
    emit(
        out.as_deref(),
        &(serde_json::to_string_pretty(&summary)? + "\n"),
    )?;

    Ok(if all_hold {
        Verdict::AllCertificatesHold
    } else {
        Verdict::CertificateFailed
    })
}
