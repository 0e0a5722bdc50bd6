use std::path::PathBuf;

use anyhow::{Context, Result};
use bh_core::pipeline::{run_pipeline, rational_approximant, FaultInjection, PipelineConfig};
use bh_core::pipeline::run::approximant_norm_table;
use bh_core::{Caps, Gated};
use clap::Parser;

use crate::commands::Verdict;
use crate::options::{emit, parse_map, FileConfig};

#[derive(Debug, Parser)]
pub struct Args {
    /// Map: shorthand (linear:NU,OFFSET | smooth:NU,AMP | tent) or JSON.
    #[arg(long, default_value = "smooth:1,0.5")]
    map: String,
    /// Grid order.
    #[arg(long = "N", default_value_t = 6)]
    n: usize,
    /// Approximation parameter.
    #[arg(long = "D", default_value_t = 3)]
    d: u64,
    /// Denominator search budget.
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    /// Write the JSON report here (stdout otherwise).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the (n, approximant phase-power A-norm) table as CSV.
    #[arg(long)]
    norms_out: Option<PathBuf>,
    /// Cap on rows of the norms table.
    #[arg(long, default_value_t = 4096)]
    norms_rows: u64,
    /// Fault injection: corrupt one numerator after the level set is built,
    /// to demonstrate that the identity certificate fails loudly.
    #[arg(long)]
    corrupt_phi: bool,
    /// Config file (JSON or TOML); fields present there override flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

pub fn run(args: Args) -> Result<Verdict> {
    let file = FileConfig::load(args.config.as_deref())?;
    let map = match file.map {
        Some(spec) => spec,
        None => parse_map(&args.map)?,
    };
    let config = PipelineConfig {
        map,
        order: file.n.unwrap_or(args.n),
        d: file.d.unwrap_or(args.d),
        budget: file.budget.unwrap_or(args.budget),
    };
    let out = file.out.or(args.out);
    let caps = Caps::from_env();
    let fault = if args.corrupt_phi {
        FaultInjection::CorruptNumerator
    } else {
        FaultInjection::None
    };

    let report = run_pipeline(&config, &caps, fault).map_err(|e| anyhow::anyhow!("{e}"))?;

    // Human-readable stage lines on stderr so stdout stays machine-readable.
    if let Some(stages) = &report.stages {
        stage_line("norm-transfer", &stages.norm_transfer, |r| r.all_hold);
        stage_line("level-set", &stages.level_set, |s| {
            s.diagonal_contained && s.swap_symmetric
        });
        stage_line("identity", &stages.identity, |i| i.holds);
        stage_line("measure-bound", &stages.measure_bound, |m| {
            m.sharp_holds && m.transfer_holds && m.loose64_holds
        });
        stage_line("section-survey", &stages.section_survey, |s| {
            s.survey.product_bound_holds && s.section_anorm_holds.unwrap_or(true)
        });
        if let Gated::Run(value) = &stages.defect_integral {
            eprintln!("defect-integral: {value}");
        } else {
            eprintln!("defect-integral: skipped");
        }
    } else {
        eprintln!("approximant: budget exhausted, stages skipped");
    }
    eprintln!(
        "pipeline: {}",
        if report.certificates_ok { "PASS" } else { "FAIL" }
    );

    let json = serde_json::to_string_pretty(&report).context("report serialization")?;
    emit(out.as_deref(), &(json + "\n"))?;

    if let Some(norms_path) = &args.norms_out {
        let map = config.map.to_map().map_err(|e| anyhow::anyhow!("{e}"))?;
        match rational_approximant(&map, config.order, config.d, config.budget) {
            Ok(phi) => {
                let mut csv = String::from("n,anorm\n");
                for (n, norm) in approximant_norm_table(&phi, args.norms_rows) {
                    csv.push_str(&format!("{n},{norm}\n"));
                }
                emit(Some(norms_path), &csv)?;
            }
            Err(err) => eprintln!("norms table unavailable: {err}"),
        }
    }

    Ok(if report.certificates_ok {
        Verdict::AllCertificatesHold
    } else {
        Verdict::CertificateFailed
    })
}

fn stage_line<T>(name: &str, gated: &Gated<T>, ok: impl Fn(&T) -> bool) {
    match gated {
        Gated::Run(value) => {
            eprintln!("{name}: {}", if ok(value) { "ok" } else { "FAILED" })
        }
        Gated::Skipped(skip) => eprintln!("{name}: skipped ({} > cap {})", skip.cost, skip.cap),
    }
}
