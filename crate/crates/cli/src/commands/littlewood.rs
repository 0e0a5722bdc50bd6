use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{Context, Result};
use bh_core::littlewood::{extremal_search, ExtremalRecord, Strategy};
use clap::Parser;

use crate::commands::Verdict;
use crate::options::{emit, parse_format, FileConfig, Format};

#[derive(Debug, Parser)]
pub struct Args {
    /// Prime grid orders, comma separated (e.g. 17,101).
    #[arg(long = "N", default_value = "17")]
    n: String,
    /// Candidate family: random_sets | intervals | quadratic_residues.
    #[arg(long, default_value = "intervals")]
    strategy: String,
    /// Trial count for the random_sets strategy.
    #[arg(long, default_value_t = 200)]
    trials: u64,
    /// Seed; mandatory for random_sets.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (stdout otherwise).
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv (documented schema) or json.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Config file (JSON or TOML); fields present there override flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn format_option(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{v}"),
        None => "na".to_string(),
    }
}

pub fn run(args: Args) -> Result<Verdict> {
    let file = FileConfig::load(args.config.as_deref())?;
    let strategy_name = file.strategy.unwrap_or(args.strategy);
    let strategy = Strategy::from_str(&strategy_name).map_err(|e| anyhow::anyhow!("{e}"))?;
    let trials = file.trials.unwrap_or(args.trials);
    let out = file.out.or(args.out);
    let format = parse_format(&file.format.unwrap_or(args.format))?;

    let orders: Vec<usize> = match file.n {
        Some(n) => vec![n],
        None => args
            .n
            .split(',')
            .map(|part| part.trim().parse::<usize>().context("invalid N"))
            .collect::<Result<_>>()?,
    };

    let seed = match strategy {
        Strategy::RandomSets => file
            .seed
            .or(args.seed)
            .ok_or_else(|| anyhow::anyhow!("--seed is mandatory for random_sets"))?,
        _ => file.seed.or(args.seed).unwrap_or(0),
    };

    let mut records: Vec<ExtremalRecord> = Vec::with_capacity(orders.len());
    for &n in &orders {
        let record =
            extremal_search(n, trials, strategy, seed).map_err(|e| anyhow::anyhow!("{e}"))?;
        eprintln!(
            "N={} strategy={} ratio={} envelope={} alt={}",
            record.n,
            record.strategy,
            record.ratio,
            format_option(record.envelope),
            format_option(record.envelope_alt),
        );
        records.push(record);
    }

    match format {
        Format::Csv => {
            let mut csv = String::from("N,strategy,best_ratio,envelope,envelope_alt,witness_hex\n");
            for r in &records {
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.n,
                    r.strategy,
                    r.ratio,
                    format_option(r.envelope),
                    format_option(r.envelope_alt),
                    r.witness_hex
                ));
            }
            emit(out.as_deref(), &csv)?;
        }
        Format::Json => {
            emit(
                out.as_deref(),
                &(serde_json::to_string_pretty(&records)? + "\n"),
            )?;
        }
    }
    Ok(Verdict::AllCertificatesHold)
}
