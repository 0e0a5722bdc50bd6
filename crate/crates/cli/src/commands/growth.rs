use std::path::PathBuf;

use anyhow::Result;
use bh_core::growth::{fit_growth, growth_table, FitModel, FitResult, GrowthSeries};
use bh_core::Caps;
use clap::Parser;
use serde::Serialize;

use crate::commands::Verdict;
use crate::options::{emit, parse_format, parse_map, FileConfig, Format};

#[derive(Debug, Parser)]
pub struct Args {
    /// Map: shorthand or JSON.
    #[arg(long, default_value = "smooth:1,0.5")]
    map: String,
    /// Smallest power (the table walks powers of two from here).
    #[arg(long, default_value_t = 16)]
    n_min: i64,
    /// Largest power.
    #[arg(long, default_value_t = 1024)]
    n_max: i64,
    /// Relative grid-doubling convergence tolerance.
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    /// Output file (stdout otherwise).
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv: one `n,norm,grid,converged` row per power; json adds the fits.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Config file (JSON or TOML); fields present there override flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Serialize)]
struct GrowthReport {
    #[serde(flatten)]
    series: GrowthSeries,
    fits: Fits,
}

#[derive(Serialize)]
struct Fits {
    constant: Option<FitResult>,
    log: Option<FitResult>,
    power: Option<FitResult>,
}

pub fn run(args: Args) -> Result<Verdict> {
    let file = FileConfig::load(args.config.as_deref())?;
    let map_spec = match file.map {
        Some(spec) => spec,
        None => parse_map(&args.map)?,
    };
    let n_min = file.n_min.unwrap_or(args.n_min);
    let n_max = file.n_max.unwrap_or(args.n_max);
    let tol = file.tol.unwrap_or(args.tol);
    let out = file.out.or(args.out);
    let format = parse_format(&file.format.unwrap_or(args.format))?;

    if n_min < 1 || n_max < n_min {
        anyhow::bail!("need 1 <= n-min <= n-max, got {n_min}..{n_max}");
    }
    let mut powers = Vec::new();
    let mut n = n_min;
    while n <= n_max {
        powers.push(n);
        n = n.saturating_mul(2);
    }

    let map = map_spec.to_map().map_err(|e| anyhow::anyhow!("{e}"))?;
    let caps = Caps::from_env();
    let series = growth_table(&map, &powers, tol, &caps).map_err(|e| anyhow::anyhow!("{e}"))?;

    let fits = Fits {
        constant: fit_growth(&series, FitModel::Constant).ok(),
        log: fit_growth(&series, FitModel::Log).ok(),
        power: fit_growth(&series, FitModel::Power).ok(),
    };
    for (name, fit) in [
        ("constant", &fits.constant),
        ("log", &fits.log),
        ("power", &fits.power),
    ] {
        match fit {
            Some(fit) => eprintln!(
                "fit {name}: coefficient={} exponent={:?} offset={:?} residual={}",
                fit.coefficient, fit.exponent, fit.offset, fit.residual
            ),
            None => eprintln!("fit {name}: unavailable (needs 4 converged entries)"),
        }
    }

    match format {
        Format::Csv => {
            let mut csv = String::from("n,norm,grid,converged\n");
            for e in &series.entries {
                csv.push_str(&format!("{},{},{},{}\n", e.n, e.norm, e.grid, e.converged));
            }
            emit(out.as_deref(), &csv)?;
        }
        Format::Json => {
            let report = GrowthReport { series, fits };
            emit(
                out.as_deref(),
                &(serde_json::to_string_pretty(&report)? + "\n"),
            )?;
        }
    }
    Ok(Verdict::AllCertificatesHold)
}
