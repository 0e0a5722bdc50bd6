use std::path::PathBuf;

use anyhow::Result;
use bh_core::operators::{kernel_from_map, power_norms};
use bh_core::Caps;
use clap::Parser;

use crate::commands::Verdict;
use crate::options::{emit, parse_format, parse_map, FileConfig, Format};

#[derive(Debug, Parser)]
pub struct Args {
    /// Map whose symbol defines the kernel.
    #[arg(long, default_value = "smooth:1,0.5")]
    map: String,
    /// Sampling grid for the symbol.
    #[arg(long, default_value_t = 256)]
    grid: usize,
    /// Largest power.
    #[arg(long, default_value_t = 16)]
    n_max: u32,
    /// Extra trim threshold applied to the kernel (discarded mass is carried
    /// into the tail_mass column).
    #[arg(long)]
    kernel_eps: Option<f64>,
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

pub fn run(args: Args) -> Result<Verdict> {
    let file = FileConfig::load(args.config.as_deref())?;
    let map_spec = match file.map {
        Some(spec) => spec,
        None => parse_map(&args.map)?,
    };
    let grid = file.grid.unwrap_or(args.grid);
    let out = file.out.or(args.out);
    let format = parse_format(&file.format.unwrap_or(args.format))?;

    let map = map_spec.to_map().map_err(|e| anyhow::anyhow!("{e}"))?;
    let caps = Caps::from_env();
    let mut kernel = kernel_from_map(&map, grid).map_err(|e| anyhow::anyhow!("{e}"))?;
    if let Some(eps) = args.kernel_eps {
        kernel = kernel.trimmed(eps);
    }
    eprintln!(
        "kernel: support {} l1 {} tail {}",
        kernel.support_width(),
        kernel.l1(),
        kernel.tail_mass()
    );

    let n_max = file.n_max.map(|v| v as u32).unwrap_or(args.n_max);
    let norms = power_norms(&kernel, n_max, &caps);
    if let Some(skip) = &norms.skipped {
        eprintln!(
            "stopped at {}: cost {} exceeds cap {}",
            skip.what, skip.cost, skip.cap
        );
    }

    match format {
        Format::Csv => {
            let mut csv = String::from("n,power_norm,support_width,tail_mass\n");
            for e in &norms.entries {
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    e.n, e.norm, e.support_width, e.tail_mass
                ));
            }
            emit(out.as_deref(), &csv)?;
        }
        Format::Json => {
            emit(
                out.as_deref(),
                &(serde_json::to_string_pretty(&norms)? + "\n"),
            )?;
        }
    }
    Ok(Verdict::AllCertificatesHold)
}
