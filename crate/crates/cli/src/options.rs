//! Shared option plumbing: map parsing, config files, output sinks.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use bh_core::MapSpec;
use serde::Deserialize;

/// Parses `--map`: either an inline JSON object (`{"family": ...}`) or one
/// of the shorthands `linear[:NU[,OFFSET]]`, `smooth[:NU[,AMPLITUDE]]`,
/// `tent`.
pub fn parse_map(raw: &str) -> Result<MapSpec> {
    let trimmed = raw.trim();
    if trimmed.starts_with('{') {
        return serde_json::from_str(trimmed).context("invalid map JSON");
    }
    let (family, params) = match trimmed.split_once(':') {
        Some((family, params)) => (family, Some(params)),
        None => (trimmed, None),
    };
    let numbers: Vec<f64> = match params {
        Some(list) => list
            .split(',')
            .map(|p| p.trim().parse::<f64>().context("invalid map parameter"))
            .collect::<Result<_>>()?,
        None => Vec::new(),
    };
    let spec = match family {
        "linear" => MapSpec::Linear {
            nu: *numbers.first().unwrap_or(&1.0) as i64,
            offset: *numbers.get(1).unwrap_or(&0.0),
        },
        "smooth" => MapSpec::Smooth {
            nu: *numbers.first().unwrap_or(&1.0) as i64,
            amplitude: *numbers.get(1).unwrap_or(&0.5),
        },
        "tent" => MapSpec::tent(),
        other => bail!(
            "unknown map shorthand '{other}' (expected linear, smooth, tent, or a JSON object)"
        ),
    };
    // Surface invalid parameters now rather than at first use.
    spec.to_map().map_err(|e| anyhow::anyhow!("{e}"))?;
    Ok(spec)
}

/// Optional config file; any field present overrides the corresponding flag.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub map: Option<MapSpec>,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    #[serde(rename = "D")]
    pub d: Option<u64>,
    pub budget: Option<u64>,
    pub n_min: Option<i64>,
    pub n_max: Option<i64>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub strategy: Option<String>,
    pub grid: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<FileConfig> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let raw = fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let parsed = if path.extension().and_then(|e| e.to_str()) == Some("toml") {
            toml::from_str(&raw).context("invalid TOML config")?
        } else {
            serde_json::from_str(&raw).context("invalid JSON config")?
        };
        Ok(parsed)
    }
}

/// Report format selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn parse_format(name: &str) -> Result<Format> {
    match name {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        other => bail!("unknown format '{other}' (expected csv or json)"),
    }
}

/// Writes to `--out` when given, otherwise prints to stdout.
pub fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    fs::create_dir_all(parent)
                        .with_context(|| format!("cannot create {}", parent.display()))?;
                }
            }
            fs::write(path, content)
                .with_context(|| format!("cannot write {}", path.display()))?;
        }
        None => print!("{content}"),
    }
    Ok(())
}

/// Parses sizes like "4x4" or "3x3x3".
pub fn parse_sizes(raw: &str) -> Result<Vec<usize>> {
    raw.split('x')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .with_context(|| format!("invalid size component '{part}'"))
        })
        .collect()
}
