//! Circle A-norm approximation by grid doubling, and growth-law fits.
//!
//! Restricting `exp(i*n*lift)` to T_M folds its circle Fourier series onto
//! Z_M, and folding contracts the l1 norm, so every grid value is a certified
//! lower bound for the circle norm and the values are non-decreasing along a
//! doubling sequence of grids. Convergence is detected by relative change
//! between consecutive doublings; the one-sided nature of the error is the
//! point (an unconverged value is still a valid lower bound).
//!
//! The starting grid follows the resolution rule `M0 >= 16 * (1 + |n| * L)`
//! with `L` the lift's Lipschitz budget, rounded up to a power of two.

use serde::{Deserialize, Serialize};

use crate::config::Caps;
use crate::cyclic::a_norm;
use crate::error::{Error, Result};
use crate::maps::CircleMap;

/// Multiplier in the starting-grid resolution rule.
const RESOLUTION_FACTOR: f64 = 16.0;

/// One grid-doubling approximation of a circle A-norm.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GridNorm {
    pub value: f64,
    pub grid: usize,
    pub converged: bool,
}

fn grid_a_norm(map: &CircleMap, n: i64, grid: usize) -> Result<f64> {
    // Powers of a linear map are single characters: the grid norm is exactly
    // one at every grid, no transform needed. The numeric path below is
    // cross-checked against this in the tests.
    if n == 0 || map.is_linear_family() {
        return Ok(1.0);
    }
    a_norm(&map.exp_sample(n, grid)?, 1.0)
}

/// Approximates the circle A-norm of `exp(i*n*lift)` from below.
///
/// Doubles the grid until the relative change drops under `tolerance` or the
/// configured grid cap is reached; in the capped case the best value is
/// returned with `converged == false`.
pub fn circle_a_norm(map: &CircleMap, n: i64, tolerance: f64, caps: &Caps) -> Result<GridNorm> {
    if !(tolerance > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    let lipschitz = map.lipschitz_bound();
    let wanted = RESOLUTION_FACTOR * (1.0 + n.unsigned_abs() as f64 * lipschitz);
    let mut grid = (wanted.ceil() as usize).next_power_of_two().max(16);
    if grid > caps.grid {
        return Ok(GridNorm {
            value: grid_a_norm(map, n, caps.grid)?,
            grid: caps.grid,
            converged: false,
        });
    }
    let mut value = grid_a_norm(map, n, grid)?;
    while grid * 2 <= caps.grid {
        let next_grid = grid * 2;
        let next_value = grid_a_norm(map, n, next_grid)?;
        let change = (next_value - value).abs() / next_value.abs().max(1.0);
        grid = next_grid;
        value = next_value;
        if change < tolerance {
            return Ok(GridNorm {
                value,
                grid,
                converged: true,
            });
        }
    }
    Ok(GridNorm {
        value,
        grid,
        converged: false,
    })
}

/// One row of a growth table.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GrowthEntry {
    pub n: i64,
    pub norm: f64,
    pub grid: usize,
    pub converged: bool,
}

/// Norm approximations for an increasing list of powers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrowthSeries {
    pub map_label: String,
    pub entries: Vec<GrowthEntry>,
}

/// Runs [`circle_a_norm`] for each entry of an increasing positive `n_list`.
/// Per-entry cap failures surface as convergence flags, not errors.
pub fn growth_table(
    map: &CircleMap,
    n_list: &[i64],
    tolerance: f64,
    caps: &Caps,
) -> Result<GrowthSeries> {
    if n_list.is_empty() {
        return Err(Error::EmptyInput);
    }
    if n_list[0] <= 0 || n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidConfig(
            "n_list must be strictly increasing and positive".to_string(),
        ));
    }
    let mut entries = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let result = circle_a_norm(map, n, tolerance, caps)?;
        entries.push(GrowthEntry {
            n,
            norm: result.value,
            grid: result.grid,
            converged: result.converged,
        });
    }
    Ok(GrowthSeries {
        map_label: map.label(),
        entries,
    })
}

/// Growth models fitted to a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitModel {
    /// `norm = c`
    Constant,
    /// `norm = c * ln(n) + b`
    Log,
    /// `norm = c * n^e`
    Power,
}

impl std::str::FromStr for FitModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<FitModel> {
        match s {
            "constant" => Ok(FitModel::Constant),
            "log" => Ok(FitModel::Log),
            "power" => Ok(FitModel::Power),
            other => Err(Error::InvalidConfig(format!("unknown fit model '{other}'"))),
        }
    }
}

/// Least-squares fit of a growth model.
///
/// Residuals are always reported on the log scale so different models are
/// directly comparable; a model predicting non-positive norms gets an
/// infinite residual.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitResult {
    pub model: FitModel,
    pub coefficient: f64,
    pub exponent: Option<f64>,
    pub offset: Option<f64>,
    pub residual: f64,
}

fn linear_regression(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, mean_y - slope * mean_x)
}

fn log_scale_residual(norms: &[f64], predictions: &[f64]) -> f64 {
    let mut sum = 0.0;
    for (&v, &p) in norms.iter().zip(predictions) {
        if p <= 0.0 || v <= 0.0 {
            return f64::INFINITY;
        }
        let r = v.ln() - p.ln();
        sum += r * r;
    }
    (sum / norms.len() as f64).sqrt()
}

/// Fits `model` to the converged entries of `series` (at least 4 required).
pub fn fit_growth(series: &GrowthSeries, model: FitModel) -> Result<FitResult> {
    let usable: Vec<&GrowthEntry> = series.entries.iter().filter(|e| e.converged).collect();
    if usable.len() < 4 {
        return Err(Error::InsufficientData {
            need: 4,
            have: usable.len(),
        });
    }
    let ns: Vec<f64> = usable.iter().map(|e| e.n as f64).collect();
    let norms: Vec<f64> = usable.iter().map(|e| e.norm).collect();

    match model {
        FitModel::Constant => {
            let coefficient = norms.iter().sum::<f64>() / norms.len() as f64;
            let predictions = vec![coefficient; norms.len()];
            Ok(FitResult {
                model,
                coefficient,
                exponent: None,
                offset: None,
                residual: log_scale_residual(&norms, &predictions),
            })
        }
        FitModel::Log => {
            let xs: Vec<f64> = ns.iter().map(|&n| n.ln()).collect();
            let (slope, intercept) = linear_regression(&xs, &norms);
            let predictions: Vec<f64> = xs.iter().map(|&x| slope * x + intercept).collect();
            Ok(FitResult {
                model,
                coefficient: slope,
                exponent: None,
                offset: Some(intercept),
                residual: log_scale_residual(&norms, &predictions),
            })
        }
        FitModel::Power => {
            let xs: Vec<f64> = ns.iter().map(|&n| n.ln()).collect();
            let ys: Vec<f64> = norms.iter().map(|&v| v.ln()).collect();
            let (slope, intercept) = linear_regression(&xs, &ys);
            let coefficient = intercept.exp();
            let predictions: Vec<f64> = xs
                .iter()
                .map(|&x| coefficient * (slope * x).exp())
                .collect();
            Ok(FitResult {
                model,
                coefficient,
                exponent: Some(slope),
                offset: None,
                residual: log_scale_residual(&norms, &predictions),
            })
        }
    }
}
