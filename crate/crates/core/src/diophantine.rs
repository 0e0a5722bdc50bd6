//! Simultaneous diophantine approximation by linear scan.
//!
//! Given reals `alpha_1..alpha_N` and an integer `D >= 1`, the pigeonhole
//! argument guarantees an integer `1 <= Q <= D^N` with
//! `|alpha_j * Q - P_j| <= 1/D` for the nearest integers `P_j`. The solver
//! scans Q upward and returns the smallest qualifying Q, so results are
//! certifiable by re-verification and by an exhaustive oracle. An explicit
//! budget keeps the scan at desk scale when `D^N` is astronomical; the
//! classical regime is the special case `budget >= D^N`.
//!
//! Nearest-integer ties (exactly half-integral `alpha_j * Q`) round away
//! from zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Result of a simultaneous approximation search.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SimultaneousApprox {
    /// Common denominator.
    pub q: u64,
    /// Nearest integers to `alpha_j * q`.
    pub numerators: Vec<i64>,
    /// `max_j |alpha_j * q - numerators[j]|`.
    pub max_error: f64,
    /// Set when no Q within the budget met the `1/D` bound; the carried
    /// values are then the best seen, not a certificate.
    pub budget_exhausted: bool,
}

fn nearest_with_error(alpha: f64, q: u64) -> (i64, f64) {
    let t = alpha * q as f64;
    // f64::round ties away from zero, the documented convention.
    let p = t.round();
    (p as i64, (t - p).abs())
}

/// The qualifying comparison grants a few ulps of slack so that bounds
/// attained with equality in real arithmetic (thirds at distance exactly
/// 1/3) are not rejected for input-representation rounding.
pub fn meets_bound(max_error: f64, d: u64) -> bool {
    let target = 1.0 / d as f64;
    max_error <= target + 4.0 * f64::EPSILON * (1.0 + target)
}

fn scan_range(d: u64, n: usize, budget: u64) -> u64 {
    let pigeonhole = (1..=n).try_fold(1u64, |acc, _| acc.checked_mul(d));
    match pigeonhole {
        Some(bound) => bound.min(budget),
        None => budget,
    }
}

/// Finds the smallest `Q` in `[1, min(D^N, budget)]` with
/// `max_j dist(alpha_j * Q, Z) <= 1/D`.
///
/// When no `Q` in range qualifies, the best-seen `Q` is returned with
/// `budget_exhausted` set. The pigeonhole bound guarantees success whenever
/// `budget >= D^N`.
pub fn simultaneous_approx(
    alphas: &[f64],
    d: u64,
    budget: u64,
) -> Result<SimultaneousApprox> {
    if alphas.is_empty() {
        return Err(Error::EmptyInput);
    }
    if d < 1 || budget < 1 {
        return Err(Error::InvalidConfig(
            "D and budget must both be at least 1".to_string(),
        ));
    }
    let limit = scan_range(d, alphas.len(), budget);

    let mut best: Option<SimultaneousApprox> = None;
    for q in 1..=limit {
        let mut numerators = Vec::with_capacity(alphas.len());
        let mut max_error = 0.0f64;
        for &alpha in alphas {
            let (p, err) = nearest_with_error(alpha, q);
            numerators.push(p);
            max_error = max_error.max(err);
        }
        if meets_bound(max_error, d) {
            return Ok(SimultaneousApprox {
                q,
                numerators,
                max_error,
                budget_exhausted: false,
            });
        }
        let better = best
            .as_ref()
            .map(|b| max_error < b.max_error)
            .unwrap_or(true);
        if better {
            best = Some(SimultaneousApprox {
                q,
                numerators,
                max_error,
                budget_exhausted: true,
            });
        }
    }
    Ok(best.expect("limit >= 1, loop ran at least once"))
}

/// Independent re-verification of a solver result.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ApproxCertificate {
    /// `max_j |alpha_j * q - p_j|` recomputed from scratch.
    pub recomputed_max_error: f64,
    /// Recomputation agrees with the stored `max_error`.
    pub error_matches: bool,
    /// `recomputed_max_error <= 1/D` (waived when the budget was exhausted,
    /// since no certificate was claimed).
    pub within_bound: bool,
    /// `1 <= q <= D^N`.
    pub q_in_range: bool,
}

impl ApproxCertificate {
    pub fn ok(&self) -> bool {
        self.error_matches && self.within_bound && self.q_in_range
    }
}

/// Recomputes the error of `result` for `alphas` and checks both of the
/// certified inequalities. Used as a certificate inside the pipeline.
pub fn verify_approx(alphas: &[f64], d: u64, result: &SimultaneousApprox) -> ApproxCertificate {
    let mut recomputed = 0.0f64;
    for (&alpha, &p) in alphas.iter().zip(&result.numerators) {
        recomputed = recomputed.max((alpha * result.q as f64 - p as f64).abs());
    }
    let error_matches =
        alphas.len() == result.numerators.len() && (recomputed - result.max_error).abs() <= 1e-12;
    let within_bound = result.budget_exhausted || meets_bound(recomputed, d);
    let pigeonhole = (1..=alphas.len()).try_fold(1u64, |acc, _| acc.checked_mul(d));
    let q_in_range = result.q >= 1 && pigeonhole.map(|b| result.q <= b).unwrap_or(true);
    ApproxCertificate {
        recomputed_max_error: recomputed,
        error_matches,
        within_bound,
        q_in_range,
    }
}
