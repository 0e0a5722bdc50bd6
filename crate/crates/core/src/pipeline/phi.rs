//! Rational approximants of a lift on the grid, and norm envelopes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cyclic::{a_norm, CyclicFunction, TAU};
use crate::diophantine::{simultaneous_approx, verify_approx};
use crate::error::{Error, Result};
use crate::maps::CircleMap;

/// A rational sampling of a lift: grid value `j` is `2*pi*numerators[j] / q`.
///
/// `sup_error` is the sup distance to the lift it approximates; construction
/// through [`rational_approximant`] certifies `sup_error <= 2*pi / (D*q)`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RationalSampling {
    order: usize,
    q: u64,
    numerators: Vec<i64>,
    sup_error: f64,
}

impl RationalSampling {
    /// Direct constructor for fixtures and fault injection; carries no
    /// approximation certificate.
    pub fn from_parts(q: u64, numerators: Vec<i64>, sup_error: f64) -> Result<Self> {
        if numerators.is_empty() {
            return Err(Error::EmptyInput);
        }
        if q == 0 {
            return Err(Error::InvalidConfig("q must be positive".to_string()));
        }
        Ok(RationalSampling {
            order: numerators.len(),
            q,
            numerators,
            sup_error,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn numerators(&self) -> &[i64] {
        &self.numerators
    }

    pub fn sup_error(&self) -> f64 {
        self.sup_error
    }

    /// Float values `2*pi*P_j / q` of the approximant.
    pub fn values(&self) -> Vec<f64> {
        self.numerators
            .iter()
            .map(|&p| TAU * p as f64 / self.q as f64)
            .collect()
    }

    /// Samples `exp(i*n*phi)` for the approximant with integer-reduced
    /// phases: the phase of entry `j` is `2*pi * ((n*P_j) mod q) / q`, so no
    /// large-argument trigonometry enters.
    pub fn exp_sample(&self, n: i64) -> CyclicFunction {
        let q = self.q as i128;
        let values = self
            .numerators
            .iter()
            .map(|&p| {
                let reduced = (n as i128 * p as i128).rem_euclid(q) as f64;
                Complex64::cis(TAU * reduced / self.q as f64)
            })
            .collect();
        CyclicFunction::new(values).expect("order >= 1 by construction")
    }

    /// Corrupts one numerator; the fault-injection hook used to demonstrate
    /// that downstream certificates actually bite.
    pub fn with_corrupted_numerator(mut self) -> Self {
        self.numerators[0] += 1;
        self
    }
}

/// Builds the rational approximant of `map` on the order-N grid.
///
/// The scaled lift values `lift(2*pi*j/N) / (2*pi)` are fed to the
/// simultaneous-approximation solver with parameter `D`; the result is
/// re-verified and the sup error recomputed from the lift directly.
/// Budget exhaustion surfaces as [`Error::BudgetExhausted`] carrying the
/// best partial result.
pub fn rational_approximant(
    map: &CircleMap,
    order: usize,
    d: u64,
    budget: u64,
) -> Result<RationalSampling> {
    if order == 0 {
        return Err(Error::EmptyInput);
    }
    let lifts = map.sample_lift(order);
    let alphas: Vec<f64> = lifts.iter().map(|&v| v / TAU).collect();
    let approx = simultaneous_approx(&alphas, d, budget)?;
    if approx.budget_exhausted {
        return Err(Error::BudgetExhausted {
            budget,
            best: Box::new(approx),
        });
    }
    debug_assert!(verify_approx(&alphas, d, &approx).ok());
    let sup_error = lifts
        .iter()
        .zip(&approx.numerators)
        .map(|(&lift, &p)| (lift - TAU * p as f64 / approx.q as f64).abs())
        .fold(0.0f64, f64::max);
    debug_assert!(sup_error <= TAU / (d as f64 * approx.q as f64) * (1.0 + 1e-9) + 1e-12);
    Ok(RationalSampling {
        order,
        q: approx.q,
        numerators: approx.numerators,
        sup_error,
    })
}

/// Running maxima of grid A-norms of phase powers:
/// `value(n) = max over 0 <= k <= n of a_norm(exp(i*k*lift) on T_grid, 1)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormEnvelope {
    grid: usize,
    values: Vec<f64>,
}

impl NormEnvelope {
    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn value(&self, n: usize) -> f64 {
        self.values[n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Computes the norm envelope of `map` on the order-`grid` grid.
pub fn norm_envelope(map: &CircleMap, grid: usize, n_max: usize) -> Result<NormEnvelope> {
    let mut values = Vec::with_capacity(n_max + 1);
    let mut running = 0.0f64;
    for n in 0..=n_max {
        let norm = a_norm(&map.exp_sample(n as i64, grid)?, 1.0)?;
        running = running.max(norm);
        values.push(running);
    }
    Ok(NormEnvelope { grid, values })
}
