//! Minimum-modulus experiments on prime-order grids.
//!
//! On T_N with N prime, mean-zero real functions cannot stay uniformly far
//! from zero relative to their A-norm: the known envelope is
//! `c * (log log N / log N)^(1/3)`, with an unknown constant `c`. This module
//! never asserts the inequality itself; it computes the ratio
//! `min_t |f(t)| / a_norm(f, 1)` exactly as defined, the indicator variant
//! `delta(E) / a_norm(1_E, 1)`, and runs deterministic extremal searches so
//! the trend against the envelope (and the conjectured `1 / log N`
//! alternative) is inspectable in tables.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::cyclic::{a_norm, dft, CyclicFunction};
use crate::error::{Error, Result};

/// Smallest N for which the main envelope is reported; below it the double
/// logarithm is too close to zero to be meaningful.
pub const ENVELOPE_MIN_N: usize = 17;

/// `(log log N / log N)^(1/3)` with natural logarithms, for `N >= 17`.
pub fn envelope(n: usize) -> Option<f64> {
    if n < ENVELOPE_MIN_N {
        return None;
    }
    let ln = (n as f64).ln();
    Some((ln.ln() / ln).powf(1.0 / 3.0))
}

/// The conjectured sharper envelope `1 / log N`.
pub fn envelope_alt(n: usize) -> Option<f64> {
    if n < 2 {
        return None;
    }
    Some(1.0 / (n as f64).ln())
}

/// Trial-division primality check; the grids used here are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// `min_t |f(t)| / a_norm(f, 1)` for a real, mean-zero, not identically
/// zero function. The ratio never exceeds 1 since
/// `min |f| <= l2 norm = a_norm(f, 2) <= a_norm(f, 1)`.
pub fn min_modulus_ratio(f: &CyclicFunction) -> Result<f64> {
    let tol = Tolerances::DEFAULT;
    let values = f.real_values(tol.imag_residue)?;
    let mean = f.mean().re.abs();
    if mean > tol.mean_zero {
        return Err(Error::NonzeroMean(mean));
    }
    if values.iter().all(|&v| v == 0.0) {
        return Err(Error::Degenerate("ratio undefined for the zero function"));
    }
    let min_abs = values.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
    Ok(min_abs / a_norm(f, 1.0)?)
}

/// The `(delta, a_norm, ratio)` triple for an indicator function.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct IndicatorRatio {
    pub delta: f64,
    pub a_norm: f64,
    pub ratio: f64,
}

/// Computes `delta(E)`, the A-norm of the indicator, and their ratio.
///
/// The measure is read off the zero coefficient of the indicator's spectrum.
/// Degenerate sets (empty or full) have `delta = 0` and ratio 0.
pub fn indicator_delta_ratio(members: &[bool]) -> Result<IndicatorRatio> {
    if members.is_empty() {
        return Err(Error::EmptyInput);
    }
    let f = CyclicFunction::from_real(
        &members
            .iter()
            .map(|&m| if m { 1.0 } else { 0.0 })
            .collect::<Vec<_>>(),
    )?;
    let spectrum = dft(&f);
    let mu = spectrum.coeffs()[0].re;
    let delta = mu.min(1.0 - mu).max(0.0);
    let norm = spectrum.lp_norm(1.0)?;
    let ratio = if norm > 0.0 { delta / norm } else { 0.0 };
    Ok(IndicatorRatio {
        delta,
        a_norm: norm,
        ratio,
    })
}

/// Candidate families for the extremal search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Seeded Bernoulli(1/2) subsets, `trials` draws.
    RandomSets,
    /// Every interval `{a, a+1, ..., a+len-1 mod N}` with `1 <= len < N`.
    Intervals,
    /// The set of nonzero quadratic residues mod N.
    QuadraticResidues,
}

impl std::str::FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Strategy> {
        match s {
            "random_sets" => Ok(Strategy::RandomSets),
            "intervals" => Ok(Strategy::Intervals),
            "quadratic_residues" => Ok(Strategy::QuadraticResidues),
            other => Err(Error::InvalidConfig(format!(
                "unknown strategy '{other}' (expected random_sets, intervals, quadratic_residues)"
            ))),
        }
    }
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::RandomSets => "random_sets",
            Strategy::Intervals => "intervals",
            Strategy::QuadraticResidues => "quadratic_residues",
        }
    }
}

/// Best witness found by an extremal search.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ExtremalRecord {
    pub n: usize,
    pub strategy: String,
    /// Membership bitmask, bit `j` of byte `j / 8`, lowercase hex.
    pub witness_hex: String,
    pub delta: f64,
    pub a_norm: f64,
    pub ratio: f64,
    pub envelope: Option<f64>,
    pub envelope_alt: Option<f64>,
}

/// Packs a membership array into the documented hex encoding.
pub fn witness_hex(members: &[bool]) -> String {
    let mut bytes = vec![0u8; members.len().div_ceil(8)];
    for (j, &m) in members.iter().enumerate() {
        if m {
            bytes[j / 8] |= 1 << (j % 8);
        }
    }
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Maximizes `delta(E) / a_norm(1_E)` over the strategy's candidate family.
///
/// Rejects composite N (the prime hypothesis of the minimum-modulus bound).
/// Deterministic under a fixed seed; ties prefer the lexicographically
/// smallest witness encoding.
pub fn extremal_search(
    n: usize,
    trials: u64,
    strategy: Strategy,
    seed: u64,
) -> Result<ExtremalRecord> {
    if !is_prime(n as u64) {
        return Err(Error::NotPrime(n as u64));
    }
    let mut best: Option<(IndicatorRatio, Vec<bool>)> = None;
    let mut consider = |stats: IndicatorRatio, members: Vec<bool>| {
        let replace = match &best {
            None => true,
            Some((cur, cur_members)) => {
                stats.ratio > cur.ratio
                    || (stats.ratio == cur.ratio && witness_hex(&members) < witness_hex(cur_members))
            }
        };
        if replace {
            best = Some((stats, members));
        }
    };

    match strategy {
        Strategy::RandomSets => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..trials.max(1) {
                let members: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
                consider(indicator_delta_ratio(&members)?, members);
            }
        }
        Strategy::Intervals => {
            for len in 1..n {
                for start in 0..n {
                    let mut members = vec![false; n];
                    for offset in 0..len {
                        members[(start + offset) % n] = true;
                    }
                    consider(indicator_delta_ratio(&members)?, members);
                }
            }
        }
        Strategy::QuadraticResidues => {
            let mut members = vec![false; n];
            for x in 1..n {
                members[x * x % n] = true;
            }
            consider(indicator_delta_ratio(&members)?, members);
        }
    }

    let (stats, members) = best.expect("every strategy considers at least one candidate");
    Ok(ExtremalRecord {
        n,
        strategy: strategy.name().to_string(),
        witness_hex: witness_hex(&members),
        delta: stats.delta,
        a_norm: stats.a_norm,
        ratio: stats.ratio,
        envelope: envelope(n),
        envelope_alt: envelope_alt(n),
    })
}
