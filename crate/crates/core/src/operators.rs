//! Translation-invariant operators on summable bilateral sequences.
//!
//! Every bounded translation-invariant operator on l1(Z) is convolution with
//! a summable kernel, and the operator norm equals the kernel's l1 norm, so
//! operator powers reduce to repeated self-convolution of the kernel. Powers
//! are computed by exact convolution over explicit finite supports rather
//! than by transforms, so no circular aliasing enters the l1 norms.
//!
//! Kernels here are finitely supported truncations of the summable sequences
//! they stand for; whenever mass is dropped (trimming small sampled
//! coefficients) the discarded amount is carried on the kernel and turned
//! into a per-power perturbation bound in the reports.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{Caps, Gated, Skip, Tolerances};
use crate::cyclic::dft;
use crate::error::{Error, Result};
use crate::maps::CircleMap;

/// A finitely supported convolution kernel on Z, stored densely over a
/// contiguous offset range.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    min_offset: i64,
    weights: Vec<Complex64>,
    l1: f64,
    /// Upper bound on l1 mass discarded when this kernel was built.
    tail_mass: f64,
}

impl Kernel {
    /// Single weight at one offset.
    pub fn delta(offset: i64, weight: Complex64) -> Kernel {
        Kernel {
            min_offset: offset,
            weights: vec![weight],
            l1: weight.norm(),
            tail_mass: 0.0,
        }
    }

    /// Kernel from (offset, weight) pairs; duplicate offsets accumulate.
    pub fn from_pairs(pairs: &[(i64, Complex64)]) -> Result<Kernel> {
        if pairs.is_empty() {
            return Err(Error::EmptyInput);
        }
        let min_offset = pairs.iter().map(|&(k, _)| k).min().unwrap();
        let max_offset = pairs.iter().map(|&(k, _)| k).max().unwrap();
        let width = (max_offset - min_offset) as usize + 1;
        let mut weights = vec![Complex64::new(0.0, 0.0); width];
        for &(k, w) in pairs {
            weights[(k - min_offset) as usize] += w;
        }
        Ok(Kernel::from_dense(min_offset, weights, 0.0))
    }

    fn from_dense(min_offset: i64, weights: Vec<Complex64>, tail_mass: f64) -> Kernel {
        let l1 = weights.iter().map(|w| w.norm()).sum();
        Kernel {
            min_offset,
            weights,
            l1,
            tail_mass,
        }
    }

    pub fn min_offset(&self) -> i64 {
        self.min_offset
    }

    pub fn support_width(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn weight_at(&self, offset: i64) -> Complex64 {
        let idx = offset - self.min_offset;
        if idx < 0 || idx as usize >= self.weights.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.weights[idx as usize]
        }
    }

    /// Cached l1 norm (= operator norm on l1).
    pub fn l1(&self) -> f64 {
        self.l1
    }

    pub fn recompute_l1(&self) -> f64 {
        self.weights.iter().map(|w| w.norm()).sum()
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// Drops weights of modulus at most `eps`; the dropped mass is added to
    /// the kernel's recorded tail.
    pub fn trimmed(&self, eps: f64) -> Kernel {
        let keep: Vec<usize> = (0..self.weights.len())
            .filter(|&i| self.weights[i].norm() > eps)
            .collect();
        if keep.is_empty() {
            return Kernel {
                min_offset: self.min_offset,
                weights: vec![Complex64::new(0.0, 0.0)],
                l1: 0.0,
                tail_mass: self.tail_mass + self.l1,
            };
        }
        let first = keep[0];
        let last = *keep.last().unwrap();
        let mut dropped = 0.0;
        let mut weights = Vec::with_capacity(last - first + 1);
        for (i, &w) in self.weights.iter().enumerate() {
            let inside = i >= first && i <= last;
            if inside && w.norm() > eps {
                weights.push(w);
            } else {
                dropped += w.norm();
                if inside {
                    weights.push(Complex64::new(0.0, 0.0));
                }
            }
        }
        Kernel::from_dense(
            self.min_offset + first as i64,
            weights,
            self.tail_mass + dropped,
        )
    }
}

/// Samples the symbol `exp(i*lift)` on T_M and reads the kernel off the grid
/// spectrum, assigning frequency representatives in `(-M/2, M/2]`.
///
/// The kernel's l1 norm equals the A-norm of the sample (minus the trimmed
/// dust, which is recorded as tail mass).
pub fn kernel_from_map(map: &CircleMap, grid: usize) -> Result<Kernel> {
    if grid == 0 {
        return Err(Error::EmptyInput);
    }
    let spectrum = dft(&map.exp_sample(1, grid)?);
    let half = grid as i64 / 2;
    let pairs: Vec<(i64, Complex64)> = spectrum
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let k = k as i64;
            let offset = if k <= half { k } else { k - grid as i64 };
            (offset, c)
        })
        .collect();
    Ok(Kernel::from_pairs(&pairs)?.trimmed(Tolerances::DEFAULT.kernel_trim))
}

/// `(a * b)_k = sum_j a_j b_{k-j}`; the support is the sumset.
pub fn convolve_kernels(a: &Kernel, b: &Kernel) -> Kernel {
    let width = a.weights.len() + b.weights.len() - 1;
    let mut weights = vec![Complex64::new(0.0, 0.0); width];
    for (i, &wa) in a.weights.iter().enumerate() {
        if wa == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (j, &wb) in b.weights.iter().enumerate() {
            weights[i + j] += wa * wb;
        }
    }
    // First-order perturbation bound for the combined discarded mass.
    let tail = a.l1 * b.tail_mass + b.l1 * a.tail_mass + a.tail_mass * b.tail_mass;
    Kernel::from_dense(a.min_offset + b.min_offset, weights, tail)
}

/// One row of a power-norm table.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PowerNormEntry {
    pub n: u32,
    pub norm: f64,
    pub support_width: usize,
    /// Upper bound on how much the truncation of the base kernel can have
    /// moved this entry: `(l1 + tail)^n - l1^n`.
    pub tail_mass: f64,
}

/// Power norms together with an optional early-stop marker.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PowerNorms {
    pub entries: Vec<PowerNormEntry>,
    pub skipped: Option<Skip>,
}

/// `entries[n] = l1(u^{*n})` for `n = 0..=n_max`, by repeated convolution.
///
/// Entry 0 is the identity kernel with norm exactly 1. If a power's support
/// would exceed the configured cap the computed prefix is returned with a
/// typed skip marker.
pub fn power_norms(u: &Kernel, n_max: u32, caps: &Caps) -> PowerNorms {
    let mut entries = Vec::with_capacity(n_max as usize + 1);
    entries.push(PowerNormEntry {
        n: 0,
        norm: 1.0,
        support_width: 1,
        tail_mass: 0.0,
    });
    let mut acc = Kernel::delta(0, Complex64::new(1.0, 0.0));
    let base = u.l1();
    let padded = u.l1() + u.tail_mass();
    for n in 1..=n_max {
        let next_width = acc.support_width() + u.support_width() - 1;
        if next_width > caps.kernel_support {
            return PowerNorms {
                entries,
                skipped: Some(Skip {
                    what: format!("power {n} support"),
                    cost: next_width as u64,
                    cap: caps.kernel_support as u64,
                }),
            };
        }
        acc = convolve_kernels(&acc, u);
        entries.push(PowerNormEntry {
            n,
            norm: acc.l1(),
            support_width: acc.support_width(),
            tail_mass: padded.powi(n as i32) - base.powi(n as i32),
        });
    }
    PowerNorms {
        entries,
        skipped: None,
    }
}

/// Gated variant used by reports.
pub fn power_norms_gated(u: &Kernel, n_max: u32, caps: &Caps) -> Gated<Vec<PowerNormEntry>> {
    let result = power_norms(u, n_max, caps);
    match result.skipped {
        Some(skip) => Gated::Skipped(skip),
        None => Gated::Run(result.entries),
    }
}
