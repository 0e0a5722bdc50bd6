//! Centralized numeric tolerances and cost caps.
//!
//! Every tolerance constant used by the library lives in [`Tolerances`]; the
//! handful of operations whose cost is cubic or worse in their parameters are
//! gated by [`Caps`] and return [`Gated::Skipped`] instead of silently
//! subsampling when a cap would be exceeded.

use serde::{Deserialize, Serialize};

/// All tolerance constants in one record.
///
/// Operations read `Tolerances::DEFAULT` unless a caller passes an explicit
/// tolerance parameter (only grid-doubling convergence takes one).
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Relative agreement required between transforms and quadratic oracles.
    pub transform_rel: f64,
    /// Max deviation allowed in the exponential-average indicator identity.
    pub identity_deviation: f64,
    /// Additive slack granted to certified inequalities (float headroom).
    pub certificate_slack: f64,
    /// Relative agreement between the fourth-power norm and the triple average.
    pub autocorr_rel: f64,
    /// Largest imaginary residue tolerated in quantities that are real in
    /// exact arithmetic.
    pub imag_residue: f64,
    /// Modulus drift tolerated in unimodular samples.
    pub unimodular: f64,
    /// Endpoint residual tolerated when deriving a winding number.
    pub winding_endpoint: f64,
    /// Probability-vector sum residual.
    pub weight_sum: f64,
    /// Drift tolerated between a cached l1 value and its recomputation.
    pub cached_l1: f64,
    /// Mean-zero precondition threshold.
    pub mean_zero: f64,
    /// Coefficients below this magnitude are dropped when a sampled spectrum
    /// is converted to a kernel; the dropped mass is recorded, not lost.
    pub kernel_trim: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        transform_rel: 1e-10,
        identity_deviation: 1e-9,
        certificate_slack: 1e-9,
        autocorr_rel: 1e-8,
        imag_residue: 1e-10,
        unimodular: 1e-12,
        winding_endpoint: 1e-9,
        weight_sum: 1e-12,
        cached_l1: 1e-12,
        mean_zero: 1e-10,
        kernel_trim: 1e-13,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances::DEFAULT
    }
}

/// Cost caps for the expensive operations.
///
/// Each cap can be overridden through an environment variable (see
/// [`Caps::from_env`]); an operation whose cost would exceed its cap returns
/// a typed [`Gated::Skipped`] outcome.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Caps {
    /// Cap on Q * N^3, the cost of evaluating the indicator identity.
    pub identity_qn3: u64,
    /// Cap on N^3, the cost of building or averaging over the triple grid.
    pub triple_points: u64,
    /// Cap on the number of phase powers scanned when computing norm maxima.
    pub norm_scan_q: u64,
    /// Largest grid admitted by the grid-doubling norm approximation.
    pub grid: usize,
    /// Largest kernel support admitted by repeated convolution.
    pub kernel_support: usize,
}

impl Caps {
    pub const DEFAULT: Caps = Caps {
        identity_qn3: 10_000_000,
        triple_points: 1 << 25,
        norm_scan_q: 1 << 18,
        grid: 1 << 20,
        kernel_support: 1 << 20,
    };

    /// Defaults with per-field environment overrides:
    /// `BH_CAP_IDENTITY_QN3`, `BH_CAP_TRIPLE_POINTS`, `BH_CAP_NORM_SCAN_Q`,
    /// `BH_CAP_GRID`, `BH_CAP_KERNEL_SUPPORT`.
    pub fn from_env() -> Caps {
        fn read<T: std::str::FromStr>(name: &str, fallback: T) -> T {
            match std::env::var(name) {
                Ok(raw) => raw.parse().unwrap_or(fallback),
                Err(_) => fallback,
            }
        }
        let d = Caps::DEFAULT;
        Caps {
            identity_qn3: read("BH_CAP_IDENTITY_QN3", d.identity_qn3),
            triple_points: read("BH_CAP_TRIPLE_POINTS", d.triple_points),
            norm_scan_q: read("BH_CAP_NORM_SCAN_Q", d.norm_scan_q),
            grid: read("BH_CAP_GRID", d.grid),
            kernel_support: read("BH_CAP_KERNEL_SUPPORT", d.kernel_support),
        }
    }
}

impl Default for Caps {
    fn default() -> Self {
        Caps::DEFAULT
    }
}

/// Record of a capped operation that was not run.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Skip {
    pub what: String,
    pub cost: u64,
    pub cap: u64,
}

/// Outcome of a cost-gated operation.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gated<T> {
    Run(T),
    Skipped(Skip),
}

impl<T> Gated<T> {
    pub fn as_run(&self) -> Option<&T> {
        match self {
            Gated::Run(value) => Some(value),
            Gated::Skipped(_) => None,
        }
    }

    pub fn is_skipped(&self) -> bool {
        matches!(self, Gated::Skipped(_))
    }

    pub fn skip_reason(&self) -> Option<&Skip> {
        match self {
            Gated::Run(_) => None,
            Gated::Skipped(skip) => Some(skip),
        }
    }
}
