//! Harmonic analysis on finite cyclic groups with certificate-producing
//! machinery around rational approximants of circle maps.
//!
//! The crate turns a family of classical inequalities into executable,
//! re-verifiable components:
//!
//! - [`cyclic`]: transforms, `A_p` norms, convolution and coefficient
//!   folding on `T_N` (forward transform carries `1/N`; see the module doc).
//! - [`maps`]: circle self-maps represented by lifts with explicit winding
//!   numbers, plus the sampling of `exp(i*n*lift)` onto grids.
//! - [`diophantine`]: simultaneous approximation with certified minimal
//!   denominators.
//! - [`pipeline`]: rational approximants on a grid, exact level sets of the
//!   four-point phase combination, and the measure/section certificates that
//!   detect nonlinearity.
//! - [`sections`]: the product-measure bound `delta(E) <= 3^(m-1) * delta_0`
//!   for sets with small axis sections, with exhaustive and randomized
//!   verification sweeps.
//! - [`littlewood`]: minimum-modulus ratios on prime grids and extremal
//!   searches against the `(log log N / log N)^(1/3)` envelope.
//! - [`growth`]: grid-doubling lower approximations of circle `A`-norms and
//!   growth-law fits (constant, logarithmic, power).
//! - [`operators`]: translation-invariant operators on summable sequences as
//!   convolution kernels; power norms via exact repeated convolution.
//!
//! Everything is pure and immutable after construction; all tolerances live
//! in [`config::Tolerances`] and all cost caps in [`config::Caps`].

pub mod config;
pub mod cyclic;
pub mod diophantine;
pub mod error;
pub mod growth;
pub mod littlewood;
pub mod maps;
pub mod operators;
pub mod pipeline;
pub mod sections;

pub use config::{Caps, Gated, Skip, Tolerances};
pub use cyclic::{a_norm, convolve, dft, fold_circle_series, idft, CyclicFunction, Spectrum};
pub use error::{Error, Result};
pub use maps::{CircleMap, MapSpec};
