//! The certificate pipeline around rational grid approximants.
//!
//! Given a circle map and a grid order N, the pipeline
//!
//! 1. builds a rational approximant of the lift on the grid: values
//!    `2*pi*P_j / Q` with a common denominator found by simultaneous
//!    diophantine approximation ([`phi`]);
//! 2. certifies that phase powers of the approximant inherit A-norm bounds
//!    from the map ([`certs::norm_transfer_certificate`]);
//! 3. builds, in exact integer arithmetic, the set of grid triples where the
//!    four-point phase combination is a multiple of 2*pi, and verifies the
//!    exponential-average identity for its indicator ([`triple`]);
//! 4. bounds the measure of that set from below and its deviation from
//!    being trivial from above via section surveys ([`certs`]);
//! 5. evaluates the grid average of `|exp(i*Phi) - 1|`, the quantity whose
//!    vanishing characterizes linear maps ([`certs::linearity_defect_integral`]).
//!
//! Every stage reports both sides of its inequalities; a failed certificate
//! indicates an implementation bug, not new mathematics.

pub mod certs;
pub mod phi;
pub mod run;
pub mod triple;

pub use certs::{
    autocorr_lower_bound, interpolation_check, linearity_defect_integral,
    measure_lower_bound_certificate, norm_transfer_certificate, section_bound_survey,
    AutocorrBound, ChainCheck, InterpolationReport, MeasureBoundReport, NormTransferReport,
    SectionSurvey,
};
pub use phi::{norm_envelope, rational_approximant, NormEnvelope, RationalSampling};
pub use run::{run_pipeline, FaultInjection, PipelineConfig, PipelineReport};
pub use triple::{indicator_identity_check, unity_level_set, IdentityReport, TripleGridSet};
