pub mod growth;
pub mod littlewood;
pub mod operators;
pub mod pipeline;
pub mod sections;

/// Whether every executed mathematical certificate held.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    AllCertificatesHold,
    CertificateFailed,
}
