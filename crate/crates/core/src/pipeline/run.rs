//! End-to-end pipeline driver and its serializable report.

use serde::{Deserialize, Serialize};

use crate::config::{Caps, Gated, Skip, Tolerances};
use crate::cyclic::TAU;
use crate::error::{Error, Result};
use crate::maps::MapSpec;
use crate::pipeline::certs::{
    linearity_defect_integral, measure_lower_bound_certificate, norm_transfer_certificate,
    section_bound_survey, MeasureBoundReport, NormTransferReport, SectionSurvey,
};
use crate::pipeline::phi::{rational_approximant, RationalSampling};
use crate::pipeline::triple::{indicator_identity_check, unity_level_set, IdentityReport};

/// Inputs of one pipeline run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub map: MapSpec,
    /// Grid order N.
    pub order: usize,
    /// Approximation parameter D.
    pub d: u64,
    /// Denominator search budget.
    pub budget: u64,
}

/// Deliberate corruption applied between stages, to demonstrate that the
/// certificates detect inconsistent inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FaultInjection {
    #[default]
    None,
    /// Corrupt one numerator after the level set is built; the indicator
    /// identity must then fail.
    CorruptNumerator,
}

/// Approximant stage outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApproximantOutcome {
    Built {
        q: u64,
        sup_error: f64,
        /// Certified bound `2*pi / (D*Q)`.
        sup_error_bound: f64,
        sup_error_within_bound: bool,
    },
    BudgetExhausted {
        budget: u64,
        best_q: u64,
        best_max_error: f64,
    },
}

/// Level-set summary with its structural invariants.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelSetSummary {
    pub measure: f64,
    pub delta: f64,
    pub count: u64,
    pub diagonal_contained: bool,
    pub swap_symmetric: bool,
}

/// Identity stage with its pass flag.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityOutcome {
    #[serde(flatten)]
    pub report: IdentityReport,
    pub holds: bool,
}

/// Section survey plus the comparison of section indicator norms against
/// the squared approximant norm maximum.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SurveyOutcome {
    #[serde(flatten)]
    pub survey: SectionSurvey,
    /// `M^2`, when the norm scan completed.
    pub section_anorm_bound: Option<f64>,
    pub section_anorm_holds: Option<bool>,
}

/// Stages that run once an approximant exists.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineStages {
    pub norm_transfer: Gated<NormTransferReport>,
    pub level_set: Gated<LevelSetSummary>,
    pub identity: Gated<IdentityOutcome>,
    pub measure_bound: Gated<MeasureBoundReport>,
    pub section_survey: Gated<SurveyOutcome>,
    pub defect_integral: Gated<f64>,
}

/// Full machine-readable report of one pipeline run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineReport {
    pub inputs: PipelineConfig,
    pub map_label: String,
    pub approximant: ApproximantOutcome,
    pub stages: Option<PipelineStages>,
    /// True when every executed certificate held; skipped stages do not
    /// count against it.
    pub certificates_ok: bool,
    pub failures: Vec<String>,
    pub skips: Vec<Skip>,
}

/// Runs the full pipeline. Configuration problems surface as errors; budget
/// exhaustion and cap skips are recorded in the report and are not failures.
pub fn run_pipeline(
    config: &PipelineConfig,
    caps: &Caps,
    fault: FaultInjection,
) -> Result<PipelineReport> {
    if config.order == 0 || config.d == 0 || config.budget == 0 {
        return Err(Error::InvalidConfig(
            "order, D and budget must all be positive".to_string(),
        ));
    }
    let map = config.map.to_map()?;
    let mut failures = Vec::new();
    let mut skips = Vec::new();

    let phi = match rational_approximant(&map, config.order, config.d, config.budget) {
        Ok(phi) => phi,
        Err(Error::BudgetExhausted { budget, best }) => {
            return Ok(PipelineReport {
                inputs: config.clone(),
                map_label: map.label(),
                approximant: ApproximantOutcome::BudgetExhausted {
                    budget,
                    best_q: best.q,
                    best_max_error: best.max_error,
                },
                stages: None,
                certificates_ok: true,
                failures,
                skips: vec![Skip {
                    what: "denominator search".to_string(),
                    cost: budget,
                    cap: budget,
                }],
            });
        }
        Err(other) => return Err(other),
    };

    let sup_error_bound = TAU / (config.d as f64 * phi.q() as f64);
    let sup_error_within_bound =
        phi.sup_error() <= sup_error_bound + Tolerances::DEFAULT.certificate_slack;
    if !sup_error_within_bound {
        failures.push("approximant sup error exceeds its certified bound".to_string());
    }
    let approximant = ApproximantOutcome::Built {
        q: phi.q(),
        sup_error: phi.sup_error(),
        sup_error_bound,
        sup_error_within_bound,
    };

    // Norm transfer scan (also supplies M and the envelope for later stages).
    let norm_transfer = norm_transfer_certificate(&map, &phi, config.d, caps)?;
    if let Gated::Run(report) = &norm_transfer {
        if !report.all_hold {
            failures.push("norm transfer chain violated".to_string());
        }
    }

    // Exact level set.
    let level_set_gated = unity_level_set(&phi, caps);
    let level_set = match &level_set_gated {
        Gated::Run(set) => Some(set.clone()),
        Gated::Skipped(skip) => {
            skips.push(skip.clone());
            None
        }
    };
    let level_set_summary = match &level_set {
        Some(set) => {
            let summary = LevelSetSummary {
                measure: set.measure(),
                delta: set.delta(),
                count: set.count(),
                diagonal_contained: set.contains_diagonal(),
                swap_symmetric: set.is_swap_symmetric(),
            };
            if !summary.diagonal_contained {
                failures.push("level set lost a diagonal triple".to_string());
            }
            if !summary.swap_symmetric {
                failures.push("level set is not swap symmetric".to_string());
            }
            Gated::Run(summary)
        }
        None => Gated::Skipped(level_set_gated.skip_reason().unwrap().clone()),
    };

    // Identity check: run against a deliberately corrupted approximant when
    // fault injection is requested.
    let identity = match &level_set {
        Some(set) => {
            let checked_phi: RationalSampling = match fault {
                FaultInjection::None => phi.clone(),
                FaultInjection::CorruptNumerator => phi.clone().with_corrupted_numerator(),
            };
            match indicator_identity_check(&checked_phi, set, caps)? {
                Gated::Run(report) => {
                    let holds =
                        report.max_deviation <= Tolerances::DEFAULT.identity_deviation;
                    if !holds {
                        failures.push(format!(
                            "indicator identity deviation {:.3e} exceeds {:.1e}",
                            report.max_deviation,
                            Tolerances::DEFAULT.identity_deviation
                        ));
                    }
                    Gated::Run(IdentityOutcome { report, holds })
                }
                Gated::Skipped(skip) => {
                    skips.push(skip.clone());
                    Gated::Skipped(skip)
                }
            }
        }
        None => Gated::Skipped(Skip {
            what: "indicator identity (level set unavailable)".to_string(),
            cost: 0,
            cap: 0,
        }),
    };

    // Measure lower bound needs the level set and a complete norm scan.
    let measure_bound = match (&level_set, norm_transfer.as_run()) {
        (Some(set), Some(transfer)) if transfer.complete => {
            let report = measure_lower_bound_certificate(
                set,
                transfer.max_approx_norm,
                transfer.max_map_norm,
                config.d,
            );
            if !report.sharp_holds {
                failures.push("sharp measure lower bound violated".to_string());
            }
            if !report.transfer_holds {
                failures.push("transfer-chain measure bound violated".to_string());
            }
            if !report.loose64_holds {
                failures.push("constant-64 measure bound violated".to_string());
            }
            Gated::Run(report)
        }
        _ => Gated::Skipped(Skip {
            what: "measure lower bound (needs level set and complete scan)".to_string(),
            cost: 0,
            cap: 0,
        }),
    };

    // Section survey plus indicator-norm comparison.
    let section_survey = match &level_set {
        Some(set) => {
            let survey = section_bound_survey(set)?;
            if !survey.product_bound_holds {
                failures.push("product delta bound violated on sections".to_string());
            }
            let (section_anorm_bound, section_anorm_holds) = match norm_transfer.as_run() {
                Some(transfer) if transfer.complete => {
                    let bound = transfer.max_approx_norm * transfer.max_approx_norm;
                    let holds = survey.max_section_anorm
                        <= bound + Tolerances::DEFAULT.certificate_slack;
                    if !holds {
                        failures.push(
                            "section indicator norm exceeds squared approximant norm".to_string(),
                        );
                    }
                    (Some(bound), Some(holds))
                }
                _ => (None, None),
            };
            Gated::Run(SurveyOutcome {
                survey,
                section_anorm_bound,
                section_anorm_holds,
            })
        }
        None => Gated::Skipped(Skip {
            what: "section survey (level set unavailable)".to_string(),
            cost: 0,
            cap: 0,
        }),
    };

    let defect_integral = linearity_defect_integral(&map, config.order, caps);
    if let Some(skip) = defect_integral.skip_reason() {
        skips.push(skip.clone());
    }
    if let Some(skip) = norm_transfer.skip_reason() {
        skips.push(skip.clone());
    }

    let certificates_ok = failures.is_empty();
    Ok(PipelineReport {
        inputs: config.clone(),
        map_label: map.label(),
        approximant,
        stages: Some(PipelineStages {
            norm_transfer,
            level_set: level_set_summary,
            identity,
            measure_bound,
            section_survey,
            defect_integral,
        }),
        certificates_ok,
        failures,
        skips,
    })
}

/// The `(n, A-norm of exp(i*n*phi))` table for CSV export.
pub fn approximant_norm_table(phi: &RationalSampling, max_rows: u64) -> Vec<(u64, f64)> {
    let rows = phi.q().min(max_rows);
    (0..rows)
        .map(|n| {
            let norm = crate::cyclic::a_norm(&phi.exp_sample(n as i64), 1.0)
                .expect("exponent 1 is valid");
            (n, norm)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> Caps {
        Caps::DEFAULT
    }

    fn linear_config() -> PipelineConfig {
        PipelineConfig {
            map: MapSpec::Linear { nu: 1, offset: 0.0 },
            order: 4,
            d: 4,
            budget: 100_000,
        }
    }

    #[test]
    fn linear_run_passes_every_certificate() {
        let report = run_pipeline(&linear_config(), &caps(), FaultInjection::None).unwrap();
        assert!(report.certificates_ok, "{:?}", report.failures);
        let stages = report.stages.as_ref().unwrap();
        let level_set = stages.level_set.as_run().unwrap();
        assert_eq!(level_set.measure, 1.0);
        assert_eq!(level_set.delta, 0.0);
        assert_eq!(*stages.defect_integral.as_run().unwrap(), 0.0);
    }

    #[test]
    fn smooth_run_passes_every_certificate() {
        let config = PipelineConfig {
            map: MapSpec::Smooth {
                nu: 1,
                amplitude: 0.5,
            },
            order: 6,
            d: 3,
            budget: 10_000_000,
        };
        let report = run_pipeline(&config, &caps(), FaultInjection::None).unwrap();
        assert!(report.certificates_ok, "{:?}", report.failures);
        let stages = report.stages.as_ref().unwrap();
        assert!(stages.identity.as_run().unwrap().holds);
        assert!(stages.measure_bound.as_run().unwrap().sharp_holds);
        assert!(stages.section_survey.as_run().unwrap().survey.product_bound_holds);
    }

    #[test]
    fn fault_injection_fails_the_identity() {
        // D large enough that the denominator exceeds 1; corruption is
        // invisible mod 1.
        let config = PipelineConfig {
            map: MapSpec::Smooth {
                nu: 1,
                amplitude: 0.5,
            },
            order: 5,
            d: 4,
            budget: 10_000_000,
        };
        let report = run_pipeline(&config, &caps(), FaultInjection::CorruptNumerator).unwrap();
        assert!(!report.certificates_ok);
        assert!(report
            .failures
            .iter()
            .any(|f| f.contains("indicator identity")));
    }

    #[test]
    fn budget_exhaustion_is_reported_not_fatal() {
        let config = PipelineConfig {
            map: MapSpec::Smooth {
                nu: 1,
                amplitude: 0.37,
            },
            order: 8,
            d: 50,
            budget: 3,
        };
        let report = run_pipeline(&config, &caps(), FaultInjection::None).unwrap();
        assert!(report.certificates_ok);
        assert!(report.stages.is_none());
        assert!(matches!(
            report.approximant,
            ApproximantOutcome::BudgetExhausted { budget: 3, .. }
        ));
    }

    #[test]
    fn invalid_config_is_an_error() {
        let mut config = linear_config();
        config.d = 0;
        assert!(run_pipeline(&config, &caps(), FaultInjection::None).is_err());
    }

    #[test]
    fn report_serializes_to_json() {
        let report = run_pipeline(&linear_config(), &caps(), FaultInjection::None).unwrap();
        let json = serde_json::to_string_pretty(&report).unwrap();
        assert!(json.contains("certificates_ok"));
        assert!(json.contains("defect_integral"));
    }

    #[test]
    fn norm_table_has_expected_shape() {
        let config = PipelineConfig {
            map: MapSpec::Smooth {
                nu: 1,
                amplitude: 0.5,
            },
            order: 6,
            d: 3,
            budget: 10_000_000,
        };
        let map = config.map.to_map().unwrap();
        let phi = rational_approximant(&map, config.order, config.d, config.budget).unwrap();
        let table = approximant_norm_table(&phi, 16);
        assert!(!table.is_empty());
        assert_eq!(table[0].0, 0);
        assert!((table[0].1 - 1.0).abs() < 1e-9);
    }
}
