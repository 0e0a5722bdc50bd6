//! Continuous self-maps of the circle represented by lifts.
//!
//! A map is stored as a real lift on [0, 2*pi] together with its winding
//! number nu, so `lift(t + 2*pi) = lift(t) + 2*pi*nu`. Representing maps by
//! lifts makes winding subtraction a constructor-level operation: the
//! periodic part `lift(t) - nu*t` is available in closed form per family,
//! which is what keeps the telescoping identities of the triple-grid
//! integrals exact for linear maps.
//!
//! Built-in families:
//! - linear: `nu*t + c`
//! - piecewise linear: node interpolation on a break partition of [0, 2*pi]
//! - smooth: `nu*t + a*sin(t)` (C^2; nonlinear iff `a != 0`)
//! - custom: caller-supplied evaluation hook with a declared winding and
//!   Lipschitz budget
//!
//! Continuity of fallible constructors is validated by a finite-difference
//! sweep on a 2^14-point grid against the family's Lipschitz budget.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::cyclic::{CyclicFunction, TAU};
use crate::error::{Error, Result};

const CONTINUITY_GRID: usize = 1 << 14;

type LiftFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum FamilyImpl {
    Linear {
        nu: i64,
        offset: f64,
    },
    Piecewise {
        breaks: Vec<f64>,
        values: Vec<f64>,
        slopes: Vec<f64>,
        nu: i64,
    },
    Smooth {
        nu: i64,
        amplitude: f64,
    },
    Custom {
        nu: i64,
        lift: LiftFn,
        lipschitz: f64,
        label: String,
    },
}

/// A continuous circle self-map, held as a lift plus winding number.
#[derive(Clone)]
pub struct CircleMap {
    family: FamilyImpl,
}

impl fmt::Debug for CircleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CircleMap({})", self.label())
    }
}

impl CircleMap {
    /// `lift(t) = nu*t + c`.
    pub fn linear(nu: i64, offset: f64) -> CircleMap {
        CircleMap {
            family: FamilyImpl::Linear { nu, offset },
        }
    }

    /// `lift(t) = nu*t + a*sin(t)`; nonlinear iff `a != 0`.
    pub fn smooth(nu: i64, amplitude: f64) -> CircleMap {
        CircleMap {
            family: FamilyImpl::Smooth { nu, amplitude },
        }
    }

    /// Piecewise-linear lift through the nodes `(breaks[i], values[i])`.
    ///
    /// `breaks` must increase strictly from 0 to 2*pi and the endpoint gap
    /// `values[last] - values[0]` must be an integer multiple of 2*pi; the
    /// winding number is derived from that gap.
    pub fn piecewise_linear(breaks: &[f64], values: &[f64]) -> Result<CircleMap> {
        let tol = Tolerances::DEFAULT;
        if breaks.len() < 2 {
            return Err(Error::InvalidMap(
                "need at least two break points".to_string(),
            ));
        }
        if breaks.len() != values.len() {
            return Err(Error::InvalidMap(format!(
                "{} breaks vs {} values",
                breaks.len(),
                values.len()
            )));
        }
        if (breaks[0]).abs() > tol.winding_endpoint
            || (breaks[breaks.len() - 1] - TAU).abs() > tol.winding_endpoint
        {
            return Err(Error::InvalidMap(
                "breaks must start at 0 and end at 2*pi".to_string(),
            ));
        }
        if breaks.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidMap(
                "breaks must be strictly increasing".to_string(),
            ));
        }
        let gap = values[values.len() - 1] - values[0];
        let nu = (gap / TAU).round();
        if (gap - nu * TAU).abs() > tol.winding_endpoint {
            return Err(Error::NonIntegerWinding { gap });
        }
        let mut breaks = breaks.to_vec();
        breaks[0] = 0.0;
        *breaks.last_mut().unwrap() = TAU;
        let slopes: Vec<f64> = breaks
            .windows(2)
            .zip(values.windows(2))
            .map(|(b, v)| (v[1] - v[0]) / (b[1] - b[0]))
            .collect();
        let map = CircleMap {
            family: FamilyImpl::Piecewise {
                breaks,
                values: values.to_vec(),
                slopes,
                nu: nu as i64,
            },
        };
        map.validate_continuity()?;
        Ok(map)
    }

    /// The tent map: slope 2 up to pi, flat at 2*pi afterwards (winding 1,
    /// piecewise linear but not linear).
    pub fn tent() -> CircleMap {
        CircleMap::piecewise_linear(&[0.0, std::f64::consts::PI, TAU], &[0.0, TAU, TAU])
            .expect("tent map is a valid piecewise specification")
    }

    /// Caller-supplied lift on [0, 2*pi] with declared winding and Lipschitz
    /// budget. The hook is validated for continuity and endpoint consistency.
    pub fn custom(
        label: impl Into<String>,
        nu: i64,
        lipschitz: f64,
        lift: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<CircleMap> {
        let tol = Tolerances::DEFAULT;
        let lift: LiftFn = Arc::new(lift);
        let gap = lift(TAU) - lift(0.0) - TAU * nu as f64;
        if gap.abs() > tol.winding_endpoint {
            return Err(Error::NonIntegerWinding {
                gap: lift(TAU) - lift(0.0),
            });
        }
        let map = CircleMap {
            family: FamilyImpl::Custom {
                nu,
                lift,
                lipschitz,
                label: label.into(),
            },
        };
        map.validate_continuity()?;
        Ok(map)
    }

    pub fn winding(&self) -> i64 {
        match &self.family {
            FamilyImpl::Linear { nu, .. }
            | FamilyImpl::Piecewise { nu, .. }
            | FamilyImpl::Smooth { nu, .. }
            | FamilyImpl::Custom { nu, .. } => *nu,
        }
    }

    pub fn family_tag(&self) -> &'static str {
        match &self.family {
            FamilyImpl::Linear { .. } => "linear",
            FamilyImpl::Piecewise { .. } => "piecewise_linear",
            FamilyImpl::Smooth { .. } => "smooth",
            FamilyImpl::Custom { .. } => "custom",
        }
    }

    pub fn is_linear_family(&self) -> bool {
        matches!(self.family, FamilyImpl::Linear { .. })
    }

    pub fn label(&self) -> String {
        match &self.family {
            FamilyImpl::Linear { nu, offset } => format!("linear(nu={nu}, offset={offset})"),
            FamilyImpl::Piecewise { breaks, nu, .. } => {
                format!("piecewise_linear({} pieces, nu={nu})", breaks.len() - 1)
            }
            FamilyImpl::Smooth { nu, amplitude } => {
                format!("smooth(nu={nu}, amplitude={amplitude})")
            }
            FamilyImpl::Custom { label, nu, .. } => format!("custom({label}, nu={nu})"),
        }
    }

    /// Lift value on [0, 2*pi); the wrapper extends periodically.
    fn inner(&self, t: f64) -> f64 {
        match &self.family {
            FamilyImpl::Linear { nu, offset } => *nu as f64 * t + offset,
            FamilyImpl::Piecewise {
                breaks,
                values,
                slopes,
                ..
            } => {
                let i = segment_index(breaks, t);
                values[i] + (t - breaks[i]) * slopes[i]
            }
            FamilyImpl::Smooth { nu, amplitude } => *nu as f64 * t + amplitude * t.sin(),
            FamilyImpl::Custom { lift, .. } => lift(t),
        }
    }

    /// Lift at any real `t`, using `lift(t + 2*pi*k) = lift(t) + 2*pi*k*nu`.
    pub fn lift(&self, t: f64) -> f64 {
        let k = (t / TAU).floor();
        let r = t - k * TAU;
        if k == 0.0 {
            self.inner(r)
        } else {
            self.inner(r) + k * (TAU * self.winding() as f64)
        }
    }

    /// The 2*pi-periodic part `lift(t) - nu*t`, in closed form per family.
    ///
    /// For the linear family this is the constant offset, with no float
    /// cancellation; the triple-grid integrals rely on that exactness.
    pub fn periodic_part(&self, t: f64) -> f64 {
        let k = (t / TAU).floor();
        let r = t - k * TAU;
        match &self.family {
            FamilyImpl::Linear { offset, .. } => *offset,
            FamilyImpl::Smooth { amplitude, .. } => amplitude * r.sin(),
            FamilyImpl::Piecewise { nu, .. } | FamilyImpl::Custom { nu, .. } => {
                self.inner(r) - *nu as f64 * r
            }
        }
    }

    /// A Lipschitz budget for the lift, used by grid-resolution rules and
    /// the continuity sweep.
    pub fn lipschitz_bound(&self) -> f64 {
        match &self.family {
            FamilyImpl::Linear { nu, .. } => (nu.unsigned_abs() as f64).max(1.0),
            FamilyImpl::Piecewise { slopes, .. } => slopes
                .iter()
                .map(|s| s.abs())
                .fold(1.0f64, f64::max),
            FamilyImpl::Smooth { nu, amplitude } => nu.unsigned_abs() as f64 + amplitude.abs(),
            FamilyImpl::Custom { lipschitz, .. } => *lipschitz,
        }
    }

    /// Finite-difference continuity check on a 2^14-point grid.
    pub fn validate_continuity(&self) -> Result<()> {
        let budget = self.lipschitz_bound();
        let step = TAU / CONTINUITY_GRID as f64;
        let allowed = budget * step * (1.0 + 1e-6) + 1e-9;
        let mut prev = self.inner(0.0);
        for i in 1..=CONTINUITY_GRID {
            let t = TAU * i as f64 / CONTINUITY_GRID as f64;
            let v = if i == CONTINUITY_GRID {
                self.inner(0.0) + TAU * self.winding() as f64
            } else {
                self.inner(t)
            };
            let increment = (v - prev).abs();
            if increment > allowed {
                return Err(Error::DiscontinuousLift {
                    t,
                    increment,
                    allowed,
                });
            }
            prev = v;
        }
        Ok(())
    }

    /// Lift values at the grid points `2*pi*j/N`, `j = 0..N-1`.
    pub fn sample_lift(&self, order: usize) -> Vec<f64> {
        (0..order)
            .map(|j| self.inner(TAU * j as f64 / order as f64))
            .collect()
    }

    /// Samples `exp(i*n*lift)` onto T_N; all values have unit modulus.
    pub fn exp_sample(&self, n: i64, order: usize) -> Result<CyclicFunction> {
        if order == 0 {
            return Err(Error::EmptyInput);
        }
        let lifts = self.sample_lift(order);
        CyclicFunction::new(
            lifts
                .iter()
                .map(|&phi| Complex64::cis(n as f64 * phi))
                .collect(),
        )
    }
}

fn segment_index(breaks: &[f64], t: f64) -> usize {
    // Last index i with breaks[i] <= t, clamped to a valid segment.
    match breaks.binary_search_by(|b| b.partial_cmp(&t).unwrap()) {
        Ok(i) => i.min(breaks.len() - 2),
        Err(i) => i.saturating_sub(1).min(breaks.len() - 2),
    }
}

/// Serializable map specification for CLI and experiment configs.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum MapSpec {
    Linear { nu: i64, offset: f64 },
    PiecewiseLinear { breaks: Vec<f64>, values: Vec<f64> },
    Smooth { nu: i64, amplitude: f64 },
}

impl MapSpec {
    pub fn tent() -> MapSpec {
        MapSpec::PiecewiseLinear {
            breaks: vec![0.0, std::f64::consts::PI, TAU],
            values: vec![0.0, TAU, TAU],
        }
    }

    pub fn to_map(&self) -> Result<CircleMap> {
        match self {
            MapSpec::Linear { nu, offset } => Ok(CircleMap::linear(*nu, *offset)),
            MapSpec::PiecewiseLinear { breaks, values } => {
                CircleMap::piecewise_linear(breaks, values)
            }
            MapSpec::Smooth { nu, amplitude } => Ok(CircleMap::smooth(*nu, *amplitude)),
        }
    }

    pub fn label(&self) -> String {
        match self.to_map() {
            Ok(map) => map.label(),
            Err(_) => "invalid".to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn linear_identity_and_constant() {
        let ident = CircleMap::linear(1, 0.0);
        assert_eq!(ident.winding(), 1);
        for t in [0.0, 0.5, PI, 5.0] {
            assert_abs_diff_eq!(ident.lift(t), t, epsilon = 1e-15);
        }
        let constant = CircleMap::linear(0, PI);
        assert_eq!(constant.winding(), 0);
        assert_abs_diff_eq!(constant.lift(1.7), PI, epsilon = 0.0);
    }

    #[test]
    fn linear_endpoint_gap_is_two_windings() {
        let map = CircleMap::linear(2, 0.3);
        assert_abs_diff_eq!(map.lift(TAU) - map.lift(0.0), 2.0 * TAU, epsilon = 1e-12);
    }

    #[test]
    fn tent_has_winding_one() {
        let tent = CircleMap::tent();
        assert_eq!(tent.winding(), 1);
        assert_eq!(tent.family_tag(), "piecewise_linear");
        assert_abs_diff_eq!(tent.lift(TAU) - tent.lift(0.0), TAU, epsilon = 1e-12);
    }

    #[test]
    fn single_piece_equals_linear() {
        let one_piece = CircleMap::piecewise_linear(&[0.0, TAU], &[0.0, TAU]).unwrap();
        let linear = CircleMap::linear(1, 0.0);
        for j in 0..32 {
            let t = TAU * j as f64 / 32.0;
            assert_abs_diff_eq!(one_piece.lift(t), linear.lift(t), epsilon = 1e-12);
        }
    }

    #[test]
    fn tent_samples_match_closed_form() {
        let tent = CircleMap::tent();
        let got = tent.sample_lift(8);
        // Closed form: 2t below pi, 2*pi at and above pi.
        let expect: Vec<f64> = (0..8)
            .map(|j| {
                let t = TAU * j as f64 / 8.0;
                if t < PI {
                    2.0 * t
                } else {
                    TAU
                }
            })
            .collect();
        for (g, e) in got.iter().zip(&expect) {
            assert_abs_diff_eq!(g, e, epsilon = 1e-12);
        }
    }

    #[test]
    fn piecewise_rejects_bad_specifications() {
        // Non-increasing breaks.
        assert!(CircleMap::piecewise_linear(&[0.0, 0.0, TAU], &[0.0, 1.0, TAU]).is_err());
        // Endpoint gap that is not an integer multiple of 2*pi.
        assert!(matches!(
            CircleMap::piecewise_linear(&[0.0, TAU], &[0.0, PI]),
            Err(Error::NonIntegerWinding { .. })
        ));
        // Partition not spanning [0, 2*pi].
        assert!(CircleMap::piecewise_linear(&[0.0, PI], &[0.0, TAU]).is_err());
    }

    #[test]
    fn smooth_family_evaluation() {
        let flat = CircleMap::smooth(1, 0.0);
        let linear = CircleMap::linear(1, 0.0);
        for j in 0..16 {
            let t = TAU * j as f64 / 16.0;
            assert_abs_diff_eq!(flat.lift(t), linear.lift(t), epsilon = 1e-12);
        }
        let wavy = CircleMap::smooth(1, 0.5);
        assert_abs_diff_eq!(wavy.lift(PI / 2.0), PI / 2.0 + 0.5, epsilon = 1e-12);
        let closed = CircleMap::smooth(0, 1.0);
        assert_eq!(closed.winding(), 0);
        assert_abs_diff_eq!(closed.lift(TAU), closed.lift(0.0), epsilon = 1e-12);
    }

    #[test]
    fn sample_lift_identity_and_constant() {
        let ident = CircleMap::linear(1, 0.0);
        let samples = ident.sample_lift(4);
        let expect = [0.0, PI / 2.0, PI, 3.0 * PI / 2.0];
        for (s, e) in samples.iter().zip(&expect) {
            assert_abs_diff_eq!(s, e, epsilon = 1e-15);
        }
        let constant = CircleMap::linear(0, 0.7);
        assert!(constant.sample_lift(6).iter().all(|&v| v == 0.7));

        let smooth = CircleMap::smooth(1, 0.5);
        for (j, v) in smooth.sample_lift(8).iter().enumerate() {
            let t = TAU * j as f64 / 8.0;
            assert_abs_diff_eq!(*v, t + 0.5 * t.sin(), epsilon = 1e-12);
        }
    }

    #[test]
    fn exp_sample_of_linear_map_is_a_character() {
        let map = CircleMap::linear(1, 0.0);
        let sample = map.exp_sample(1, 8).unwrap();
        let e1 = CyclicFunction::character(8, 1).unwrap();
        for (a, b) in sample.values().iter().zip(e1.values()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn exp_sample_at_zero_power_is_constant_one() {
        let map = CircleMap::smooth(2, 0.4);
        let sample = map.exp_sample(0, 16).unwrap();
        for v in sample.values() {
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn exp_sample_is_unimodular_with_unit_l2() {
        let map = CircleMap::smooth(1, 0.5);
        let sample = map.exp_sample(3, 64).unwrap();
        for v in sample.values() {
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
        assert_abs_diff_eq!(
            crate::cyclic::a_norm(&sample, 2.0).unwrap(),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn winding_endpoint_consistency_across_families() {
        let maps = [
            CircleMap::linear(3, 1.2),
            CircleMap::linear(-2, 0.0),
            CircleMap::smooth(2, 0.7),
            CircleMap::tent(),
        ];
        for map in maps {
            let gap = map.lift(TAU) - map.lift(0.0);
            assert_abs_diff_eq!(gap, TAU * map.winding() as f64, epsilon = 1e-9);
        }
    }

    #[test]
    fn exp_sample_homomorphism_in_the_power() {
        let map = CircleMap::smooth(1, 0.5);
        let n1 = 3;
        let n2 = 4;
        let lhs = map.exp_sample(n1 + n2, 32).unwrap();
        let rhs = map
            .exp_sample(n1, 32)
            .unwrap()
            .pointwise_mul(&map.exp_sample(n2, 32).unwrap())
            .unwrap();
        for (a, b) in lhs.values().iter().zip(rhs.values()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn custom_hook_is_validated() {
        let ok = CircleMap::custom("wobble", 1, 2.5, |t| t + 0.3 * (2.0 * t).sin());
        assert!(ok.is_ok());
        // Jump discontinuity must be rejected by the finite-difference sweep.
        let jump = CircleMap::custom("broken", 0, 1.0, |t| if t < PI { 0.0 } else { TAU });
        assert!(matches!(jump, Err(Error::NonIntegerWinding { .. }) | Err(Error::DiscontinuousLift { .. })));
        // Misdeclared winding.
        let bad_nu = CircleMap::custom("skew", 2, 1.0, |t| t);
        assert!(matches!(bad_nu, Err(Error::NonIntegerWinding { .. })));
    }

    #[test]
    fn map_spec_round_trip() {
        let spec = MapSpec::Smooth {
            nu: 1,
            amplitude: 0.5,
        };
        let json = serde_json::to_string(&spec).unwrap();
        assert!(json.contains("\"family\":\"smooth\""));
        let back: MapSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
        assert_eq!(back.to_map().unwrap().family_tag(), "smooth");

        let tent = MapSpec::tent().to_map().unwrap();
        assert_eq!(tent.winding(), 1);
    }

    #[test]
    fn periodic_part_of_linear_map_is_the_exact_offset() {
        let map = CircleMap::linear(5, 0.123);
        for j in 0..37 {
            let t = TAU * j as f64 / 37.0;
            assert_eq!(map.periodic_part(t), 0.123);
        }
    }
}
