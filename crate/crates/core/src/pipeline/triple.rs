//! The triple-grid level set and its exponential-average identity.
//!
//! For a rational sampling with values `2*pi*P_j / Q`, the four-point phase
//! combination at grid indices `(x, y, z)` is
//!
//! ```text
//! R(x, y, z) = P[x] + P[(z - x) mod N] - P[y] - P[(z - y) mod N]
//! ```
//!
//! (index subtraction is group subtraction mod N) and the level set collects
//! the triples where `exp(i * 2*pi * R / Q) = 1`, i.e. `R = 0 mod Q`.
//! Membership is decided in exact integer arithmetic; floating point enters
//! only through the cross-checking identity
//! `(1/Q) * sum over n < Q of exp(i*n*Phi) = indicator`, which holds exactly
//! in theory because every phase is a rational multiple of 2*pi.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{Caps, Gated, Skip};
use crate::cyclic::TAU;
use crate::error::{Error, Result};
use crate::pipeline::phi::RationalSampling;

/// A subset of the N x N x N index grid, stored as a flat membership array
/// with layout `(x * N + y) * N + z`.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleGridSet {
    order: usize,
    members: Vec<bool>,
    count: u64,
}

impl TripleGridSet {
    pub fn new(order: usize, members: Vec<bool>) -> Result<Self> {
        if order == 0 {
            return Err(Error::EmptyInput);
        }
        if members.len() != order * order * order {
            return Err(Error::BadCoordinates(format!(
                "{} entries for an order-{order} triple grid",
                members.len()
            )));
        }
        let count = members.iter().filter(|&&m| m).count() as u64;
        Ok(TripleGridSet {
            order,
            members,
            count,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn members(&self) -> &[bool] {
        &self.members
    }

    pub fn contains(&self, x: usize, y: usize, z: usize) -> bool {
        self.members[(x * self.order + y) * self.order + z]
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn measure(&self) -> f64 {
        self.count as f64 / (self.order * self.order * self.order) as f64
    }

    pub fn delta(&self) -> f64 {
        let mu = self.measure();
        mu.min(1.0 - mu)
    }

    /// Every diagonal triple `(x, x, z)` belongs to the set by telescoping.
    pub fn contains_diagonal(&self) -> bool {
        let n = self.order;
        (0..n).all(|x| (0..n).all(|z| self.contains(x, x, z)))
    }

    /// Swapping the first two coordinates flips the sign of the phase
    /// combination, so membership is preserved.
    pub fn is_swap_symmetric(&self) -> bool {
        let n = self.order;
        for x in 0..n {
            for y in 0..x {
                for z in 0..n {
                    if self.contains(x, y, z) != self.contains(y, x, z) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Reduced phase numerator `R mod Q` at one index triple.
fn reduced_numerator(phi: &RationalSampling, x: usize, y: usize, z: usize) -> u64 {
    let n = phi.order();
    let p = phi.numerators();
    let zx = (z + n - x) % n;
    let zy = (z + n - y) % n;
    let r = p[x] + p[zx] - p[y] - p[zy];
    r.rem_euclid(phi.q() as i64) as u64
}

/// Builds the level set `{(x,y,z) : R = 0 mod Q}` in exact integer
/// arithmetic. Gated by the triple-grid cost cap.
pub fn unity_level_set(phi: &RationalSampling, caps: &Caps) -> Gated<TripleGridSet> {
    let n = phi.order();
    let points = (n as u64).pow(3);
    if points > caps.triple_points {
        return Gated::Skipped(Skip {
            what: "triple-grid level set".to_string(),
            cost: points,
            cap: caps.triple_points,
        });
    }
    let mut members = Vec::with_capacity(points as usize);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                members.push(reduced_numerator(phi, x, y, z) == 0);
            }
        }
    }
    Gated::Run(TripleGridSet::new(n, members).expect("sizes consistent by construction"))
}

/// Result of evaluating the exponential-average identity on every triple.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct IdentityReport {
    pub q: u64,
    pub triples: u64,
    /// `max over triples of |(1/Q) sum_n exp(i*n*Phi) - indicator|`.
    pub max_deviation: f64,
}

/// Evaluates `(1/Q) * sum over n < Q of exp(i*n*Phi)` at every grid triple
/// and returns the maximal deviation from the exact indicator.
///
/// Exact in theory; only float error shows up. The cost is `Q * N^3`,
/// gated by the identity cap. Phases are reduced mod Q in integers before
/// any trigonometry.
pub fn indicator_identity_check(
    phi: &RationalSampling,
    level_set: &TripleGridSet,
    caps: &Caps,
) -> Result<Gated<IdentityReport>> {
    if phi.order() != level_set.order() {
        return Err(Error::OrderMismatch {
            left: phi.order(),
            right: level_set.order(),
        });
    }
    let n = phi.order();
    let q = phi.q();
    let points = (n as u64).pow(3);
    let cost = q.saturating_mul(points);
    if cost > caps.identity_qn3 {
        return Ok(Gated::Skipped(Skip {
            what: "indicator identity".to_string(),
            cost,
            cap: caps.identity_qn3,
        }));
    }

    // The average depends on the triple only through R mod Q; memoize it.
    let mut averages: Vec<Option<Complex64>> = vec![None; q as usize];
    let mut max_deviation = 0.0f64;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let r = reduced_numerator(phi, x, y, z);
                let average = *averages[r as usize].get_or_insert_with(|| {
                    let mut sum = Complex64::new(0.0, 0.0);
                    for k in 0..q {
                        let phase = (k * r) % q;
                        sum += Complex64::cis(TAU * phase as f64 / q as f64);
                    }
                    sum / q as f64
                });
                let indicator = if level_set.contains(x, y, z) { 1.0 } else { 0.0 };
                let deviation = (average - Complex64::new(indicator, 0.0)).norm();
                max_deviation = max_deviation.max(deviation);
            }
        }
    }
    Ok(Gated::Run(IdentityReport {
        q,
        triples: points,
        max_deviation,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::CircleMap;
    use crate::pipeline::phi::rational_approximant;

    fn caps() -> Caps {
        Caps::DEFAULT
    }

    #[test]
    fn linear_map_level_set_is_the_full_cube() {
        // The four-point combination telescopes identically for linear maps.
        let map = CircleMap::linear(1, 0.0);
        let phi = rational_approximant(&map, 4, 4, 1_000).unwrap();
        let set = unity_level_set(&phi, &caps());
        let set = set.as_run().unwrap();
        assert_eq!(set.measure(), 1.0);
        assert_eq!(set.delta(), 0.0);
    }

    #[test]
    fn diagonal_and_swap_symmetry_always_hold() {
        for (map, order, d) in [
            (CircleMap::smooth(1, 0.5), 6usize, 3u64),
            (CircleMap::tent(), 6, 2),
            (CircleMap::smooth(2, 0.9), 5, 2),
        ] {
            let phi = rational_approximant(&map, order, d, 1_000_000).unwrap();
            let set = unity_level_set(&phi, &caps());
            let set = set.as_run().unwrap();
            assert!(set.contains_diagonal(), "{}", map.label());
            assert!(set.is_swap_symmetric(), "{}", map.label());
        }
    }

    #[test]
    fn membership_matches_float_oracle() {
        let map = CircleMap::smooth(1, 0.5);
        let phi = rational_approximant(&map, 6, 3, 1_000_000).unwrap();
        let set = unity_level_set(&phi, &caps());
        let set = set.as_run().unwrap();

        // Float oracle: evaluate exp(i*Phi) from the approximant values and
        // test closeness to 1. Non-members are separated from 1 by at least
        // 2*sin(pi/Q), far above float noise at these sizes.
        let values = phi.values();
        let n = phi.order();
        let threshold = (std::f64::consts::PI / phi.q() as f64).sin();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let phase = values[x] + values[(z + n - x) % n]
                        - values[y]
                        - values[(z + n - y) % n];
                    let close = (Complex64::cis(phase) - Complex64::new(1.0, 0.0)).norm()
                        < threshold;
                    assert_eq!(close, set.contains(x, y, z), "({x},{y},{z})");
                }
            }
        }
    }

    #[test]
    fn identity_for_denominator_one_is_trivial() {
        let phi = RationalSampling::from_parts(1, vec![0, 0, 0], 0.0).unwrap();
        let set = unity_level_set(&phi, &caps());
        let set = set.as_run().unwrap();
        assert_eq!(set.measure(), 1.0);
        let report = indicator_identity_check(&phi, set, &caps()).unwrap();
        let report = report.as_run().unwrap();
        assert!(report.max_deviation < 1e-15);
    }

    #[test]
    fn identity_for_denominator_two_takes_both_values() {
        // Values 0 and pi: the two-term average is exactly 0 or 1.
        let phi = RationalSampling::from_parts(2, vec![0, 1, 0], 0.0).unwrap();
        let set = unity_level_set(&phi, &caps());
        let set = set.as_run().unwrap();
        assert!(set.delta() > 0.0);
        let report = indicator_identity_check(&phi, set, &caps()).unwrap();
        let report = report.as_run().unwrap();
        assert!(report.max_deviation < 1e-12);
    }

    #[test]
    fn identity_holds_for_a_smooth_approximant() {
        let map = CircleMap::smooth(1, 0.5);
        let phi = rational_approximant(&map, 5, 2, 1_000_000).unwrap();
        let set = unity_level_set(&phi, &caps());
        let set = set.as_run().unwrap();
        let report = indicator_identity_check(&phi, set, &caps()).unwrap();
        let report = report.as_run().unwrap();
        assert!(report.max_deviation <= 1e-9, "{}", report.max_deviation);
    }

    #[test]
    fn identity_detects_a_corrupted_approximant() {
        let map = CircleMap::smooth(1, 0.5);
        let phi = rational_approximant(&map, 5, 4, 1_000_000).unwrap();
        assert!(phi.q() > 1, "corruption is invisible mod 1");
        let set = unity_level_set(&phi, &caps());
        let set = set.as_run().unwrap();
        let corrupted = phi.clone().with_corrupted_numerator();
        let report = indicator_identity_check(&corrupted, set, &caps()).unwrap();
        let report = report.as_run().unwrap();
        assert!(report.max_deviation > 0.5, "{}", report.max_deviation);
    }

    #[test]
    fn cost_caps_produce_typed_skips() {
        let phi = RationalSampling::from_parts(100, vec![0; 10], 0.0).unwrap();
        let tight = Caps {
            triple_points: 999,
            identity_qn3: 10,
            ..Caps::DEFAULT
        };
        assert!(unity_level_set(&phi, &tight).is_skipped());

        let set = unity_level_set(&phi, &Caps::DEFAULT);
        let set = set.as_run().unwrap();
        let gated = indicator_identity_check(&phi, set, &tight).unwrap();
        let skip = gated.skip_reason().expect("identity must be skipped");
        assert_eq!(skip.cost, 100 * 1000);
    }
}
