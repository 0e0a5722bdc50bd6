//! Sections of subsets of finite product probability spaces.
//!
//! For a set `E` in a product `X_1 x ... x X_m` write
//! `delta(E) = min(mu(E), 1 - mu(E))`. If every axis section of `E` (the
//! slice obtained by fixing all coordinates but one) has `delta <= delta_0`,
//! then `delta(E) <= 3^(m-1) * delta_0`. This module computes sections and
//! deltas for explicit membership arrays, checks the bound, exposes the
//! two-factor inequality trace behind its proof, and runs exhaustive and
//! randomized verification sweeps. A violation anywhere signals an
//! implementation bug, never new mathematics.
//!
//! Weights may be non-uniform: the bound holds for arbitrary probability
//! measures on the factors, and the test surface matches that generality.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};

/// A finite product of probability spaces, each factor a weighted finite set.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteProductSpace {
    sizes: Vec<usize>,
    weights: Vec<Vec<f64>>,
}

impl FiniteProductSpace {
    /// Uniform weights on every factor.
    pub fn uniform(sizes: &[usize]) -> Result<Self> {
        let weights = sizes
            .iter()
            .map(|&s| vec![1.0 / s as f64; s])
            .collect();
        Self::with_weights(sizes, weights)
    }

    pub fn with_weights(sizes: &[usize], weights: Vec<Vec<f64>>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::EmptyInput);
        }
        if weights.len() != sizes.len() {
            return Err(Error::BadCoordinates(format!(
                "{} weight vectors for {} factors",
                weights.len(),
                sizes.len()
            )));
        }
        let tol = Tolerances::DEFAULT.weight_sum;
        for (factor, (w, &s)) in weights.iter().zip(sizes).enumerate() {
            if w.len() != s {
                return Err(Error::BadCoordinates(format!(
                    "factor {factor} has {} weights for size {s}",
                    w.len()
                )));
            }
            let sum: f64 = w.iter().sum();
            if (sum - 1.0).abs() > tol || w.iter().any(|&x| x < 0.0) {
                return Err(Error::BadWeights { factor, sum });
            }
        }
        Ok(FiniteProductSpace {
            sizes: sizes.to_vec(),
            weights,
        })
    }

    pub fn factors(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn weight(&self, axis: usize, x: usize) -> f64 {
        self.weights[axis][x]
    }

    pub fn total_points(&self) -> usize {
        self.sizes.iter().product()
    }

    /// Row-major strides, last axis fastest.
    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.sizes.len()];
        for i in (0..self.sizes.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.sizes[i + 1];
        }
        strides
    }
}

/// A subset of a product space as an explicit membership array (row-major,
/// last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct ProductSubset {
    space: FiniteProductSpace,
    membership: Vec<bool>,
}

impl ProductSubset {
    pub fn new(space: FiniteProductSpace, membership: Vec<bool>) -> Result<Self> {
        if membership.len() != space.total_points() {
            return Err(Error::BadCoordinates(format!(
                "membership length {} for {} grid points",
                membership.len(),
                space.total_points()
            )));
        }
        Ok(ProductSubset { space, membership })
    }

    pub fn from_fn(space: FiniteProductSpace, mut member: impl FnMut(&[usize]) -> bool) -> Self {
        let total = space.total_points();
        let mut coords = vec![0usize; space.factors()];
        let mut membership = Vec::with_capacity(total);
        for _ in 0..total {
            membership.push(member(&coords));
            // Odometer increment, last axis fastest.
            for axis in (0..coords.len()).rev() {
                coords[axis] += 1;
                if coords[axis] < space.sizes[axis] {
                    break;
                }
                coords[axis] = 0;
            }
        }
        ProductSubset { space, membership }
    }

    pub fn full(space: FiniteProductSpace) -> Self {
        let total = space.total_points();
        ProductSubset {
            space,
            membership: vec![true; total],
        }
    }

    pub fn empty(space: FiniteProductSpace) -> Self {
        let total = space.total_points();
        ProductSubset {
            space,
            membership: vec![false; total],
        }
    }

    pub fn space(&self) -> &FiniteProductSpace {
        &self.space
    }

    pub fn membership(&self) -> &[bool] {
        &self.membership
    }

    pub fn contains(&self, coords: &[usize]) -> bool {
        let strides = self.space.strides();
        let idx: usize = coords.iter().zip(&strides).map(|(c, s)| c * s).sum();
        self.membership[idx]
    }

    /// Member and non-member mass, accumulated in one flat-order pass so the
    /// complement sees bit-identical sums with the roles swapped.
    fn masses(&self) -> (f64, f64) {
        let strides = self.space.strides();
        let mut inside_mass = 0.0;
        let mut outside_mass = 0.0;
        for (idx, &inside) in self.membership.iter().enumerate() {
            let mut weight = 1.0;
            for axis in 0..self.space.factors() {
                let coord = idx / strides[axis] % self.space.sizes[axis];
                weight *= self.space.weights[axis][coord];
            }
            if inside {
                inside_mass += weight;
            } else {
                outside_mass += weight;
            }
        }
        (inside_mass, outside_mass)
    }

    /// Product-measure of the set.
    pub fn measure(&self) -> f64 {
        self.masses().0
    }

    /// `min(mu(E), 1 - mu(E))`, with the complement mass summed directly so
    /// `delta(E) == delta(complement)` holds exactly.
    pub fn delta(&self) -> f64 {
        let (inside, outside) = self.masses();
        inside.min(outside)
    }

    pub fn complement(&self) -> ProductSubset {
        ProductSubset {
            space: self.space.clone(),
            membership: self.membership.iter().map(|&b| !b).collect(),
        }
    }
}

/// One axis section: membership over a single factor with its measure.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SectionStats {
    pub axis: usize,
    pub members: Vec<bool>,
    pub measure: f64,
    pub delta: f64,
}

/// The `axis`-section at the fixed coordinates `fixed` (all axes except
/// `axis`, in increasing axis order).
pub fn section(e: &ProductSubset, axis: usize, fixed: &[usize]) -> Result<SectionStats> {
    let space = e.space();
    let m = space.factors();
    if axis >= m {
        return Err(Error::AxisOutOfRange { axis, m });
    }
    if fixed.len() != m - 1 {
        return Err(Error::BadCoordinates(format!(
            "expected {} fixed coordinates, got {}",
            m - 1,
            fixed.len()
        )));
    }
    let mut coords = vec![0usize; m];
    let mut fixed_iter = fixed.iter();
    for (a, coord) in coords.iter_mut().enumerate() {
        if a != axis {
            let &c = fixed_iter.next().unwrap();
            if c >= space.sizes[a] {
                return Err(Error::BadCoordinates(format!(
                    "coordinate {c} out of range for axis {a}"
                )));
            }
            *coord = c;
        }
    }
    let mut members = Vec::with_capacity(space.sizes[axis]);
    let mut measure = 0.0;
    let mut complement = 0.0;
    for x in 0..space.sizes[axis] {
        coords[axis] = x;
        let inside = e.contains(&coords);
        members.push(inside);
        if inside {
            measure += space.weights[axis][x];
        } else {
            complement += space.weights[axis][x];
        }
    }
    Ok(SectionStats {
        axis,
        members,
        measure,
        delta: measure.min(complement),
    })
}

fn for_each_fixed(space: &FiniteProductSpace, axis: usize, mut visit: impl FnMut(&[usize])) {
    let other_sizes: Vec<usize> = (0..space.factors())
        .filter(|&a| a != axis)
        .map(|a| space.sizes[a])
        .collect();
    let count: usize = other_sizes.iter().product();
    let mut fixed = vec![0usize; other_sizes.len()];
    for _ in 0..count {
        visit(&fixed);
        for i in (0..fixed.len()).rev() {
            fixed[i] += 1;
            if fixed[i] < other_sizes[i] {
                break;
            }
            fixed[i] = 0;
        }
    }
}

/// Maximum section delta along one axis.
pub fn max_section_delta_axis(e: &ProductSubset, axis: usize) -> Result<f64> {
    if axis >= e.space().factors() {
        return Err(Error::AxisOutOfRange {
            axis,
            m: e.space().factors(),
        });
    }
    let mut worst = 0.0f64;
    for_each_fixed(e.space(), axis, |fixed| {
        let stats = section(e, axis, fixed).expect("coordinates generated in range");
        worst = worst.max(stats.delta);
    });
    Ok(worst)
}

/// `delta_0`: maximum section delta over all sections of all axes.
pub fn max_section_delta(e: &ProductSubset) -> f64 {
    (0..e.space().factors())
        .map(|axis| max_section_delta_axis(e, axis).expect("axis in range"))
        .fold(0.0, f64::max)
}

/// Both sides of the product bound `delta(E) <= 3^(m-1) * delta_0`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeltaBoundCheck {
    pub delta_e: f64,
    pub delta0: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Computes `delta(E)`, `delta_0`, and checks the `3^(m-1)` bound.
///
/// `holds` must always come back true; a violation is an implementation bug.
pub fn delta_bound_check(e: &ProductSubset) -> DeltaBoundCheck {
    let m = e.space().factors();
    let delta_e = e.delta();
    let delta0 = max_section_delta(e);
    let bound = 3f64.powi(m as i32 - 1) * delta0;
    DeltaBoundCheck {
        delta_e,
        delta0,
        bound,
        holds: delta_e <= bound + Tolerances::DEFAULT.certificate_slack,
    }
}

/// One verified inequality of the two-factor trace.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl InequalityCheck {
    fn new(name: &str, lhs: f64, rhs: f64) -> Self {
        InequalityCheck {
            name: name.to_string(),
            lhs,
            rhs,
            holds: lhs <= rhs + Tolerances::DEFAULT.certificate_slack,
        }
    }
}

/// Trace of the two-factor proof: partition masses, the six intermediate
/// inequalities, and the concluding dichotomy.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceRecord {
    pub delta0: f64,
    /// Mass of the first-axis points whose section is nearly full.
    pub alpha1: f64,
    /// Mass of the second-axis points whose section is nearly full.
    pub alpha2: f64,
    pub inequalities: Vec<InequalityCheck>,
    /// `alpha1 <= 2*delta0` or `alpha1 >= 1 - 2*delta0`.
    pub dichotomy_holds: bool,
    pub all_hold: bool,
}

/// Outcome of the two-factor trace.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwoFactorTrace {
    /// `delta0 >= 1/2` makes the bound `3*delta0 >= 3/2` vacuous.
    TriviallyTrue { delta0: f64 },
    Checked(TraceRecord),
}

/// Runs the two-factor partition argument numerically on a concrete set.
///
/// Requires every section of `e` to satisfy `delta <= delta0`; rejects
/// hypothesis violations. For `delta0 >= 1/2` the result is vacuously true
/// and reported as such.
pub fn two_factor_inequality_trace(e: &ProductSubset, delta0: f64) -> Result<TwoFactorTrace> {
    let space = e.space();
    if space.factors() != 2 {
        return Err(Error::BadCoordinates(format!(
            "trace needs exactly 2 factors, got {}",
            space.factors()
        )));
    }
    if delta0 >= 0.5 {
        return Ok(TwoFactorTrace::TriviallyTrue { delta0 });
    }
    let worst = max_section_delta(e);
    if worst > delta0 + Tolerances::DEFAULT.certificate_slack {
        return Err(Error::InvalidConfig(format!(
            "hypothesis violated: a section has delta {worst} > delta0 {delta0}"
        )));
    }
    let (s1, s2) = (space.sizes[0], space.sizes[1]);

    // Section measures along each axis.
    let mu2_of_row: Vec<f64> = (0..s1)
        .map(|x1| section(e, 1, &[x1]).unwrap().measure)
        .collect();
    let mu1_of_col: Vec<f64> = (0..s2)
        .map(|x2| section(e, 0, &[x2]).unwrap().measure)
        .collect();

    // Partition each axis into "nearly empty" and "nearly full" sections;
    // delta0 < 1/2 makes this a genuine dichotomy.
    let row_full: Vec<bool> = mu2_of_row.iter().map(|&m| m >= 1.0 - delta0).collect();
    let col_full: Vec<bool> = mu1_of_col.iter().map(|&m| m >= 1.0 - delta0).collect();
    let alpha1: f64 = (0..s1)
        .filter(|&x1| row_full[x1])
        .map(|x1| space.weight(0, x1))
        .sum();
    let alpha2: f64 = (0..s2)
        .filter(|&x2| col_full[x2])
        .map(|x2| space.weight(1, x2))
        .sum();

    let block_mass = |rows: &dyn Fn(usize) -> bool, cols: &dyn Fn(usize) -> bool| -> f64 {
        let mut mass = 0.0;
        for x1 in 0..s1 {
            if !rows(x1) {
                continue;
            }
            for x2 in 0..s2 {
                if cols(x2) && e.contains(&[x1, x2]) {
                    mass += space.weight(0, x1) * space.weight(1, x2);
                }
            }
        }
        mass
    };

    let over_full_rows_empty_cols = block_mass(&|x1| row_full[x1], &|x2| !col_full[x2]);
    let over_full_rows_full_cols = block_mass(&|x1| row_full[x1], &|x2| col_full[x2]);
    let over_full_rows = block_mass(&|x1| row_full[x1], &|_| true);

    let inequalities = vec![
        InequalityCheck::new(
            "mass over nearly-full rows and nearly-empty columns",
            over_full_rows_empty_cols,
            delta0 * (1.0 - alpha2),
        ),
        InequalityCheck::new(
            "mass over nearly-full rows and nearly-full columns",
            over_full_rows_full_cols,
            alpha1 * alpha2,
        ),
        InequalityCheck::new(
            "mass over nearly-full rows, combined bound",
            over_full_rows,
            delta0 * (1.0 - alpha2) + alpha1 * alpha2,
        ),
        InequalityCheck::new(
            "mass over nearly-full rows, lower bound",
            (1.0 - delta0) * alpha1,
            over_full_rows,
        ),
        InequalityCheck::new(
            "first-axis balance",
            (1.0 - delta0) * alpha1,
            delta0 * (1.0 - alpha2) + alpha1 * alpha2,
        ),
        InequalityCheck::new(
            "second-axis balance",
            (1.0 - delta0) * alpha2,
            delta0 * (1.0 - alpha1) + alpha1 * alpha2,
        ),
    ];
    let slack = Tolerances::DEFAULT.certificate_slack;
    let dichotomy_holds = alpha1 <= 2.0 * delta0 + slack || alpha1 >= 1.0 - 2.0 * delta0 - slack;
    let all_hold = dichotomy_holds && inequalities.iter().all(|c| c.holds);
    Ok(TwoFactorTrace::Checked(TraceRecord {
        delta0,
        alpha1,
        alpha2,
        inequalities,
        dichotomy_holds,
        all_hold,
    }))
}

/// Summary of a verification sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepReport {
    pub instances: u64,
    pub violations: u64,
    /// Smallest value of `bound - delta(E)` seen (tightest instance).
    pub worst_slack: f64,
    /// Largest `delta(E) / delta_0` seen over instances with `delta_0 > 0`;
    /// an empirical view of how closely the `3^(m-1)` constant is approached.
    pub worst_ratio: f64,
}

/// Checks the bound on every one of the `2^(s1*s2)` subsets of an
/// `s1 x s2` uniform product.
pub fn exhaustive_two_factor_sweep(s1: usize, s2: usize) -> Result<SweepReport> {
    let cells = s1 * s2;
    if cells == 0 || cells > 24 {
        return Err(Error::InvalidConfig(format!(
            "exhaustive sweep supports 1..=24 cells, got {cells}"
        )));
    }
    let space = FiniteProductSpace::uniform(&[s1, s2])?;
    let mut report = SweepReport {
        instances: 0,
        violations: 0,
        worst_slack: f64::INFINITY,
        worst_ratio: 0.0,
    };
    for mask in 0u64..(1u64 << cells) {
        let membership: Vec<bool> = (0..cells).map(|bit| mask >> bit & 1 == 1).collect();
        let e = ProductSubset::new(space.clone(), membership)?;
        accumulate(&mut report, &delta_bound_check(&e));
    }
    Ok(report)
}

/// Checks the bound on seeded random subsets of an arbitrary uniform product.
pub fn random_sweep(sizes: &[usize], trials: u64, seed: u64) -> Result<SweepReport> {
    let space = FiniteProductSpace::uniform(sizes)?;
    let total = space.total_points();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SweepReport {
        instances: 0,
        violations: 0,
        worst_slack: f64::INFINITY,
        worst_ratio: 0.0,
    };
    for _ in 0..trials {
        let membership: Vec<bool> = (0..total).map(|_| rng.gen_bool(0.5)).collect();
        let e = ProductSubset::new(space.clone(), membership)?;
        accumulate(&mut report, &delta_bound_check(&e));
    }
    Ok(report)
}

fn accumulate(report: &mut SweepReport, check: &DeltaBoundCheck) {
    report.instances += 1;
    if !check.holds {
        report.violations += 1;
    }
    report.worst_slack = report.worst_slack.min(check.bound - check.delta_e);
    if check.delta0 > 0.0 {
        report.worst_ratio = report.worst_ratio.max(check.delta_e / check.delta0);
    }
}
