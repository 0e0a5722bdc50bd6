//! Fourier analysis on the cyclic group T_N = {2*pi*j/N : j = 0..N-1}.
//!
//! The group carries the normalized counting measure, so integrals are plain
//! averages and the forward transform carries the 1/N factor:
//!
//! ```text
//! hat f(k) = (1/N) * sum_j f(2*pi*j/N) * exp(-2*pi*i*j*k/N)
//! f(2*pi*j/N) = sum_k hat f(k) * exp(2*pi*i*j*k/N)
//! ```
//!
//! Most FFT conventions leave the forward sum unnormalized; everything in
//! this crate assumes the probability-measure convention above. With it,
//! Parseval reads `a_norm(f, 2) == l2 norm of the values under the
//! normalized measure`, and convolution (also an average, not a plain sum)
//! turns into a pointwise product of spectra.
//!
//! Transforms are delegated to a planned FFT for every order, including
//! primes; correctness is pinned by quadratic-summation oracles in the tests,
//! not by the transform algorithm.

use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};
use std::sync::Arc;

use crate::error::{Error, Result};

pub const TAU: f64 = std::f64::consts::TAU;

fn plan(len: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    let planner = PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()));
    // The planner caches plans internally; the lock is held only to fetch one.
    planner.lock().unwrap().plan_fft(len, direction)
}

/// A complex-valued function on T_N; entry `j` is the value at `2*pi*j/N`.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicFunction {
    order: usize,
    values: Vec<Complex64>,
}

impl CyclicFunction {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(CyclicFunction {
            order: values.len(),
            values,
        })
    }

    /// Builds the function from values at the grid points `2*pi*j/N`.
    pub fn from_fn(order: usize, mut f: impl FnMut(usize) -> Complex64) -> Result<Self> {
        if order == 0 {
            return Err(Error::EmptyInput);
        }
        Ok(CyclicFunction {
            order,
            values: (0..order).map(&mut f).collect(),
        })
    }

    pub fn constant(order: usize, value: Complex64) -> Result<Self> {
        Self::from_fn(order, |_| value)
    }

    /// The character e_k, `e_k(2*pi*j/N) = exp(2*pi*i*j*k/N)`.
    pub fn character(order: usize, k: usize) -> Result<Self> {
        Self::from_fn(order, |j| {
            Complex64::cis(TAU * ((j * k % order) as f64) / order as f64)
        })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// L2 norm under the normalized counting measure.
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() / self.order as f64).sqrt()
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.order as f64
    }

    pub fn pointwise_mul(&self, other: &CyclicFunction) -> Result<CyclicFunction> {
        self.check_order(other)?;
        CyclicFunction::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        )
    }

    pub fn pointwise_sub(&self, other: &CyclicFunction) -> Result<CyclicFunction> {
        self.check_order(other)?;
        CyclicFunction::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    fn check_order(&self, other: &CyclicFunction) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    /// Errors unless every value is real to within `tol`; returns the values.
    pub fn real_values(&self, tol: f64) -> Result<Vec<f64>> {
        let residue = self.max_imag();
        if residue > tol {
            return Err(Error::NotReal(residue));
        }
        Ok(self.values.iter().map(|v| v.re).collect())
    }
}

/// Fourier coefficients of a function on T_N, indexed by k in Z_N.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    order: usize,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(Spectrum {
            order: coeffs.len(),
            coeffs,
        })
    }

    /// Spectrum with a single unit coefficient at `k`.
    pub fn delta(order: usize, k: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::EmptyInput);
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order];
        coeffs[k % order] = Complex64::new(1.0, 0.0);
        Ok(Spectrum { order, coeffs })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// l^p norm of the coefficient sequence, `p >= 1`.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0) {
            return Err(Error::InvalidExponent(p));
        }
        let sum: f64 = if p == 1.0 {
            self.coeffs.iter().map(|c| c.norm()).sum()
        } else if p == 2.0 {
            return Ok(self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt());
        } else {
            self.coeffs.iter().map(|c| c.norm().powf(p)).sum()
        };
        Ok(sum.powf(1.0 / p))
    }

    /// CSV rendering with the documented header `k,re,im`.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("k,re,im\n");
        for (k, c) in self.coeffs.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", k, c.re, c.im));
        }
        out
    }
}

/// Forward transform; carries the 1/N factor.
pub fn dft(f: &CyclicFunction) -> Spectrum {
    let n = f.order();
    let mut buf = f.values().to_vec();
    plan(n, FftDirection::Forward).process(&mut buf);
    let scale = 1.0 / n as f64;
    for c in &mut buf {
        *c *= scale;
    }
    Spectrum {
        order: n,
        coeffs: buf,
    }
}

/// Inverse transform; a plain (unnormalized) character sum.
pub fn idft(s: &Spectrum) -> CyclicFunction {
    let n = s.order();
    let mut buf = s.coeffs().to_vec();
    plan(n, FftDirection::Inverse).process(&mut buf);
    CyclicFunction {
        order: n,
        values: buf,
    }
}

/// `a_norm(f, p) = lp norm of the spectrum`; `a_norm(f, 1)` is the A(T_N)
/// norm and `a_norm(f, 2)` equals the L2 norm of the values (Parseval).
pub fn a_norm(f: &CyclicFunction, p: f64) -> Result<f64> {
    dft(f).lp_norm(p)
}

/// Convolution under the normalized measure:
/// `(f1 * f2)(t) = (1/N) sum_x f1(x) f2(t - x)`.
///
/// Its spectrum is the pointwise product of the input spectra.
pub fn convolve(f1: &CyclicFunction, f2: &CyclicFunction) -> Result<CyclicFunction> {
    f1.check_order(f2)?;
    let s1 = dft(f1);
    let s2 = dft(f2);
    let product = Spectrum {
        order: s1.order,
        coeffs: s1
            .coeffs
            .iter()
            .zip(&s2.coeffs)
            .map(|(a, b)| a * b)
            .collect(),
    };
    Ok(idft(&product))
}

/// Folds a finite piece of a circle-side Fourier series onto Z_N:
/// `coeffs[k] = sum of c_nu over nu congruent to k mod N`.
///
/// The l1 norm of the output never exceeds the l1 norm of the input, so grid
/// norms of restricted circle functions are certified lower bounds.
pub fn fold_circle_series(pairs: &[(i64, Complex64)], order: usize) -> Result<Spectrum> {
    if order == 0 {
        return Err(Error::EmptyInput);
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); order];
    for &(nu, c) in pairs {
        let k = nu.rem_euclid(order as i64) as usize;
        coeffs[k] += c;
    }
    Ok(Spectrum { order, coeffs })
}

/// Relative-agreement helper shared by certificates and tests.
pub fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Quadratic-summation oracle for the forward transform.
    fn naive_dft(f: &CyclicFunction) -> Vec<Complex64> {
        let n = f.order();
        (0..n)
            .map(|k| {
                (0..n)
                    .map(|j| {
                        f.values()[j] * Complex64::cis(-TAU * (j as f64) * (k as f64) / n as f64)
                    })
                    .sum::<Complex64>()
                    / n as f64
            })
            .collect()
    }

    fn naive_idft(s: &Spectrum) -> Vec<Complex64> {
        let n = s.order();
        (0..n)
            .map(|j| {
                (0..n)
                    .map(|k| {
                        s.coeffs()[k] * Complex64::cis(TAU * (j as f64) * (k as f64) / n as f64)
                    })
                    .sum::<Complex64>()
            })
            .collect()
    }

    fn naive_convolve(f1: &CyclicFunction, f2: &CyclicFunction) -> Vec<Complex64> {
        let n = f1.order();
        (0..n)
            .map(|t| {
                (0..n)
                    .map(|x| f1.values()[x] * f2.values()[(t + n - x) % n])
                    .sum::<Complex64>()
                    / n as f64
            })
            .collect()
    }

    fn random_function(order: usize, seed: u64) -> CyclicFunction {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        CyclicFunction::from_fn(order, |_| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
        .unwrap()
    }

    fn max_dev(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn constant_maps_to_delta_at_zero() {
        let f = CyclicFunction::constant(8, Complex64::new(1.0, 0.0)).unwrap();
        let s = dft(&f);
        assert_abs_diff_eq!(s.coeffs()[0].re, 1.0, epsilon = 1e-12);
        for k in 1..8 {
            assert!(s.coeffs()[k].norm() < 1e-12);
        }
    }

    #[test]
    fn character_transforms_to_single_coefficient() {
        // e_1 on T_4 has values (1, i, -1, -i).
        let f = CyclicFunction::character(4, 1).unwrap();
        let expected = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ];
        assert!(max_dev(f.values(), &expected) < 1e-15);
        let s = dft(&f);
        assert!((s.coeffs()[1] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        for k in [0usize, 2, 3] {
            assert!(s.coeffs()[k].norm() < 1e-12);
        }
    }

    #[test]
    fn dft_matches_quadratic_oracle() {
        let f = random_function(16, 7);
        let s = dft(&f);
        assert!(max_dev(s.coeffs(), &naive_dft(&f)) < 1e-10);
    }

    #[test]
    fn idft_of_delta_is_character() {
        let s = Spectrum::delta(8, 0).unwrap();
        let f = idft(&s);
        for v in f.values() {
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
        let s3 = Spectrum::delta(8, 3).unwrap();
        let e3 = CyclicFunction::character(8, 3).unwrap();
        assert!(max_dev(idft(&s3).values(), e3.values()) < 1e-12);
    }

    #[test]
    fn round_trips_match_oracles() {
        let f = random_function(16, 11);
        let back = idft(&dft(&f));
        assert!(max_dev(back.values(), f.values()) < 1e-10);

        let s = Spectrum::new(random_function(16, 13).values().to_vec()).unwrap();
        let fwd = dft(&idft(&s));
        assert!(max_dev(fwd.coeffs(), s.coeffs()) < 1e-10);
        assert!(max_dev(&naive_idft(&s), idft(&s).values()) < 1e-10);
    }

    #[test]
    fn a_norm_of_character_is_one_for_every_p() {
        let f = CyclicFunction::character(8, 3).unwrap();
        for p in [1.0, 1.5, 2.0, 4.0, 10.0] {
            assert_abs_diff_eq!(a_norm(&f, p).unwrap(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn a_norm_two_unit_coefficients() {
        // f(t) = 1 + e^{it} on T_4.
        let ones = CyclicFunction::constant(4, Complex64::new(1.0, 0.0)).unwrap();
        let e1 = CyclicFunction::character(4, 1).unwrap();
        let f = CyclicFunction::new(
            ones.values()
                .iter()
                .zip(e1.values())
                .map(|(a, b)| a + b)
                .collect(),
        )
        .unwrap();
        assert_abs_diff_eq!(a_norm(&f, 1.0).unwrap(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(a_norm(&f, 2.0).unwrap(), 2f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn parseval_on_random_input() {
        let f = random_function(32, 3);
        assert_abs_diff_eq!(a_norm(&f, 2.0).unwrap(), f.l2_norm(), epsilon = 1e-10);
    }

    #[test]
    fn a_norm_rejects_p_below_one() {
        let f = random_function(8, 1);
        assert!(matches!(
            a_norm(&f, 0.5),
            Err(Error::InvalidExponent(p)) if p == 0.5
        ));
    }

    #[test]
    fn character_convolution_is_idempotent_and_orthogonal() {
        let e2 = CyclicFunction::character(8, 2).unwrap();
        let e5 = CyclicFunction::character(8, 5).unwrap();
        let same = convolve(&e2, &e2).unwrap();
        assert!(max_dev(same.values(), e2.values()) < 1e-12);
        let cross = convolve(&e2, &e5).unwrap();
        assert!(cross.sup_norm() < 1e-12);
    }

    #[test]
    fn convolution_matches_double_sum_oracle() {
        let f1 = random_function(16, 21);
        let f2 = random_function(16, 22);
        let got = convolve(&f1, &f2).unwrap();
        assert!(max_dev(got.values(), &naive_convolve(&f1, &f2)) < 1e-10);
    }

    #[test]
    fn convolution_rejects_order_mismatch() {
        let f1 = random_function(8, 1);
        let f2 = random_function(9, 2);
        assert!(matches!(
            convolve(&f1, &f2),
            Err(Error::OrderMismatch { left: 8, right: 9 })
        ));
    }

    #[test]
    fn folding_wraps_frequencies_mod_n() {
        let n = 8usize;
        let s = fold_circle_series(&[(n as i64, Complex64::new(1.0, 0.0))], n).unwrap();
        assert_eq!(s.coeffs()[0], Complex64::new(1.0, 0.0));

        let aligned = fold_circle_series(
            &[
                (1, Complex64::new(1.0, 0.0)),
                (1 + n as i64, Complex64::new(1.0, 0.0)),
            ],
            n,
        )
        .unwrap();
        assert_eq!(aligned.coeffs()[1], Complex64::new(2.0, 0.0));
        assert_abs_diff_eq!(aligned.lp_norm(1.0).unwrap(), 2.0, epsilon = 1e-15);

        let cancelling = fold_circle_series(
            &[
                (1, Complex64::new(1.0, 0.0)),
                (1 + n as i64, Complex64::new(-1.0, 0.0)),
            ],
            n,
        )
        .unwrap();
        assert_eq!(cancelling.coeffs()[1], Complex64::new(0.0, 0.0));
        // Strict contraction: output l1 is 0, input l1 is 2.
        assert!(cancelling.lp_norm(1.0).unwrap() < 2.0);
    }

    #[test]
    fn spectrum_csv_has_documented_header() {
        let s = Spectrum::delta(3, 1).unwrap();
        let csv = s.to_csv_string();
        assert!(csv.starts_with("k,re,im\n"));
        assert_eq!(csv.lines().count(), 4);
    }
}
