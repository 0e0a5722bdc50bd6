//! Property-based tests for the library-wide invariants.

use bh_core::cyclic::{a_norm, convolve, dft, fold_circle_series, idft, CyclicFunction, TAU};
use bh_core::diophantine::{meets_bound, simultaneous_approx, verify_approx};
use bh_core::maps::CircleMap;
use bh_core::operators::{power_norms, Kernel};
use bh_core::sections::{delta_bound_check, FiniteProductSpace, ProductSubset};
use bh_core::Caps;
use num_complex::Complex64;
use proptest::prelude::*;

fn complex_vec(max_len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(
        (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im)),
        1..max_len,
    )
}

fn max_value_dev(a: &CyclicFunction, b: &CyclicFunction) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transform_round_trip_is_identity(values in complex_vec(512)) {
        let f = CyclicFunction::new(values).unwrap();
        let back = idft(&dft(&f));
        let scale = f.sup_norm().max(1.0);
        prop_assert!(max_value_dev(&f, &back) <= 1e-10 * scale);
    }

    #[test]
    fn parseval_identity(values in complex_vec(256)) {
        let f = CyclicFunction::new(values).unwrap();
        prop_assert!((a_norm(&f, 2.0).unwrap() - f.l2_norm()).abs() <= 1e-10);
    }

    #[test]
    fn lp_norms_do_not_increase_in_p(values in complex_vec(128)) {
        let f = CyclicFunction::new(values).unwrap();
        let n1 = a_norm(&f, 1.0).unwrap();
        let n2 = a_norm(&f, 2.0).unwrap();
        let n4 = a_norm(&f, 4.0).unwrap();
        prop_assert!(n2 <= n1 + 1e-12);
        prop_assert!(n4 <= n2 + 1e-12);
    }

    #[test]
    fn a_norm_is_submultiplicative(
        a in complex_vec(64),
        b in complex_vec(64),
    ) {
        let order = a.len().min(b.len());
        let f1 = CyclicFunction::new(a[..order].to_vec()).unwrap();
        let f2 = CyclicFunction::new(b[..order].to_vec()).unwrap();
        let product = f1.pointwise_mul(&f2).unwrap();
        let lhs = a_norm(&product, 1.0).unwrap();
        let rhs = a_norm(&f1, 1.0).unwrap() * a_norm(&f2, 1.0).unwrap();
        prop_assert!(lhs <= rhs + 1e-9, "{lhs} > {rhs}");
    }

    #[test]
    fn folding_contracts_the_l1_mass(
        pairs in prop::collection::vec(
            ((-64i64..64), (-1.0f64..1.0, -1.0f64..1.0)),
            1..24,
        ),
        order in 1usize..32,
    ) {
        let pairs: Vec<(i64, Complex64)> = pairs
            .into_iter()
            .map(|(nu, (re, im))| (nu, Complex64::new(re, im)))
            .collect();
        let input_mass: f64 = pairs.iter().map(|(_, c)| c.norm()).sum();
        let folded = fold_circle_series(&pairs, order).unwrap();
        prop_assert!(folded.lp_norm(1.0).unwrap() <= input_mass + 1e-12);
    }

    #[test]
    fn a_norm_bounded_by_order_times_sup(values in complex_vec(128)) {
        let f = CyclicFunction::new(values).unwrap();
        let bound = f.order() as f64 * f.sup_norm();
        prop_assert!(a_norm(&f, 1.0).unwrap() <= bound + 1e-9);
    }

    #[test]
    fn convolution_spectrum_is_pointwise_product(
        a in complex_vec(48),
        b in complex_vec(48),
    ) {
        let order = a.len().min(b.len());
        let f1 = CyclicFunction::new(a[..order].to_vec()).unwrap();
        let f2 = CyclicFunction::new(b[..order].to_vec()).unwrap();
        let conv = convolve(&f1, &f2).unwrap();
        let s = dft(&conv);
        let s1 = dft(&f1);
        let s2 = dft(&f2);
        for k in 0..order {
            let expect = s1.coeffs()[k] * s2.coeffs()[k];
            prop_assert!((s.coeffs()[k] - expect).norm() <= 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn winding_consistency_across_families(
        nu in -4i64..=4,
        offset in -3.0f64..3.0,
        amplitude in -1.5f64..1.5,
    ) {
        for map in [CircleMap::linear(nu, offset), CircleMap::smooth(nu, amplitude)] {
            let gap = map.lift(TAU) - map.lift(0.0);
            prop_assert!((gap - TAU * map.winding() as f64).abs() <= 1e-9);
        }
    }

    #[test]
    fn exp_samples_are_unimodular(
        nu in -3i64..=3,
        amplitude in -1.0f64..1.0,
        n in -16i64..=16,
        order in 1usize..80,
    ) {
        let map = CircleMap::smooth(nu, amplitude);
        let sample = map.exp_sample(n, order).unwrap();
        for v in sample.values() {
            prop_assert!((v.norm() - 1.0).abs() <= 1e-12);
        }
        prop_assert!((a_norm(&sample, 2.0).unwrap() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn linear_exp_samples_are_characters(
        nu in -3i64..=3,
        n in -8i64..=8,
        order in 1usize..32,
    ) {
        let map = CircleMap::linear(nu, 0.0);
        let sample = map.exp_sample(n, order).unwrap();
        let k = (n * nu).rem_euclid(order as i64) as usize;
        let character = CyclicFunction::character(order, k).unwrap();
        prop_assert!(max_value_dev(&sample, &character) <= 1e-12 * (1.0 + (n * nu).abs() as f64));
    }

    #[test]
    fn exp_sample_power_homomorphism(
        n1 in -8i64..=8,
        n2 in -8i64..=8,
        order in 1usize..48,
    ) {
        let map = CircleMap::smooth(1, 0.5);
        let combined = map.exp_sample(n1 + n2, order).unwrap();
        let product = map
            .exp_sample(n1, order)
            .unwrap()
            .pointwise_mul(&map.exp_sample(n2, order).unwrap())
            .unwrap();
        prop_assert!(max_value_dev(&combined, &product) <= 1e-12 * (1.0 + (n1 + n2).abs() as f64));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dirichlet_pigeonhole_never_exhausts_a_full_budget(
        alphas in prop::collection::vec(-2.0f64..2.0, 1..=4),
        d in 1u64..=6,
    ) {
        let budget = d.pow(alphas.len() as u32);
        let result = simultaneous_approx(&alphas, d, budget).unwrap();
        prop_assert!(!result.budget_exhausted);
        prop_assert!(meets_bound(result.max_error, d));
        prop_assert!(verify_approx(&alphas, d, &result).ok());
    }

    #[test]
    fn product_delta_bound_on_random_two_factor_sets(
        bits in prop::collection::vec(any::<bool>(), 16),
    ) {
        let space = FiniteProductSpace::uniform(&[4, 4]).unwrap();
        let e = ProductSubset::new(space, bits).unwrap();
        let check = delta_bound_check(&e);
        prop_assert!(check.holds);
        prop_assert_eq!(e.delta(), e.complement().delta());
    }

    #[test]
    fn product_delta_bound_on_weighted_three_factor_sets(
        bits in prop::collection::vec(any::<bool>(), 27),
        raw in prop::collection::vec(0.05f64..1.0, 9),
    ) {
        // Normalize three weight triples.
        let weights: Vec<Vec<f64>> = raw
            .chunks(3)
            .map(|w| {
                let sum: f64 = w.iter().sum();
                // Force an exact unit sum so the space validator accepts.
                let mut normalized: Vec<f64> = w.iter().map(|x| x / sum).collect();
                let correction = 1.0 - normalized.iter().sum::<f64>();
                normalized[0] += correction;
                normalized
            })
            .collect();
        let space = FiniteProductSpace::with_weights(&[3, 3, 3], weights).unwrap();
        let e = ProductSubset::new(space, bits).unwrap();
        let check = delta_bound_check(&e);
        prop_assert!(check.holds, "delta={} bound={}", check.delta_e, check.bound);
        prop_assert_eq!(e.delta(), e.complement().delta());
    }

    #[test]
    fn kernel_power_norms_are_submultiplicative(
        weights in prop::collection::vec(
            (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im)),
            1..6,
        ),
        base in -4i64..4,
    ) {
        let pairs: Vec<(i64, Complex64)> = weights
            .into_iter()
            .enumerate()
            .map(|(i, w)| (base + i as i64, w))
            .collect();
        let kernel = Kernel::from_pairs(&pairs).unwrap();
        let norms = power_norms(&kernel, 6, &Caps::DEFAULT).entries;
        for m in 0..=3usize {
            for n in 0..=3usize {
                prop_assert!(
                    norms[m + n].norm <= norms[m].norm * norms[n].norm + 1e-9
                );
            }
        }
    }
}

/// The round-trip contract explicitly covers large grids; a handful of fixed
/// sizes keeps the run fast while touching the top of the range.
#[test]
fn transform_round_trip_on_large_grids() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    for order in [1024usize, 2048, 4096, 3000, 4095] {
        let f = CyclicFunction::from_fn(order, |_| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
        .unwrap();
        let back = idft(&dft(&f));
        let dev = f
            .values()
            .iter()
            .zip(back.values())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        assert!(dev <= 1e-10, "order {order}: {dev}");
    }
}
