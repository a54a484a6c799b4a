mod common;

use odeseries::frobenius::{residual, solve_euler};
use odeseries::indicial::{classify_case, IndicialData};
use odeseries::ode::FrobeniusForm;
use odeseries::series::scalar::INTEGER_TOL;
use odeseries::series::{poly, Scalar, Series};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn gaussian(rng: &mut StdRng) -> Scalar {
    let re = common::small_rational(rng);
    if rng.random_bool(0.3) {
        &re + &(&common::small_rational(rng) * &Scalar::i())
    } else {
        re
    }
}

fn sorted_c64(v: &[Scalar]) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = v.iter().map(|s| (s.re_f64(), s.im_f64())).collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

/// Roots built from a random base and random offsets, some integral and
/// some not, so that every configuration appears.
fn structured_roots(rng: &mut StdRng, order: usize) -> Vec<Scalar> {
    let base = gaussian(rng);
    let fractional = [Scalar::ratio(1, 2), Scalar::ratio(1, 3), Scalar::ratio(2, 5), Scalar::gaussian(0, 1)];
    (0..order)
        .map(|_| {
            let shift = Scalar::from_i64(rng.random_range(0..=3));
            if rng.random_bool(0.3) {
                &(&base + &shift) + &fractional[rng.random_range(0..fractional.len())]
            } else {
                &base + &shift
            }
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn roots_rebuild_the_indicial_polynomial(seed in any::<u64>(), order in 2usize..=3) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = (0..order).map(|_| Series::from_coeffs(vec![gaussian(&mut rng), gaussian(&mut rng)], 4)).collect();
        let data = IndicialData::from_form(&FrobeniusForm::new(p).unwrap());
        let rebuilt = data.roots.iter().fold(vec![Scalar::one()], |acc, r| poly::mul(&acc, &[-r, Scalar::one()]));
        prop_assert_eq!(rebuilt.len(), data.poly.len());
        if data.is_exact() {
            prop_assert_eq!(&rebuilt, &data.poly);
        } else {
            let scale = data.poly.iter().map(Scalar::abs).fold(1.0, f64::max);
            for (a, b) in rebuilt.iter().zip(&data.poly) {
                prop_assert!((a - b).abs() <= 1e-9 * scale, "{:?} vs {:?}", rebuilt, data.poly);
            }
        }
    }

    #[test]
    fn case_survives_small_perturbations(seed in any::<u64>(), order in 2usize..=3) {
        let mut rng = StdRng::seed_from_u64(seed);
        let roots = structured_roots(&mut rng, order);
        let mut sorted = roots.clone();
        odeseries::indicial::sort_roots(&mut sorted);
        let exact_case = classify_case(&sorted);
        let bound = 0.1 * INTEGER_TOL;
        let perturbed: Vec<Scalar> = sorted
            .iter()
            .map(|r| {
                let (re, im) = (rng.random_range(-1.0..1.0) * bound, rng.random_range(-1.0..1.0) * bound);
                let z = r.to_c64();
                Scalar::float(z.re + re * std::f64::consts::FRAC_1_SQRT_2, z.im + im * std::f64::consts::FRAC_1_SQRT_2)
            })
            .collect();
        prop_assert_eq!(classify_case(&perturbed), exact_case);
    }

    #[test]
    fn euler_roots_are_the_characteristic_roots(seed in any::<u64>(), order in 2usize..=3) {
        let mut rng = StdRng::seed_from_u64(seed);
        let roots = structured_roots(&mut rng, order);
        let consts = common::constants_for_roots(&roots);
        let form = FrobeniusForm::new(consts.into_iter().map(|c| Series::constant(c, 6)).collect()).unwrap();
        let data = IndicialData::from_form(&form);
        prop_assert!(data.is_exact(), "{:?} from {:?}", data.roots, roots);
        prop_assert_eq!(sorted_c64(&data.roots), sorted_c64(&roots));
        let fs = solve_euler(&form, 6).unwrap();
        let e = form.to_ode();
        for g in &fs.solutions {
            let r = residual(&e, g).unwrap();
            prop_assert!(r.series.is_zero() && r.max_relative == 0.0, "{:?}", r);
        }
    }
}
