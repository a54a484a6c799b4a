use odeseries::frobenius::{residual, solve_ode, wronskian_of};
use odeseries::nonhom::{pair_wronskian, reduce_order, third_from_two, variation_of_parameters};
use odeseries::ode::{FrobeniusForm, Ode};
use odeseries::series::{GeneralizedSeries, Scalar, Series};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn bessel_zero_third_order(t: usize) -> Ode {
    Ode::from_int_rows(&[&[0, 0, 0, 1], &[0, 0, 3], &[0, 1], &[0, 0, 0, 1]], t).unwrap()
}

#[test]
fn triple_antiderivative() {
    let e = Ode::from_int_rows(&[&[0, 0, 0, 1], &[], &[], &[]], 12).unwrap();
    let fs = solve_ode(&e, 12).unwrap();
    let e = e.with_rhs(Series::from_ints(&[0, 0, 0, 1], 12));
    let p = variation_of_parameters(&e, &fs).unwrap();
    let want = GeneralizedSeries::term(Scalar::from_i64(3), 0, Series::constant(Scalar::ratio(1, 6), 0));
    assert_eq!(p.y_p.truncate(0), want);
    let e = e.with_rhs(Series::from_ints(&[0, 0, 0, 6], 12));
    let p = variation_of_parameters(&e, &fs).unwrap();
    assert_eq!(p.y_p.coeff_at(&Scalar::from_i64(3), 0), Scalar::one());
    let r = residual(&e, &p.y_p).unwrap();
    assert_eq!(r.valuation, r.reliable_through);
}

#[test]
fn bessel_zero_forced() {
    let n = 18;
    let e = bessel_zero_third_order(n);
    let fs = solve_ode(&e, n).unwrap();
    let e = e.with_rhs(Series::from_ints(&[0, 0, 0, 1], n));
    let p = variation_of_parameters(&e, &fs).unwrap();
    let r = residual(&e, &p.y_p).unwrap();
    assert!(r.valuation >= n as i64 - 3, "{} {}", r.valuation, r.reliable_through);
}

/// `x³y''' + x²a y'' + x b y' + c y` with the indicial polynomial fixed to
/// `(r - r₁)(r - r₂)(r - r₃)` and random higher coefficients.
fn random_instance(rng: &mut StdRng, n: usize) -> Ode {
    let roots: Vec<i64> = (0..3).map(|_| rng.random_range(-2..=3)).collect();
    let s1 = roots.iter().sum::<i64>();
    let s2 = roots[0] * roots[1] + roots[0] * roots[2] + roots[1] * roots[2];
    let s3 = roots.iter().product::<i64>();
    // r(r-1)(r-2) + a0 r(r-1) + b0 r + c0 = r^3 - s1 r^2 + s2 r - s3
    let a0 = 3 - s1;
    let b0 = s2 - 2 + a0;
    let c0 = -s3;
    let mut tail = || -> Vec<i64> { (0..2).map(|_| rng.random_range(-3..=3)).collect() };
    let (a, b, c) = (tail(), tail(), tail());
    Ode::from_int_rows(&[&[0, 0, 0, 1], &[0, 0, a0, a[0], a[1]], &[0, b0, b[0], b[1]], &[c0, c[0], c[1]]], n).unwrap()
}

#[test]
fn random_forced_instances() {
    let mut rng = StdRng::seed_from_u64(7);
    let n = 16;
    for case in 0..12 {
        let e = random_instance(&mut rng, n);
        let fs = solve_ode(&e, n).unwrap();
        let f: Vec<i64> = (0..3).map(|_| rng.random_range(-2..=2)).collect();
        let e = e.with_rhs(Series::from_ints(&f, n));
        let p = variation_of_parameters(&e, &fs).unwrap();
        let r = residual(&e, &p.y_p).unwrap();
        assert!(r.valuation >= n as i64 - 3, "case {case}: {:?} valuation {} reliable {}", fs.case, r.valuation, r.reliable_through);
    }
}

#[test]
fn cross_wronskian_identities() {
    let n = 14;
    let e = bessel_zero_third_order(n);
    let fs = solve_ode(&e, n).unwrap();
    let [y1, y2, y3] = [&fs.solutions[0], &fs.solutions[1], &fs.solutions[2]];
    let (w23, w31, w12) = (pair_wronskian(y2, y3), pair_wronskian(y3, y1), pair_wronskian(y1, y2));
    let combo = |d: usize| {
        let der = |g: &GeneralizedSeries| (0..d).fold(g.clone(), |acc, _| acc.differentiate());
        &(&(&der(y1) * &w23) + &(&der(y2) * &w31)) + &(&der(y3) * &w12)
    };
    assert!(combo(0).is_zero());
    assert!(combo(1).is_zero());
    assert_eq!(combo(2), wronskian_of(&fs.solutions));
}

#[test]
fn reduction_and_completion_on_bessel_zero() {
    let n = 16;
    let e = bessel_zero_third_order(n);
    let fs = solve_ode(&e, n).unwrap();
    let reduced = reduce_order(&e, &fs.solutions[0]).unwrap();
    // v = (φ₂/φ₁)' solves the reduced equation.
    let quotient = &fs.solutions[1] * &fs.solutions[0].inverse().unwrap();
    let r = residual(&reduced, &quotient.differentiate()).unwrap();
    assert!(r.valuation >= r.reliable_through && r.reliable_through >= n as i64 - 4, "{r:?}");

    let y3 = third_from_two(&e, &fs.solutions[0], &fs.solutions[1]).unwrap();
    let r = residual(&e, &y3).unwrap();
    assert!(r.valuation >= n as i64 - 3, "{r:?}");
    assert_eq!(y3.max_log_power(), Some(2));
    assert!(wronskian_of(&[fs.solutions[0].clone(), fs.solutions[1].clone(), y3]).leading().is_some());
}

#[test]
fn completion_of_euler_basis() {
    // x^3 y''' - 3x y' + 3y: roots 3, 1, -1
    let form = FrobeniusForm::order3(Series::from_ints(&[0], 10), Series::from_ints(&[-3], 10), Series::from_ints(&[3], 10));
    let e = form.to_ode();
    let basis = odeseries::frobenius::solve_euler(&form, 10).unwrap();
    let y3 = third_from_two(&e, &basis.solutions[0], &basis.solutions[1]).unwrap();
    let (exp, log, c) = y3.leading().unwrap();
    assert_eq!((exp, log), (basis.exponents[2].clone(), 0));
    assert_eq!(y3, GeneralizedSeries::monomial(basis.exponents[2].clone(), 0, y3.terms()[0].body.trunc()).scale(&c));
}
