//! Classification at the origin and at infinity, and the Euler test.

use odeseries::classify::{classify_infinity, classify_point, euler_characterize};
use odeseries::ode::{transform_to_infinity, Ode};

fn main() -> odeseries::Result<()> {
    // Bessel of order zero, x² y'' + x y' + x² y: regular at 0, irregular at ∞.
    let bessel = Ode::from_int_rows(&[&[0, 0, 1], &[0, 1], &[0, 0, 1]], 12)?;
    println!("bessel at 0: {:?}", classify_point(&bessel)?.kind);
    println!("bessel at ∞: {:?}", classify_infinity(&bessel)?.kind);

    // x² y'' − y' − y/2 has an irregular singular point at the origin.
    let irregular = Ode::from_polynomials(
        vec![
            vec![0.into(), 0.into(), 1.into()],
            vec![(-1).into()],
            vec![odeseries::series::Scalar::ratio(-1, 2)],
        ],
        12,
    )?;
    let report = classify_point(&irregular)?;
    println!("x² y'' − y' − y/2 at 0: {:?}, pole orders {:?}", report.kind, report.pole_orders);

    // Euler equations are regular at both ends.
    let euler = Ode::from_int_rows(&[&[0, 0, 0, 1], &[0, 0, 2], &[0, 3], &[5]], 8)?;
    let r = euler_characterize(&euler)?;
    println!("euler: is_euler {}, both ends regular {}", r.is_euler, r.both_ends_regular);
    let inverted = transform_to_infinity(&euler)?;
    for k in (0..=3).rev() {
        println!("  row {k} at infinity: {:?}", inverted.row_poly(k)?.iter().map(ToString::to_string).collect::<Vec<_>>());
    }
    Ok(())
}
