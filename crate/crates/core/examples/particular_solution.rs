//! Variation of parameters on a forced third-order equation.

use odeseries::frobenius::{residual, solve_ode};
use odeseries::nonhom::variation_of_parameters;
use odeseries::ode::Ode;
use odeseries::series::{Scalar, Series};

fn main() -> odeseries::Result<()> {
    let trunc = 16;
    let e = Ode::from_int_rows(&[&[0, 0, 0, 1], &[0, 0, 3], &[0, 1], &[0, 0, 0, 1]], trunc)?;
    let fs = solve_ode(&e, trunc)?;
    let forced = e.with_rhs(Series::from_ints(&[0, 0, 0, 1], trunc));
    let p = variation_of_parameters(&forced, &fs)?;
    let head: Vec<String> = (3..=9).map(|k| p.y_p.coeff_at(&Scalar::from_i64(k), 0).to_string()).collect();
    println!("y_p coefficients of x^3..x^9: {head:?}");
    let r = residual(&forced, &p.y_p)?;
    println!("L(y_p) − f vanishes through offset {} of {}", r.valuation, r.reliable_through);
    Ok(())
}
