//! Truncated power series, generalized series with logarithms, and jets.

use odeseries::series::{GeneralizedSeries, GsTerm, Jet, Scalar, Series};

fn main() -> odeseries::Result<()> {
    // exp(x) through x^8, then its reciprocal: exact rationals throughout.
    let x = Series::from_ints(&[0, 1], 8);
    let e = x.exp()?;
    let back = &e * &e.inverse()?;
    println!("exp(x)        = {:?}", e.coeffs().iter().map(Scalar::to_string).collect::<Vec<_>>());
    println!("exp(x)/exp(x) = {:?}", back.coeffs().iter().map(Scalar::to_string).collect::<Vec<_>>());

    // ∫ x^{-1} dx brings in a logarithm.
    let g = GeneralizedSeries::new(vec![GsTerm { exponent: Scalar::from_i64(-1), log_power: 0, body: Series::one(4) }]);
    let integral = g.integrate();
    println!("max log power of ∫ dx/x: {:?}", integral.max_log_power());

    // Jets: (2ε + ε²) / ε = 2 + ε, with one order lost to the cancellation.
    let num = Jet::from_coeffs(vec![Scalar::zero(), Scalar::from_i64(2), Scalar::one()]);
    let quot = num.div_cancelling(&Jet::epsilon_power(1, 2), 1.0)?;
    println!("jet quotient: {:?}", quot.coeffs().iter().map(Scalar::to_string).collect::<Vec<_>>());
    Ok(())
}
