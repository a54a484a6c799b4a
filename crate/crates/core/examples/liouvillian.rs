//! A closed-form solution from a known rational solution of the Riccati model.

use num_complex::Complex64;
use odeseries::ode::Ode;
use odeseries::riccati::{liouvillian_solution, QuadratureSpec, RationalFunction};

fn main() -> odeseries::Result<()> {
    // u'' − z u' − u = 0 with γ(z) = z.
    let e = Ode::from_int_rows(&[&[1], &[0, -1], &[-1]], 8)?;
    let gamma = RationalFunction::polynomial(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
    let sol = liouvillian_solution(&e, &gamma, &QuadratureSpec::default())?;
    println!("riccati residual of γ: {:.1e}", sol.riccati_residual);
    for z in [0.0, 0.5, 1.0] {
        let [u1, u2] = sol.basis(Complex64::new(z, 0.0))?;
        println!("z = {z}: basis {u1:.6} and {u2:.6}");
    }
    Ok(())
}
