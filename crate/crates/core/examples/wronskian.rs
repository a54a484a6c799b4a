//! Closed-form wronskian against the determinant of a computed basis.

use odeseries::frobenius::{solve_ode, wronskian_of_system, wronskian_ode_solution};
use odeseries::ode::Ode;

fn main() -> odeseries::Result<()> {
    // x² y'' + x(1 + 2x) y' + x(1 − x) y
    let e = Ode::from_int_rows(&[&[0, 0, 1], &[0, 1, 2], &[0, 1, -1]], 12)?;
    let closed = wronskian_ode_solution(&e)?;
    println!("closed form: x^{} · exp(principal part {:?}) · (body)", closed.exponent, closed.principal_part);
    let det = wronskian_of_system(&solve_ode(&e, 12)?);
    println!("determinant leads with {:?}", det.leading());

    // x³ y'' − x y' − y has an essential singularity in its wronskian.
    let essential = wronskian_ode_solution(&Ode::from_int_rows(&[&[0, 0, 0, 1], &[0, -1], &[-1]], 12)?)?;
    println!("essential: {}, principal part {:?}", essential.is_essential(), essential.principal_part);
    Ok(())
}
