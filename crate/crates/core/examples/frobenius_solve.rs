//! Fundamental system at a regular singular point: roots, case and the
//! first coefficients of each solution, certified by the residual.

use odeseries::frobenius::solve_ode;
use odeseries::ode::Ode;
use odeseries::series::Scalar;

fn main() -> odeseries::Result<()> {
    // x³ y''' + 3x² y'' + x y' + x³ y: triple root 0, so one series and
    // solutions with log x and (log x)².
    let trunc = 15;
    let e = Ode::from_int_rows(&[&[0, 0, 0, 1], &[0, 0, 3], &[0, 1], &[0, 0, 0, 1]], trunc)?;
    let fs = solve_ode(&e, trunc)?;
    println!("indicial roots: {:?}", fs.indicial.roots.iter().map(Scalar::to_string).collect::<Vec<_>>());
    println!("case: {:?}", fs.case);
    for (i, (phi, r)) in fs.solutions.iter().zip(fs.residuals(&e)?).enumerate() {
        let head: Vec<String> = (0..=6).map(|k| phi.coeff_at(&Scalar::from_i64(k), 0).to_string()).collect();
        println!(
            "φ{}: log power {:?}, log-free coefficients {:?}, residual zero through x^{}",
            i + 1,
            phi.max_log_power(),
            head,
            r.valuation
        );
    }
    Ok(())
}
