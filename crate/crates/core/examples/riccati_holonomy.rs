//! Holonomy of the Riccati model of z² u'' + u = 0 around the origin.

use num_complex::Complex64;
use odeseries::ode::Ode;
use odeseries::riccati::{global_holonomy, riccati_model, standard_loops, ContinuationOptions};

fn main() -> odeseries::Result<()> {
    let e = Ode::from_int_rows(&[&[0, 0, 1], &[], &[1]], 4)?;
    let model = riccati_model(&e)?;
    let base = Complex64::new(1.0, 0.0);
    let loops = standard_loops(&model, base);
    for g in global_holonomy(&model, base, &loops, &ContinuationOptions::default())? {
        let m = g.map.multipliers();
        println!("fitted map defect {:.2e}, multipliers {:.6e} and {:.6e}", g.defect, m[0].norm(), m[1].norm());
    }
    println!("e^(2π√3) = {:.6e}", (2.0 * std::f64::consts::PI * 3f64.sqrt()).exp());
    Ok(())
}
