//! Power-series ansatz at an irregular singular point.

use odeseries::frobenius::formal_probe;
use odeseries::ode::Ode;
use odeseries::series::Scalar;

fn main() -> odeseries::Result<()> {
    // x² y'' − y' − y/2: the formal solution diverges.
    let e = Ode::from_polynomials(vec![vec![0.into(), 0.into(), 1.into()], vec![(-1).into()], vec![Scalar::ratio(-1, 2)]], 30)?;
    let p = formal_probe(&e, 30);
    println!("status {:?}, radius estimate {}", p.status, p.radius_estimate);
    for (i, row) in p.recurrence.iter().enumerate() {
        println!("  a_(n+{i}) multiplier, ascending in n: {:?}", row.iter().map(Scalar::to_string).collect::<Vec<_>>());
    }

    // x³ y'' − x² y' − y admits only the zero series.
    let trivial = Ode::from_int_rows(&[&[0, 0, 0, 1], &[0, 0, -1], &[-1]], 20)?;
    println!("x³ y'' − x² y' − y: {:?}", formal_probe(&trivial, 20).status);
    Ok(())
}
