//! The boundary form q(w1, w2) on singular pairs a r^{iκ} + b r^{−iκ} times
//! φ0, evaluated on arcs of different radius.
use cornerlab::angle_modes::{symplectic_closed_form, symplectic_form, AngularBasis, SingularPair};
use cornerlab::waterwave::stokes_corner_params;
use num_complex::Complex64;

fn main() -> cornerlab::Result<()> {
    let c = stokes_corner_params(0.0);
    let b = AngularBasis::new(&c)?;
    let (g1, g2) = (0.3, 1.1);
    let w1 = SingularPair::from_phase(c.kappa, g1);
    let w2 = SingularPair::from_phase(c.kappa, g2);
    println!("closed form: {:.15}", symplectic_closed_form(&c, g1, g2));
    for &r in &[1e-3, 0.1, 1.0, 10.0] {
        println!("r = {r:>6}: q = {:.15}", symplectic_form(&b, &w1, &w2, r)?);
    }
    let w = SingularPair::new(Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.3));
    println!("generic pair with itself: {:.3e}", symplectic_form(&b, &w, &w, 0.5)?);
    Ok(())
}
