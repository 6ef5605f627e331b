//! Robin coefficient ρ(x) built from the crest expansion of a synthetic
//! Stokes-type profile, with its corner limit and approach rate.
use cornerlab::waterwave::{profile_from_expansion, rho_coefficient, rho_limit_exponent, stokes_rho0, StokesLinearization};

fn main() -> cornerlab::Result<()> {
    let prof = profile_from_expansion(0.3, -0.2, 0.5)?;
    let lin = StokesLinearization::from_corner_expansion(prof.clone(), 0.0, 1.0);
    let rho = rho_coefficient(&lin)?;
    let rho0 = stokes_rho0();
    println!("{:>10} {:>14} {:>14} {:>12}", "x", "eta", "rho", "rho - rho0");
    for &x in &[1e-8, 1e-6, 1e-4, 1e-2, 0.1, 0.5, 1.0, 1.5] {
        println!("{x:>10.1e} {:>14.10} {:>14.10} {:>12.3e}", prof.eta(x), rho(x), rho(x) - rho0);
    }
    println!("fitted exponent of |rho - rho0| on (1e-8, 1e-4): {:.4}", rho_limit_exponent(&rho, rho0, 1e-8, 1e-4));
    Ok(())
}
