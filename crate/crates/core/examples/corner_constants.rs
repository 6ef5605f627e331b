//! Corner constants of the 120° Stokes crest and of a few other corners.
use std::f64::consts::PI;

use cornerlab::waterwave::{stokes_corner_params, tau1_root};
use cornerlab::CornerData;

fn main() -> cornerlab::Result<()> {
    let c = stokes_corner_params(0.0);
    println!("alpha* = pi/3, rho0 = {:.6}", c.rho0);
    println!("kappa       = {:.15}", c.kappa);
    println!("gamma_kappa = {:.15}", c.gamma_kappa);
    for (k, mu) in c.mu.iter().take(4).enumerate() {
        println!("mu_{}        = {mu:.15}", k + 1);
    }
    let tau1 = tau1_root();
    println!("tau1        = {tau1:.15}  (3/2 tau1 = {:.15})", 1.5 * tau1);
    println!("ladder ratio e^(pi/kappa) = {:.4}", c.ladder_ratio());
    for k in 0..4 {
        println!("  s_{k} = {:.6e}", c.ladder(k));
    }

    println!("\nother corners (alpha*, rho0) -> kappa, mu_1:");
    for &(a, r) in &[(PI / 4.0, 0.5), (PI / 2.0, 1.0), (2.0, 0.1)] {
        match CornerData::new(a, r, 0.0, 0.5) {
            Ok(c) => println!("  ({a:.4}, {r}) -> {:.10}, {:.10}", c.kappa, c.mu[0]),
            Err(e) => println!("  ({a:.4}, {r}) -> {e}"),
        }
    }
    Ok(())
}
