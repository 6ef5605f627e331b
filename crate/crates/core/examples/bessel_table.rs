//! K_{iκ}(z) and the real companion Ĩ_{iκ}(z) across the three evaluation
//! regimes, with the Wronskian check Ĩ K′ − Ĩ′ K = −1/z.
use cornerlab::specfun::{bessel_all, gamma_modulus, gamma_phase};
use cornerlab::waterwave::stokes_corner_params;

fn main() -> cornerlab::Result<()> {
    let kappa = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(stokes_corner_params(0.0).kappa);
    println!("kappa = {kappa}, |Gamma(1+i kappa)| = {:.12}, phase = {:.12}", gamma_modulus(kappa), gamma_phase(kappa));
    println!("{:>10} {:>22} {:>22} {:>22} {:>10}", "z", "K", "K'", "I~", "W z + 1");
    for &z in &[1e-6, 1e-3, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0, 100.0] {
        let [k, kp, i, ip] = bessel_all(kappa, z)?;
        let w = i * kp - ip * k;
        println!("{z:>10.1e} {k:>22.14e} {kp:>22.14e} {i:>22.14e} {:>10.1e}", w * z + 1.0);
    }
    Ok(())
}
