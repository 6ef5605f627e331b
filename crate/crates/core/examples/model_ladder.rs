//! Negative eigenvalues of the enriched P1 discretization on the straight
//! 120° model domain, and the fit of κ ln s_k against k.
use cornerlab::experiments::{model_ladder, LadderConfig};

fn main() -> cornerlab::Result<()> {
    let gamma = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.0);
    let cfg = LadderConfig { gamma, ..LadderConfig::default() };
    let run = model_ladder(&cfg)?;
    let c = &run.corner;
    println!("{} unknowns, {:?}, resolved window {:?}", run.system.n(), run.report.method, cfg.resolved_window());
    println!("{:>3} {:>16} {:>16} {:>10}", "k", "s computed", "s closed", "rel");
    for (k, s) in run.resolved_indices().into_iter().zip(&run.resolved) {
        let p = c.ladder(k);
        println!("{k:>3} {s:>16.6} {p:>16.6} {:>10.2e}", (s / p - 1.0).abs());
    }
    if let Some(f) = &run.fit {
        println!("slope/pi = {:.5}, kappa_fit = {:.5} (kappa = {:.5}), phase error = {:.2e}", f.slope_over_pi(), f.kappa_fit, c.kappa, f.phase_error);
    }
    Ok(())
}
