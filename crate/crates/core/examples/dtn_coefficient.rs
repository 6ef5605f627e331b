//! Robin correction α(τ⁻¹) extracted from the outer problem, and the interval
//! model it produces compared with the plain α = 0 model.
use cornerlab::experiments::{model_ladder, model_profile, LadderConfig};
use cornerlab::model1d::{alpha_zero, interval_eigenvalues_with, IntervalOptions};
use cornerlab::solver2d::dtn::dtn_alpha;

fn main() -> cornerlab::Result<()> {
    let cfg = LadderConfig::default();
    let prof = model_profile(&cfg)?;
    let run = model_ladder(&cfg)?;
    let corner = run.corner.clone();
    let rho0 = corner.rho0;
    let delta = 0.2;
    for &tau in &[5.0, 14.0, 40.0] {
        let d = dtn_alpha(&prof, &|_| rho0, &corner, tau, delta)?;
        println!("tau={tau:>5}: alpha={:.6} sector={:.6} remainder={:.2e}", d.alpha, d.alpha_sector, d.remainder);
    }
    let s1 = run.resolved[0];
    let k = corner.ladder_index(s1);
    let a = dtn_alpha(&prof, &|_| rho0, &corner, s1, delta)?.alpha;
    let o = IntervalOptions { min_tau_delta: 0.5, ..IntervalOptions::default() };
    let zero = interval_eigenvalues_with(&corner, delta, &alpha_zero, k..=k, o)?.entries[0].tau_hat;
    let dtn = interval_eigenvalues_with(&corner, delta, &move |_| a, k..=k, o)?.entries[0].tau_hat;
    println!("2D s_{k} = {s1:.4}; interval with DtN alpha {dtn:.4}; with alpha = 0 {zero:.4}");
    Ok(())
}
