//! Radial part h(r) of the first model eigenfunction against K_{iκ}(s r), and
//! the mass of the angular remainder W near the crest.
use cornerlab::angle_modes::AngularBasis;
use cornerlab::experiments::{model_ladder, LadderConfig};
use cornerlab::solver2d::modes::{eigenfunction_profile, remainder_mass_fraction};

fn main() -> cornerlab::Result<()> {
    let run = model_ladder(&LadderConfig::default())?;
    let basis = AngularBasis::new(&run.corner)?;
    for (k, &s) in run.resolved_indices().into_iter().zip(&run.resolved) {
        let j = run.mode_position(k)?;
        let r_hi = (8.0 / s).min(0.2);
        let radii: Vec<f64> = (0..40).map(|i| 1e-6 * (r_hi / 1e-6).powf(i as f64 / 39.0)).collect();
        let p = eigenfunction_profile(&run.report, j, &run.space, &basis, &radii)?;
        let w = remainder_mass_fraction(&run.report, j, &run.space, &basis, 1e-6, r_hi, 40)?;
        println!("k={k} s={s:>12.4}: corr(h, K) = {:.8}, W mass fraction = {w:.2e}", p.correlation);
    }
    Ok(())
}
