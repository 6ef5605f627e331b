//! Closed-form half-line ladder against a log-grid finite-difference solve.
use cornerlab::model1d::{classify_normalization, halfline_fd_oracle, halfline_ladder};
use cornerlab::waterwave::stokes_corner_params;

fn main() -> cornerlab::Result<()> {
    let c = stokes_corner_params(0.0);
    let (r_min, r_max) = (1e-8, 50.0);
    let fd = halfline_fd_oracle(&c, r_min, r_max, 10_000)?;
    // Modes that feel neither grid end.
    let inner: Vec<f64> = fd.taus().into_iter().filter(|t| t * r_max > 20.0 && t * r_min < 1e-3).collect();
    let (norm, plain, two) = classify_normalization(&c, &inner);
    println!("normalization: {norm:?} (mismatch {plain:.2e} vs {two:.2e})");

    let ladder = halfline_ladder(&c, 0..=4);
    println!("{:>3} {:>16} {:>16} {:>10}", "k", "closed form", "FD", "rel");
    for (k, &pred) in (0..=4).zip(&ladder.tau) {
        if let Some(t) = inner.iter().find(|t| (*t / pred - 1.0).abs() < 0.1) {
            println!("{k:>3} {pred:>16.8} {t:>16.8} {:>10.2e}", (t / pred - 1.0).abs());
        }
    }
    Ok(())
}
