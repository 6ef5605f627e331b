//! Eigenvalues on (0, δ) with a Robin condition at δ: secular roots against
//! the closed-form ladder and a finite-difference cross-check.
use cornerlab::model1d::{interval_eigenvalues, interval_fd_oracle, robin_residual};
use cornerlab::waterwave::stokes_corner_params;

fn main() -> cornerlab::Result<()> {
    let c = stokes_corner_params(0.0);
    let alpha = |s: f64| 0.3 * s;
    for &delta in &[0.6, 1.0] {
        let spec = interval_eigenvalues(&c, delta, &alpha, 1..=3)?;
        let fd = interval_fd_oracle(&c, delta, &alpha, &[1, 2, 3], 2e-3, 8.0)?;
        println!("delta = {delta}");
        for (e, t) in spec.entries.iter().zip(&fd) {
            println!(
                "  k={} tau^={:.10} closed={:.10} dev={:.1e} bound={:.1e} fd={:.6} robin={:.1e}",
                e.k,
                e.tau_hat,
                e.tau_closed,
                e.relative_deviation(),
                10.0 * (-2.0 * e.tau_hat * delta).exp(),
                t,
                robin_residual(&spec, e.k, &alpha)?
            );
        }
    }
    Ok(())
}
