//! Numerical laboratory for Robin eigenproblems with a Stokes-type corner.
//!
//! A Robin condition `∂_ν u − r⁻¹ρu = 0` on a surface meeting a vertical wall
//! at a corner makes the Laplacian unbounded below. After fixing a
//! self-adjoint extension by the phase `γ`, the large negative eigenvalues
//! follow the geometric ladder `s_k = e^{(γ+γ_κ+kπ)/κ}`. This crate computes
//! the corner constants, the imaginary-order Bessel functions, the 1D model
//! spectra, and the 2D finite-element spectrum that realizes the ladder.

pub mod angle_modes;
pub mod cli;
pub mod cutoff;
pub mod error;
pub mod experiments;
pub mod model1d;
pub mod oracle;
pub mod quad;
pub mod solver2d;
pub mod specfun;
pub mod verify;
pub mod waterwave;

pub use error::{Error, Result};
pub use specfun::CornerData;
