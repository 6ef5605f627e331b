//! Finite-element realization of the corner eigenproblem on the half-period
//! domain, with one singular enrichment function fixing the self-adjoint
//! extension.

pub mod assemble;
pub mod band;
pub mod dtn;
pub mod eigen;
pub mod fit;
pub mod mesh;
pub mod modes;
pub mod profile;
pub mod space;
pub mod sparse;

pub use assemble::{assemble, assemble_with, Assembled, AssemblyOptions};
pub use mesh::{generate_annular_mesh, generate_mesh, generate_mesh_with, BoundaryTag, Mesh, MeshParams};
pub use profile::{build_straightened, ScalarFn, StraightenedProfile, SurfaceProfile};
pub use eigen::{solve_negative_spectrum, solve_negative_spectrum_with, EigenOptions, EigenReport, SolveMethod};
pub use fit::{fit_asymptotics, AsymptoticFit};
pub use space::EnrichedSpace;
pub use sparse::Csr;
