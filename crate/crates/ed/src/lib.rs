//! Exact diagonalization of the truncated spin–boson chain.

pub mod basis;
pub mod convergence;
pub mod dump;
pub mod dynamics;
pub mod error;
pub mod ground;
pub mod hamiltonian;
pub mod krylov;
pub mod lanczos;
pub mod sparse;
pub mod variational;

pub use basis::{Basis, Boundary, TruncationSpec};
pub use convergence::{convergence_sweep, convergence_sweep_with, ConvergenceTable, Quantity};
pub use dynamics::{probe_dynamics, spectral_response, DynamicsResult, TimeGrid};
pub use error::{EdError, Result};
pub use ground::{ground_state, ground_state_with, EdOptions, EdResult, EdSummary, Observables, Operator};
pub use hamiltonian::{build_hamiltonian, build_sector_hamiltonian, Hamiltonian};
pub use lanczos::{lowest_eigenpairs, LanczosOptions};
