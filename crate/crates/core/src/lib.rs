//! Variational ground states, phase diagrams, quasiparticle bands and
//! spectroscopy of the interspersed spin-boson chain.

pub mod ansatz_exc;
pub mod ansatz_gs;
pub mod error;
pub mod export;
pub mod params;
pub mod phase;
pub mod simplex;
pub mod specfun;
pub mod spectroscopy;
pub mod tim;

pub use ansatz_exc::{band_point, band_structure, Band, BandPoint, MomentumGrid};
pub use ansatz_gs::{
    lf_critical_g, lf_effective, lf_finite_energy, lf_solve, sh_critical_g, sh_effective,
    sh_energy, sh_finite_energy, sh_solve, AnsatzKind, VariationalSolution,
};
pub use error::{IsbError, Result};
pub use params::{ChainParams, SystemSize};
pub use tim::TimParams;
