//! Single-quasiparticle excitations above the Lang-Firsov ground state: a
//! 2×2 model mixing the dressed boson branch ω_q with the Ising
//! quasiparticle branch ε_q through g_q.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ansatz_gs::lf_effective;
use crate::error::{IsbError, Result};
use crate::params::ChainParams;
use crate::tim::{self, TimParams};

/// Phase convention of the Bogoliubov coefficient v_q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    #[default]
    Standard,
    /// v_q → −v_q.
    FlippedV,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandPoint {
    pub qd: f64,
    /// Bare boson branch.
    pub omega_q: f64,
    /// Bare spin branch.
    pub eps_q: f64,
    /// Mixing element. Its phase is convention dependent and never exported.
    pub g_q: Complex64,
    pub e_plus: f64,
    pub e_minus: f64,
    /// Normalised eigenvector (β_f, β_b) of the upper band.
    pub mix_plus: [Complex64; 2],
    /// Normalised eigenvector (β_f, β_b) of the lower band.
    pub mix_minus: [Complex64; 2],
}

impl BandPoint {
    /// |β_f|² and |β_b|² of the requested band.
    pub fn weights(&self, band: Band) -> (f64, f64) {
        let v = match band {
            Band::Plus => self.mix_plus,
            Band::Minus => self.mix_minus,
        };
        (v[0].norm_sqr(), v[1].norm_sqr())
    }

    pub fn energy(&self, band: Band) -> f64 {
        match band {
            Band::Plus => self.e_plus,
            Band::Minus => self.e_minus,
        }
    }

    pub fn abs_g_q(&self) -> f64 {
        self.g_q.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Band {
    Minus,
    Plus,
}

impl Band {
    pub const BOTH: [Band; 2] = [Band::Minus, Band::Plus];

    pub fn label(self) -> &'static str {
        match self {
            Band::Minus => "minus",
            Band::Plus => "plus",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentumGrid {
    /// qd = 2πn/N restricted to the half zone, N taken from the chain.
    FiniteN,
    /// n_q equispaced points in [0, π).
    Uniform,
}

/// Boson branch ω + 4h_t(2g/ω)² sin²(qd/2).
pub fn boson_branch(p: &ChainParams, t: &TimParams, qd: f64) -> f64 {
    let x = 2.0 * p.g / p.omega;
    p.omega + 4.0 * t.h_t * x * x * (0.5 * qd).sin().powi(2)
}

/// Mixing element h_t(2g/ω)(1 − e^{−iqd})(u_q + v*_q).
pub fn mixing(p: &ChainParams, t: &TimParams, qd: f64, convention: Convention) -> Complex64 {
    let b = tim::bogoliubov(t, qd);
    let v = match convention {
        Convention::Standard => b.v,
        Convention::FlippedV => -b.v,
    };
    let phase = Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -qd);
    t.h_t * (2.0 * p.g / p.omega) * phase * (b.u + v.conj())
}

pub fn band_point(p: &ChainParams, qd: f64) -> BandPoint {
    band_point_with(p, qd, Convention::Standard)
}

pub fn band_point_with(p: &ChainParams, qd: f64, convention: Convention) -> BandPoint {
    let t = lf_effective(p);
    let omega_q = boson_branch(p, &t, qd);
    let eps_q = tim::dispersion(&t, qd);
    let g_q = mixing(p, &t, qd, convention);

    let mean = 0.5 * (omega_q + eps_q);
    let delta = 0.5 * (omega_q - eps_q);
    let r = delta.hypot(g_q.norm());

    // Upper eigenvector in (boson, spin) components.
    let (b, f) = if r == 0.0 {
        // Full degeneracy: boson character goes to the lower band.
        (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    } else if delta >= 0.0 {
        (Complex64::new(delta + r, 0.0), g_q.conj())
    } else {
        (g_q, Complex64::new(r - delta, 0.0))
    };
    let norm = (b.norm_sqr() + f.norm_sqr()).sqrt();
    let (b, f) = (b / norm, f / norm);
    let mix_plus = [f, b];
    // Orthogonal complement: (b', f') = (−f*, b*).
    let mix_minus = [b.conj(), -f.conj()];

    BandPoint {
        qd,
        omega_q,
        eps_q,
        g_q,
        e_plus: mean + r,
        e_minus: mean - r,
        mix_plus,
        mix_minus,
    }
}

/// Half-zone momenta of an `n`-site ring, ascending.
pub fn finite_half_zone(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| 2.0 * PI * k as f64 / n as f64)
        .filter(|&q| q < PI - 1e-12)
        .collect()
}

pub fn band_structure(p: &ChainParams, n_q: usize, grid: MomentumGrid) -> Result<Vec<BandPoint>> {
    p.validate()?;
    let qs = match grid {
        MomentumGrid::FiniteN => {
            let n = p.n_sites().ok_or_else(|| {
                IsbError::InvalidParams("finite-N momentum grid needs a site count".into())
            })?;
            finite_half_zone(n)
        }
        MomentumGrid::Uniform => {
            if n_q < 1 {
                return Err(IsbError::InvalidParams("momentum grid needs at least one point".into()));
            }
            (0..n_q).map(|k| PI * k as f64 / n_q as f64).collect()
        }
    };
    Ok(qs.into_iter().map(|q| band_point(p, q)).collect())
}
