use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, IsbError, Result};

/// Number of unit cells of the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SystemSize {
    #[default]
    Thermodynamic,
    Finite(usize),
}

/// Physical parameters of the chain with antiferro couplings g₁ = −g₂ = g.
///
/// The lattice spacing is fixed to one; momenta are always the product qd.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainParams {
    /// Spin frequency ω₀.
    pub omega0: f64,
    /// Boson frequency ω.
    pub omega: f64,
    /// Spin-boson coupling g.
    pub g: f64,
    #[serde(default)]
    pub size: SystemSize,
}

impl ChainParams {
    pub fn new(omega0: f64, omega: f64, g: f64) -> Result<Self> {
        let p = Self {
            omega0,
            omega,
            g,
            size: SystemSize::Thermodynamic,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_sites(mut self, n: usize) -> Result<Self> {
        self.size = SystemSize::Finite(n);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("omega0", self.omega0)?;
        ensure_finite("omega", self.omega)?;
        ensure_finite("g", self.g)?;
        if self.omega <= 0.0 {
            return Err(IsbError::InvalidParams(format!(
                "boson frequency must be positive, got {}",
                self.omega
            )));
        }
        if self.omega0 < 0.0 {
            return Err(IsbError::InvalidParams(format!(
                "spin frequency must be non-negative, got {}",
                self.omega0
            )));
        }
        if let SystemSize::Finite(n) = self.size {
            if n < 2 {
                return Err(IsbError::InvalidParams(format!(
                    "a chain needs at least two sites, got {n}"
                )));
            }
        }
        Ok(())
    }

    pub fn n_sites(&self) -> Option<usize> {
        match self.size {
            SystemSize::Finite(n) => Some(n),
            SystemSize::Thermodynamic => None,
        }
    }

    /// All energies multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            omega0: s * self.omega0,
            omega: s * self.omega,
            g: s * self.g,
            size: self.size,
        }
    }

    /// Largest energy scale, used to set solver tolerances.
    pub fn energy_scale(&self) -> f64 {
        self.omega.max(self.omega0).max(self.g.abs())
    }
}
