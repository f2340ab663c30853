//! Product basis of N spins and N truncated bosons.
//!
//! A basis index is `s · B + Σ_i n_i (n_max+1)^i` with `B = (n_max+1)^N`.
//! Bit i of `s` set means σᶻ = +1 on spin i; boson i sits between spin i
//! and spin i+1. Spin 0 is the first spin of the chain.

use serde::{Deserialize, Serialize};

use crate::error::{EdError, Result};

pub const DEFAULT_DIM_CAP: u64 = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    #[default]
    Periodic,
    Open,
}

fn default_cap() -> u64 {
    DEFAULT_DIM_CAP
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationSpec {
    /// Largest boson occupation kept per site.
    pub n_max: usize,
    /// Number of unit cells.
    pub n_sites: usize,
    #[serde(default)]
    pub boundary: Boundary,
    #[serde(default = "default_cap")]
    pub dim_cap: u64,
}

impl TruncationSpec {
    pub fn new(n_sites: usize, n_max: usize) -> Result<Self> {
        let t = Self {
            n_max,
            n_sites,
            boundary: Boundary::Periodic,
            dim_cap: DEFAULT_DIM_CAP,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Result<Self> {
        self.boundary = boundary;
        self.validate()?;
        Ok(self)
    }

    pub fn with_n_max(mut self, n_max: usize) -> Result<Self> {
        self.n_max = n_max;
        self.validate()?;
        Ok(self)
    }

    /// 2^N (n_max+1)^N, saturating.
    pub fn dimension(&self) -> u64 {
        let levels = self.n_max as u64 + 1;
        let mut d: u64 = 1;
        for _ in 0..self.n_sites {
            d = d.saturating_mul(2).saturating_mul(levels);
        }
        d
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_max < 1 {
            return Err(EdError::InvalidTruncation("n_max must be at least 1".into()));
        }
        if self.n_sites < 2 {
            return Err(EdError::InvalidTruncation("at least two unit cells are needed".into()));
        }
        if self.n_sites > 16 {
            return Err(EdError::InvalidTruncation(format!("{} unit cells is beyond reach", self.n_sites)));
        }
        if self.boundary == Boundary::Periodic && self.n_sites % 2 == 1 {
            return Err(EdError::InvalidTruncation(
                "periodic chains need an even number of cells".into(),
            ));
        }
        let dim = self.dimension();
        if dim > self.dim_cap || dim > u32::MAX as u64 {
            return Err(EdError::DimensionCap { dim, cap: self.dim_cap.min(u32::MAX as u64) });
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Basis {
    pub spec: TruncationSpec,
    pub levels: usize,
    pub boson_dim: usize,
    pub dim: usize,
    strides: Vec<usize>,
}

impl Basis {
    pub fn new(spec: TruncationSpec) -> Result<Self> {
        spec.validate()?;
        let levels = spec.n_max + 1;
        let strides: Vec<usize> = (0..spec.n_sites).map(|i| levels.pow(i as u32)).collect();
        let boson_dim = levels.pow(spec.n_sites as u32);
        Ok(Self {
            spec,
            levels,
            boson_dim,
            dim: boson_dim << spec.n_sites,
            strides,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.spec.n_sites
    }

    #[inline]
    pub fn spins(&self, idx: usize) -> usize {
        idx / self.boson_dim
    }

    #[inline]
    pub fn bosons(&self, idx: usize) -> usize {
        idx % self.boson_dim
    }

    #[inline]
    pub fn stride(&self, site: usize) -> usize {
        self.strides[site]
    }

    #[inline]
    pub fn occupation(&self, idx: usize, site: usize) -> usize {
        (self.bosons(idx) / self.strides[site]) % self.levels
    }

    /// σᶻ eigenvalue ±1 of spin `site`.
    #[inline]
    pub fn sz(&self, idx: usize, site: usize) -> f64 {
        if (self.spins(idx) >> site) & 1 == 1 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn index(&self, spins: usize, occupations: &[usize]) -> usize {
        let b: usize = occupations.iter().zip(&self.strides).map(|(n, s)| n * s).sum();
        spins * self.boson_dim + b
    }

    #[inline]
    pub fn flip(&self, idx: usize, site: usize) -> usize {
        let step = self.boson_dim << site;
        if (self.spins(idx) >> site) & 1 == 1 {
            idx - step
        } else {
            idx + step
        }
    }

    /// Eigenvalue ±1 of Π σᶻ (−1)^{Σ n}, which commutes with the Hamiltonian.
    pub fn parity(&self, idx: usize) -> i8 {
        let downs = self.n_sites() - self.spins(idx).count_ones() as usize;
        let n: usize = (0..self.n_sites()).map(|i| self.occupation(idx, i)).sum();
        if (downs + n).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Index of the boson sitting to the left of spin `site`, if any.
    pub fn left_boson(&self, site: usize) -> Option<usize> {
        match (site, self.spec.boundary) {
            (0, Boundary::Open) => None,
            (0, Boundary::Periodic) => Some(self.n_sites() - 1),
            (i, _) => Some(i - 1),
        }
    }
}
