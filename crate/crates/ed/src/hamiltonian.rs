//! Sparse Hamiltonian of the chain in the truncated product basis.

use isb_core::ChainParams;

use crate::basis::{Basis, TruncationSpec};
use crate::error::Result;
use crate::sparse::CsrMatrix;

/// The chain Hamiltonian with its basis, either on the full space or on one
/// parity sector.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    pub basis: Basis,
    pub params: ChainParams,
    pub matrix: CsrMatrix,
    /// Full-space index of each row; `None` for the full space.
    pub sector: Option<Sector>,
}

#[derive(Debug, Clone)]
pub struct Sector {
    pub parity: i8,
    pub states: Vec<u32>,
    position: Vec<u32>,
}

impl Sector {
    pub fn new(basis: &Basis, parity: i8) -> Self {
        let mut position = vec![u32::MAX; basis.dim];
        let mut states = Vec::with_capacity(basis.dim / 2 + 1);
        for i in 0..basis.dim {
            if basis.parity(i) == parity {
                position[i] = states.len() as u32;
                states.push(i as u32);
            }
        }
        Self { parity, states, position }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn position(&self, full: usize) -> Option<usize> {
        match self.position[full] {
            u32::MAX => None,
            p => Some(p as usize),
        }
    }

    /// Embeds a sector vector into the full space.
    pub fn embed(&self, v: &[f64], dim: usize) -> Vec<f64> {
        let mut out = vec![0.0; dim];
        for (k, &s) in self.states.iter().enumerate() {
            out[s as usize] = v[k];
        }
        out
    }
}

/// Row `idx` of H: diagonal Σ(ω₀/2)σᶻ + ωΣn and the couplings
/// g σˣ_i (x_i − x_{i−1}).
pub(crate) fn push_row(basis: &Basis, p: &ChainParams, idx: usize, out: &mut Vec<(usize, f64)>) {
    let n = basis.n_sites();
    let mut diag = 0.0;
    for i in 0..n {
        diag += 0.5 * p.omega0 * basis.sz(idx, i) + p.omega * basis.occupation(idx, i) as f64;
    }
    out.push((idx, diag));
    if p.g == 0.0 {
        return;
    }
    for i in 0..n {
        let flipped = basis.flip(idx, i);
        let bosons = [(Some(i), p.g), (basis.left_boson(i), -p.g)];
        for (j, c) in bosons {
            let Some(j) = j else { continue };
            let nj = basis.occupation(idx, j);
            let stride = basis.stride(j);
            if nj > 0 {
                out.push((flipped - stride, c * (nj as f64).sqrt()));
            }
            if nj < basis.spec.n_max {
                out.push((flipped + stride, c * ((nj + 1) as f64).sqrt()));
            }
        }
    }
}

pub fn build_hamiltonian(p: &ChainParams, t: &TruncationSpec) -> Result<Hamiltonian> {
    p.validate()?;
    let basis = Basis::new(*t)?;
    let matrix = CsrMatrix::from_rows(basis.dim, |r, out| {
        let mut row = Vec::with_capacity(4 * basis.n_sites() + 1);
        push_row(&basis, p, r, &mut row);
        out.extend(row.into_iter().map(|(c, v)| (c as u32, v)));
    });
    Ok(Hamiltonian { basis, params: *p, matrix, sector: None })
}

/// H restricted to the eigenspace of the parity Π σᶻ (−1)^{Σn} with value `parity`.
pub fn build_sector_hamiltonian(p: &ChainParams, t: &TruncationSpec, parity: i8) -> Result<Hamiltonian> {
    p.validate()?;
    let basis = Basis::new(*t)?;
    let sector = Sector::new(&basis, parity);
    let matrix = CsrMatrix::from_rows(sector.len(), |r, out| {
        let mut row = Vec::with_capacity(4 * basis.n_sites() + 1);
        push_row(&basis, p, sector.states[r] as usize, &mut row);
        for (c, v) in row {
            let pos = sector.position(c).expect("H conserves parity");
            out.push((pos as u32, v));
        }
    });
    Ok(Hamiltonian { basis, params: *p, matrix, sector: Some(sector) })
}
