//! Polaron trial states written out in the ED basis.
//!
//! |ψ⟩ = Σ_s φ(s) |s⟩ₓ ⊗ Π_j |β_j(s)⟩ with β_j = −(f/ω)(s_j − s_{j+1}) + α(−1)^j
//! and φ the ground state of −J(f) Σ s_j s_{j+1} + h_t(f) Σ σᶻ_j in the σˣ
//! basis. Its energy is the exact expectation value of H in the truncated
//! space, an independent check on the closed-form finite-size energies.

use isb_core::{sh_effective, ChainParams};
use nalgebra::{DMatrix, SymmetricEigen};

use crate::basis::{Basis, Boundary, TruncationSpec};
use crate::error::{EdError, Result};
use crate::hamiltonian::build_hamiltonian;

/// Unnormalized coherent amplitudes up to `n_max`.
fn coherent(beta: f64, n_max: usize) -> Vec<f64> {
    let mut c = Vec::with_capacity(n_max + 1);
    let mut x = (-0.5 * beta * beta).exp();
    for n in 0..=n_max {
        if n > 0 {
            x *= beta / (n as f64).sqrt();
        }
        c.push(x);
    }
    c
}

fn spin_value(s: usize, i: usize) -> f64 {
    if (s >> i) & 1 == 1 {
        1.0
    } else {
        -1.0
    }
}

/// Ground state φ(s) of the effective Ising chain in the σˣ basis.
fn ising_ground(n: usize, j: f64, h_t: f64) -> Vec<f64> {
    let dim = 1usize << n;
    let m = DMatrix::from_fn(dim, dim, |a, b| {
        if a == b {
            -j * (0..n).map(|i| spin_value(a, i) * spin_value(a, (i + 1) % n)).sum::<f64>()
        } else if (a ^ b).count_ones() == 1 {
            h_t
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(m);
    let imin = (0..dim).min_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b])).expect("non-empty");
    eig.eigenvectors.column(imin).iter().copied().collect()
}

/// The trial vector in the full product basis, normalized.
pub fn trial_state(p: &ChainParams, t: &TruncationSpec, f: f64, alpha: f64) -> Result<Vec<f64>> {
    if t.boundary != Boundary::Periodic {
        return Err(EdError::InvalidArgument("trial states are defined on periodic chains".into()));
    }
    if t.n_sites > 10 {
        return Err(EdError::InvalidArgument(format!("at most 10 sites are supported, got {}", t.n_sites)));
    }
    let basis = Basis::new(*t)?;
    let n = t.n_sites;
    let eff = sh_effective(p, f, alpha);
    let phi = ising_ground(n, eff.j, eff.h_t);
    let norm_spin = 2f64.powf(-0.5 * n as f64);
    let mut psi = vec![0.0; basis.dim];
    for (s, &amp) in phi.iter().enumerate() {
        if amp == 0.0 {
            continue;
        }
        let tables: Vec<Vec<f64>> = (0..n)
            .map(|j| {
                let stag = if j % 2 == 0 { 1.0 } else { -1.0 };
                let beta = -(f / p.omega) * (spin_value(s, j) - spin_value(s, (j + 1) % n)) + alpha * stag;
                coherent(beta, t.n_max)
            })
            .collect();
        for (idx, x) in psi.iter_mut().enumerate() {
            let spins = basis.spins(idx);
            // ⟨σᶻ config|s⟩ₓ: 1 for up, s_i for down.
            let mut c = amp * norm_spin;
            for i in 0..n {
                if (spins >> i) & 1 == 0 {
                    c *= spin_value(s, i);
                }
                c *= tables[i][basis.occupation(idx, i)];
            }
            *x += c;
        }
    }
    let norm = psi.iter().map(|x| x * x).sum::<f64>().sqrt();
    psi.iter_mut().for_each(|x| *x /= norm);
    Ok(psi)
}

/// ⟨ψ|H|ψ⟩ of the normalized trial state in the truncated space.
pub fn trial_energy(p: &ChainParams, t: &TruncationSpec, f: f64, alpha: f64) -> Result<f64> {
    let psi = trial_state(p, t, f, alpha)?;
    let h = build_hamiltonian(p, t)?;
    let mut hp = vec![0.0; psi.len()];
    h.matrix.matvec(&psi, &mut hp);
    Ok(psi.iter().zip(&hp).map(|(a, b)| a * b).sum())
}
