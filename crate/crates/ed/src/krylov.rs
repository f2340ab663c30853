//! Krylov approximation of exp(−iHτ)ψ for a real symmetric sparse H.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{EdError, Result};
use crate::sparse::CsrMatrix;

pub const KRYLOV_DIM: usize = 40;
/// Substeps are halved at most this many times per output step.
const MAX_HALVINGS: u32 = 40;

#[derive(Debug, Clone, Copy)]
pub struct PropagatorOptions {
    /// Accepted a-posteriori error per substep, relative to ‖ψ‖.
    pub tol: f64,
    pub krylov_dim: usize,
}

impl Default for PropagatorOptions {
    fn default() -> Self {
        Self { tol: 1e-8, krylov_dim: KRYLOV_DIM }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StepStats {
    pub substeps: usize,
    pub matvecs: usize,
    /// Largest accepted error estimate.
    pub max_error: f64,
}

fn cdot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn cnorm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

struct Krylov {
    basis: Vec<Vec<Complex64>>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    /// β_m: norm of the residual vector after the last step.
    tail: f64,
}

/// Lanczos basis of `psi`, grown until exp(−iTτ) meets `tol` or `m_max` is reached.
fn build_krylov(h: &CsrMatrix, psi: &[Complex64], m_max: usize, tau: f64, tol: f64, stats: &mut StepStats) -> Krylov {
    let norm = cnorm(psi);
    let mut basis = vec![psi.iter().map(|x| x / norm).collect::<Vec<_>>()];
    let (mut alpha, mut beta) = (Vec::new(), Vec::new());
    let mut w = vec![Complex64::new(0.0, 0.0); psi.len()];
    let scale = h.norm_bound().max(f64::MIN_POSITIVE);
    loop {
        let j = basis.len() - 1;
        h.matvec_c(&basis[j], &mut w);
        stats.matvecs += 1;
        alpha.push(cdot(&basis[j], &w).re);
        for _ in 0..2 {
            for b in &basis {
                let c = cdot(b, &w);
                for (x, y) in w.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
        let b = cnorm(&w);
        if basis.len() == m_max || b <= 1e-14 * scale {
            return Krylov { basis, alpha, beta, tail: b };
        }
        if basis.len() >= 4 {
            let k = Krylov { basis, alpha, beta, tail: b };
            if small_exp(&k, tau).1 <= 0.1 * tol {
                return k;
            }
            (basis, alpha, beta) = (k.basis, k.alpha, k.beta);
        }
        beta.push(b);
        basis.push(w.iter().map(|x| x / b).collect());
    }
}

/// exp(−iTτ) e₁ for the tridiagonal T and the error estimate
/// β_m |[exp(−iTτ)e₁]_m|.
fn small_exp(k: &Krylov, tau: f64) -> (Vec<Complex64>, f64) {
    let m = k.alpha.len();
    let t = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            k.alpha[i]
        } else if i + 1 == j {
            k.beta[i]
        } else if j + 1 == i {
            k.beta[j]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let u = &eig.eigenvectors;
    let c: Vec<Complex64> = (0..m)
        .map(|i| {
            (0..m)
                .map(|l| Complex64::from_polar(u[(i, l)] * u[(0, l)], -eig.eigenvalues[l] * tau))
                .sum()
        })
        .collect();
    let err = k.tail * c[m - 1].norm();
    (c, err)
}

/// Advance `psi` by `dt` under exp(−iH dt), splitting into substeps until
/// each error estimate is below `tol · ‖ψ‖`.
pub fn propagate(h: &CsrMatrix, psi: &mut Vec<Complex64>, dt: f64, opts: &PropagatorOptions) -> Result<StepStats> {
    let mut stats = StepStats::default();
    let mut remaining = dt;
    let mut tau = dt;
    let min_tau = dt.abs() / 2f64.powi(MAX_HALVINGS as i32);
    while remaining.abs() > 0.0 {
        tau = if tau.abs() > remaining.abs() { remaining } else { tau };
        let norm = cnorm(psi);
        if norm == 0.0 {
            return Ok(stats);
        }
        let k = build_krylov(h, psi, opts.krylov_dim.min(psi.len()).max(1), tau, opts.tol, &mut stats);
        loop {
            let (c, err) = small_exp(&k, tau);
            if err <= opts.tol {
                let mut next = vec![Complex64::new(0.0, 0.0); psi.len()];
                for (ci, v) in c.iter().zip(&k.basis) {
                    for (x, y) in next.iter_mut().zip(v) {
                        *x += ci * y * norm;
                    }
                }
                *psi = next;
                stats.substeps += 1;
                stats.max_error = stats.max_error.max(err);
                remaining -= tau;
                // Try a longer step next time when this one was very accurate.
                if err < 1e-3 * opts.tol && tau.abs() * 2.0 <= dt.abs() {
                    tau *= 2.0;
                }
                break;
            }
            tau *= 0.5;
            if tau.abs() < min_tau {
                return Err(EdError::StepRejected { estimate: err, substep: tau });
            }
        }
    }
    Ok(stats)
}
