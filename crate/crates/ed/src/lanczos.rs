//! Lanczos eigensolver for the lowest eigenpairs of a real symmetric operator:
//! full reorthogonalization, explicit restarts and locking of converged pairs.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{EdError, Result};
use crate::sparse::CsrMatrix;

pub const KRYLOV_CAP: usize = 60;
const PAR_LEN: usize = 1 << 14;
const CHUNK: usize = 4096;
/// Memory budget for the stored Krylov basis, in bytes.
pub const KRYLOV_BYTES: usize = 512 << 20;

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    /// Residual target relative to the operator norm bound.
    pub tol: f64,
    pub krylov_cap: usize,
    pub max_restarts: usize,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            krylov_cap: KRYLOV_CAP,
            max_restarts: 500,
            seed: 0x15b_c4a1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub norm_bound: f64,
    pub matvecs: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = dot(v, v).sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

/// Two passes of classical Gram-Schmidt against every vector of `sets`.
/// Both passes cover all sets so that no component survives a later
/// cancellation. Work is split over rows with a fixed summation order, so
/// the result does not depend on the number of threads.
fn orthogonalize(v: &mut [f64], sets: &[&[Vec<f64>]]) {
    let basis: Vec<&Vec<f64>> = sets.iter().flat_map(|s| s.iter()).collect();
    if basis.is_empty() {
        return;
    }
    for _ in 0..2 {
        let coeffs: Vec<f64> = if v.len() >= PAR_LEN {
            basis.par_iter().map(|b| dot(b, v)).collect()
        } else {
            basis.iter().map(|b| dot(b, v)).collect()
        };
        let update = |(c, chunk): (usize, &mut [f64])| {
            let off = c * CHUNK;
            for (k, b) in basis.iter().enumerate() {
                let ck = coeffs[k];
                for (x, bi) in chunk.iter_mut().zip(&b[off..]) {
                    *x -= ck * bi;
                }
            }
        };
        if v.len() >= PAR_LEN {
            v.par_chunks_mut(CHUNK).enumerate().for_each(update);
        } else {
            v.chunks_mut(CHUNK).enumerate().for_each(update);
        }
    }
}

/// The `k` lowest eigenpairs of `h`, ascending.
pub fn lowest_eigenpairs(h: &CsrMatrix, k: usize, opts: &LanczosOptions) -> Result<Eigenpairs> {
    let n = h.n;
    if k == 0 || k > n {
        return Err(EdError::InvalidArgument(format!("cannot compute {k} eigenpairs of a {n}-dimensional operator")));
    }
    let norm_bound = h.norm_bound().max(f64::MIN_POSITIVE);
    let target = opts.tol * norm_bound;
    let mem_cap = (KRYLOV_BYTES / (8 * n)).max(8);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let mut locked: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut values = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    let mut matvecs = 0;
    let mut w = vec![0.0; n];

    for index in 0..k {
        let room = n - locked.len();
        let m_cap = opts.krylov_cap.min(mem_cap).min(room).max(1);
        let mut start: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        orthogonalize(&mut start, &[&locked]);
        normalize(&mut start);

        let mut done = None;
        let mut last_res = f64::INFINITY;
        for _restart in 0..opts.max_restarts {
            let mut v: Vec<Vec<f64>> = vec![start.clone()];
            let mut alpha: Vec<f64> = Vec::new();
            let mut beta: Vec<f64> = Vec::new();
            let ritz: (f64, Vec<f64>) = loop {
                let j = v.len() - 1;
                h.matvec(&v[j], &mut w);
                matvecs += 1;
                let a = dot(&v[j], &w);
                alpha.push(a);
                orthogonalize(&mut w, &[&locked, &v]);
                let b = dot(&w, &w).sqrt();
                let m = alpha.len();
                // An invariant subspace: the tridiagonal is exact and any
                // further vector would be rounding noise.
                let breakdown = b <= 0.01 * target;
                if breakdown || m == m_cap || m.is_multiple_of(10) {
                    let (theta, s) = lowest_ritz(&alpha, &beta);
                    let estimate = b * s[m - 1].abs();
                    if estimate <= 0.1 * target || m == m_cap || breakdown {
                        break (theta, s);
                    }
                }
                beta.push(b);
                let next: Vec<f64> = w.iter().map(|x| x / b).collect();
                v.push(next);
            };
            let (_, s) = ritz;
            let mut y = vec![0.0; n];
            for (sj, vj) in s.iter().zip(&v) {
                axpy(*sj, vj, &mut y);
            }
            orthogonalize(&mut y, &[&locked]);
            normalize(&mut y);
            h.matvec(&y, &mut w);
            matvecs += 1;
            let rq = dot(&y, &w);
            let res = w.iter().zip(&y).map(|(hy, yi)| (hy - rq * yi).powi(2)).sum::<f64>().sqrt();
            last_res = res;
            if res <= target {
                done = Some((rq, y, res));
                break;
            }
            start = y;
        }
        match done {
            Some((e, y, res)) => {
                values.push(e);
                locked.push(y);
                residuals.push(res);
            }
            None => {
                return Err(EdError::NotConverged {
                    index,
                    residual: last_res / norm_bound,
                    iterations: matvecs,
                })
            }
        }
    }

    // Locking finds pairs in no particular order; sort ascending.
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    Ok(Eigenpairs {
        values: order.iter().map(|&i| values[i]).collect(),
        vectors: order.iter().map(|&i| locked[i].clone()).collect(),
        residuals: order.iter().map(|&i| residuals[i]).collect(),
        norm_bound,
        matvecs,
    })
}

/// Lowest eigenpair of the tridiagonal matrix (alpha, beta).
fn lowest_ritz(alpha: &[f64], beta: &[f64]) -> (f64, Vec<f64>) {
    let m = alpha.len();
    let t = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let (imin, theta) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, &e)| (i, e))
        .unwrap();
    (theta, eig.eigenvectors.column(imin).iter().copied().collect())
}

/// All eigenvalues of a small operator by dense diagonalization.
pub fn dense_spectrum(h: &CsrMatrix) -> Vec<f64> {
    let d = h.to_dense();
    let m = DMatrix::from_fn(h.n, h.n, |i, j| d[i][j]);
    let mut e: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}
