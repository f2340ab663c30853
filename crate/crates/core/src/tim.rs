//! Exact solution of the periodic transverse-field Ising chain
//!
//! ```text
//! H = J Σ σˣᵢ σˣᵢ₊₁ + h_t Σ σᶻᵢ
//! ```
//!
//! after Jordan-Wigner and Bogoliubov transformations. The Nambu block at
//! momentum q is `[[A, B], [B*, −A]]` with `A = 2(J cos q + h_t)` and
//! `B = 2iJ sin q`; its positive eigenvalue is the quasiparticle energy ε_q.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, IsbError, Result};
use crate::specfun::{ellipe, theta_from_lambda};

/// Energies below this are treated as a closed gap.
pub const GAPLESS_EPS: f64 = 1e-12;

/// Effective Ising couplings produced by a variational transformation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimParams {
    /// Ising coupling; positive is antiferromagnetic.
    pub j: f64,
    /// Transverse field, non-negative.
    pub h_t: f64,
    /// Longitudinal field. Only the Silbey-Harris energy uses it.
    pub h_l: f64,
}

impl TimParams {
    pub fn new(j: f64, h_t: f64, h_l: f64) -> Result<Self> {
        ensure_finite("J", j)?;
        ensure_finite("h_t", h_t)?;
        ensure_finite("h_l", h_l)?;
        if h_t < 0.0 {
            return Err(IsbError::InvalidParams(format!(
                "transverse field must be non-negative, got {h_t}"
            )));
        }
        Ok(Self { j, h_t, h_l })
    }

    /// Control ratio λ = h_t / |J|; `+∞` when J = 0.
    pub fn lambda(&self) -> f64 {
        if self.j == 0.0 {
            f64::INFINITY
        } else {
            self.h_t / self.j.abs()
        }
    }
}

/// Bogoliubov coefficients of the quasiparticle γ†_q = u_q c†_q + v*_q c₋q.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BogoliubovPair {
    pub u: Complex64,
    pub v: Complex64,
    pub qd: f64,
    /// Set when ε_q < [`GAPLESS_EPS`]; the pair is then a fixed tie-break.
    pub gapless: bool,
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_angle(qd: f64) -> f64 {
    let r = qd.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Quasiparticle dispersion ε_q = 2 √((J cos q + h_t)² + (J sin q)²).
pub fn dispersion(p: &TimParams, qd: f64) -> f64 {
    let a = p.j * qd.cos() + p.h_t;
    let b = p.j * qd.sin();
    2.0 * a.hypot(b)
}

/// Bogoliubov pair at momentum `qd`, with u real and non-negative.
pub fn bogoliubov(p: &TimParams, qd: f64) -> BogoliubovPair {
    let qd = wrap_angle(qd);
    let a = 2.0 * (p.j * qd.cos() + p.h_t);
    let b = Complex64::new(0.0, 2.0 * p.j * qd.sin());
    let eps = dispersion(p, qd);

    if eps < GAPLESS_EPS {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        return BogoliubovPair {
            u: Complex64::new(s, 0.0),
            v: Complex64::new(0.0, s),
            qd,
            gapless: true,
        };
    }

    let u = ((1.0 + a / eps) * 0.5).clamp(0.0, 1.0).sqrt();
    let v_mod = ((1.0 - a / eps) * 0.5).clamp(0.0, 1.0).sqrt();
    // (A − ε) u + B v* = 0 fixes the phase of v* to that of B*.
    let v_conj = if b.norm() > 0.0 {
        b.conj() / b.norm() * v_mod
    } else {
        Complex64::new(v_mod, 0.0)
    };

    BogoliubovPair {
        u: Complex64::new(u, 0.0),
        v: v_conj.conj(),
        qd,
        gapless: false,
    }
}

/// Thermodynamic-limit ground energy per site,
/// `−(2|J|/π)(1+λ) E(θ(λ))`, or `−h_t` when J = 0. The longitudinal
/// field is ignored.
pub fn ground_energy_per_site(p: &TimParams) -> f64 {
    let j = p.j.abs();
    if j == 0.0 {
        return -p.h_t;
    }
    let lambda = p.h_t / j;
    let theta = theta_from_lambda(lambda).expect("lambda is finite and non-negative");
    -(2.0 * j / PI) * (1.0 + lambda) * ellipe(theta)
}

/// Ground energy of the periodic `n`-site chain from the antiperiodic
/// (even-parity) fermion sector, `−Σ ε_q / 2` over `q = π(2n+1)/N`.
pub fn finite_ground_energy(p: &TimParams, n: usize) -> Result<f64> {
    if !(2..=(1 << 20)).contains(&n) {
        return Err(IsbError::InvalidParams(format!(
            "site count must lie in [2, 2^20], got {n}"
        )));
    }
    if n % 2 == 1 {
        return Err(IsbError::InvalidParams(format!(
            "odd site count {n} frustrates the periodic chain"
        )));
    }
    let nf = n as f64;
    let sum: f64 = (0..n)
        .map(|k| dispersion(p, PI * (2 * k + 1) as f64 / nf))
        .sum();
    Ok(-0.5 * sum)
}

/// Heaviside step with θ(0) = 0.
pub fn heaviside(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Order parameter `(1 − λ²)^{1/8} θ(1 − λ)`.
pub fn magnetization(lambda: f64) -> Result<f64> {
    if lambda.is_nan() || lambda < 0.0 {
        return Err(IsbError::Domain(format!(
            "lambda must be non-negative, got {lambda}"
        )));
    }
    if lambda >= 1.0 {
        return Ok(0.0);
    }
    Ok(((1.0 - lambda) * (1.0 + lambda)).powf(0.125) * heaviside(1.0 - lambda))
}
