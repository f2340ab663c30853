//! Complete elliptic integral of the second kind and the modulus map used by
//! the Pfeuty ground-state energy of the transverse-field Ising chain.
//!
//! Conventions: the argument is the *modulus* θ (not the parameter m = θ²),
//!
//! ```text
//! E(θ) = ∫₀^{π/2} dq √(1 − θ² sin² q)
//! ```

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{IsbError, Result};

/// Relative convergence threshold of the AGM iteration.
const AGM_TOL: f64 = 1e-15;
const AGM_MAX_ITER: usize = 64;

/// Elliptic modulus θ in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct EllipticArg(f64);

impl EllipticArg {
    pub fn new(theta: f64) -> Result<Self> {
        if !theta.is_finite() || !(0.0..=1.0).contains(&theta) {
            return Err(IsbError::Domain(format!(
                "elliptic modulus must lie in [0, 1], got {theta}"
            )));
        }
        Ok(Self(theta))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Complete elliptic integral of the second kind E(θ).
///
/// Uses the arithmetic-geometric mean:
/// `E = K · (1 − Σ_n 2^{n−1} c_n²)` with `K = π / (2·AGM(1, √(1−θ²)))`.
pub fn ellipe(theta: EllipticArg) -> f64 {
    let k = theta.value();
    if k == 0.0 {
        return FRAC_PI_2;
    }
    if k == 1.0 {
        return 1.0;
    }

    let mut a = 1.0_f64;
    // √(1−k²) computed as √((1−k)(1+k)) keeps precision as k → 1.
    let mut b = ((1.0 - k) * (1.0 + k)).sqrt();
    let mut c = k;
    let mut sum = 0.5 * c * c;
    let mut pow2 = 0.5;

    for _ in 0..AGM_MAX_ITER {
        let a_next = 0.5 * (a + b);
        let b_next = (a * b).sqrt();
        c = 0.5 * (a - b);
        pow2 *= 2.0;
        sum += pow2 * c * c;
        a = a_next;
        b = b_next;
        if (a - b).abs() <= AGM_TOL * a {
            break;
        }
    }

    FRAC_PI_2 / a * (1.0 - sum)
}

/// Checked convenience wrapper around [`ellipe`] for a raw modulus.
pub fn ellipe_checked(theta: f64) -> Result<f64> {
    EllipticArg::new(theta).map(ellipe)
}

/// θ(λ) = √(4λ / (1+λ)²).
///
/// Symmetric under λ → 1/λ and equal to one only at λ = 1.
pub fn theta_from_lambda(lambda: f64) -> Result<EllipticArg> {
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(IsbError::Domain(format!(
            "lambda must be finite and non-negative, got {lambda}"
        )));
    }
    let theta = 2.0 * lambda.sqrt() / (1.0 + lambda);
    // Rounding can push the result a few ulps above one near λ = 1.
    EllipticArg::new(theta.min(1.0))
}
