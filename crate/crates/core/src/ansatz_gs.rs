//! Variational ground states: the Lang-Firsov polaron ansatz (closed form)
//! and the Silbey-Harris ansatz with a variational displacement `f` and a
//! uniform coherent amplitude `α` in the sublattice-rotated frame.

use serde::{Deserialize, Serialize};

use crate::error::{IsbError, Result};
use crate::params::ChainParams;
use crate::simplex::{self, SimplexOptions};
use crate::tim::{self, TimParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnsatzKind {
    LangFirsov,
    SilbeyHarris,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariationalSolution {
    pub kind: AnsatzKind,
    /// Polaron displacement; equals g for Lang-Firsov.
    pub f_star: f64,
    /// Coherent amplitude, non-negative; zero for Lang-Firsov.
    pub alpha_star: f64,
    pub energy_per_site: f64,
    /// h_t / |J| of the effective Ising chain (`+∞` when J = 0).
    pub lambda: f64,
    /// Staggered amplitude |⟨σˣ⟩|.
    pub spin_magnetization: f64,
    /// Staggered amplitude |⟨a⟩|.
    pub boson_polarization: f64,
    pub ordered: bool,
}

/// J = 2g²/ω, h_t = (ω₀/2) e^{−4g²/ω²}.
pub fn lf_effective(p: &ChainParams) -> TimParams {
    TimParams {
        j: 2.0 * p.g * p.g / p.omega,
        h_t: 0.5 * p.omega0 * (-4.0 * p.g * p.g / (p.omega * p.omega)).exp(),
        h_l: 0.0,
    }
}

fn order_parameter(lambda: f64) -> f64 {
    tim::magnetization(lambda).expect("lambda is non-negative")
}

pub fn lf_solve(p: &ChainParams) -> VariationalSolution {
    let t = lf_effective(p);
    let lambda = t.lambda();
    let m = order_parameter(lambda);
    VariationalSolution {
        kind: AnsatzKind::LangFirsov,
        f_star: p.g,
        alpha_star: 0.0,
        energy_per_site: -2.0 * p.g * p.g / p.omega + tim::ground_energy_per_site(&t),
        lambda,
        spin_magnetization: m,
        boson_polarization: (2.0 * p.g / p.omega).abs() * m,
        ordered: lambda < 1.0,
    }
}

/// Lang-Firsov state energy on a periodic chain of `n` sites, using the
/// exact finite-size Ising ground state.
pub fn lf_finite_energy(p: &ChainParams, n: usize) -> Result<f64> {
    let t = lf_effective(p);
    Ok(-2.0 * p.g * p.g / p.omega * n as f64 + tim::finite_ground_energy(&t, n)?)
}

/// Unique g ≥ 0 with h_t(g) = J(g), by bisection in x = g².
pub fn lf_critical_g(omega0: f64, omega: f64) -> Result<f64> {
    ChainParams::new(omega0, omega, 0.0)?;
    if omega0 == 0.0 {
        return Ok(0.0);
    }
    // h_t − J is decreasing in x and negative at x = ω ω₀ / 4.
    let mismatch = |x: f64| 0.5 * omega0 * (-4.0 * x / (omega * omega)).exp() - 2.0 * x / omega;
    let (mut lo, mut hi) = (0.0, 0.25 * omega * omega0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mismatch(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok((0.5 * (lo + hi)).sqrt())
}

/// J(f) = 2f(f−2g)/ω, h_t(f) = (ω₀/2) e^{−4f²/ω²}, h_ℓ(f, α) = 4α(g−f).
pub fn sh_effective(p: &ChainParams, f: f64, alpha: f64) -> TimParams {
    TimParams {
        j: 2.0 * f * (f - 2.0 * p.g) / p.omega,
        h_t: 0.5 * p.omega0 * (-4.0 * f * f / (p.omega * p.omega)).exp(),
        h_l: 4.0 * alpha * (p.g - f),
    }
}

/// Silbey-Harris energy per site with the Hartree-Fock decoupling of the
/// longitudinal field.
///
/// The decoupled ⟨σˣ⟩ is taken from the zero-field chain and oriented
/// against h_ℓ, so the energy is even in α.
pub fn sh_energy(p: &ChainParams, f: f64, alpha: f64) -> f64 {
    let t = sh_effective(p, f, alpha);
    let m = order_parameter(t.lambda());
    t.j + p.omega * alpha * alpha + tim::ground_energy_per_site(&t) - t.h_l.abs() * m
}

/// Exact expectation value of the chain Hamiltonian in the Silbey-Harris
/// trial state built on the finite-size Ising ground state (periodic, `n`
/// sites). The longitudinal term averages to zero in that state.
pub fn sh_finite_energy(p: &ChainParams, f: f64, alpha: f64, n: usize) -> Result<f64> {
    let t = sh_effective(p, f, alpha);
    Ok((t.j + p.omega * alpha * alpha) * n as f64 + tim::finite_ground_energy(&t, n)?)
}

fn sh_solution(p: &ChainParams, f: f64, alpha: f64) -> VariationalSolution {
    let alpha = alpha.abs();
    let t = sh_effective(p, f, alpha);
    let lambda = t.lambda();
    let m = order_parameter(lambda);
    // Orientation of the rotated-frame magnetization.
    let s = if t.h_l > 0.0 { -1.0 } else if t.h_l < 0.0 { 1.0 } else { -1.0 };
    VariationalSolution {
        kind: AnsatzKind::SilbeyHarris,
        f_star: f,
        alpha_star: alpha,
        energy_per_site: sh_energy(p, f, alpha),
        lambda,
        spin_magnetization: m,
        boson_polarization: (alpha - 2.0 * f / p.omega * s * m).abs(),
        ordered: lambda < 1.0,
    }
}

/// Two-start Nelder-Mead minimisation of [`sh_energy`] from (g, 0) and (0, 0),
/// refined by Newton steps where the landscape is smooth.
pub fn sh_solve(p: &ChainParams) -> Result<VariationalSolution> {
    p.validate()?;
    let scale = p.energy_scale();
    let opts = SimplexOptions {
        step: 0.25 * p.g.abs().max(1e-3 * scale),
        x_tol: 1e-10 * scale,
        f_tol: 1e-13 * scale.max(f64::MIN_POSITIVE),
        max_iter: 20_000,
    };
    let energy = |x: [f64; 2]| sh_energy(p, x[0], x[1]);

    let runs = [[p.g, 0.0], [0.0, 0.0]].map(|x0| simplex::minimize(energy, x0, &opts));
    let best = runs
        .iter()
        .filter(|r| r.converged)
        .min_by(|a, b| a.fx.total_cmp(&b.fx));
    match best {
        Some(r) => {
            let (x, _) = simplex::newton_polish(energy, r.x, 1e-5 * scale, 50);
            Ok(sh_solution(p, x[0], x[1]))
        }
        None => {
            let r = runs.iter().min_by(|a, b| a.fx.total_cmp(&b.fx)).unwrap();
            Err(IsbError::NotConverged {
                iterations: r.iterations,
                best_energy: r.fx,
                f: r.x[0],
                alpha: r.x[1].abs(),
            })
        }
    }
}

/// Smallest g at which the Silbey-Harris minimiser orders (λ_t < 1).
///
/// Scans upward in steps of a fraction of the Lang-Firsov critical
/// coupling, then bisects the first crossing to relative tolerance 1e−6.
pub fn sh_critical_g(omega0: f64, omega: f64) -> Result<f64> {
    let g_lf = lf_critical_g(omega0, omega)?;
    if g_lf == 0.0 {
        return Ok(0.0);
    }
    let lambda_at = |g: f64| -> Result<f64> {
        Ok(sh_solve(&ChainParams::new(omega0, omega, g)?)?.lambda)
    };

    let step = g_lf / 16.0;
    let mut lo = 0.0;
    let mut hi = None;
    for k in 1..=16 * 256 {
        let g = k as f64 * step;
        if lambda_at(g)? < 1.0 {
            hi = Some(g);
            break;
        }
        lo = g;
    }
    let mut hi = hi.ok_or_else(|| {
        IsbError::InvalidParams(format!(
            "no ordered Silbey-Harris solution below g = {}",
            256.0 * g_lf
        ))
    })?;
    while hi - lo > 1e-7 * hi {
        let mid = 0.5 * (lo + hi);
        if lambda_at(mid)? < 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
