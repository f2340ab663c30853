//! Real-time evolution of the chain coupled to a probe resonator.
//!
//! The probe mode b with n_p levels couples to spin 0:
//! H_aug = H ⊗ 1 + ω_p b†b + g_p (b + b†) σˣ_0, and starts in a truncated
//! coherent state of amplitude α_p on top of the chain ground state.
//! Augmented index = n_probe · dim + chain index.

use std::f64::consts::PI;

use isb_core::spectroscopy::ProbeParams;
use isb_core::ChainParams;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{Basis, TruncationSpec};
use crate::error::{EdError, Result};
use crate::ground::{ground_state, ground_state_with, EdOptions, Operator};
use crate::lanczos::LanczosOptions;
use crate::hamiltonian::push_row;
use crate::krylov::{propagate, PropagatorOptions};
use crate::sparse::CsrMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub dt: f64,
    pub n_steps: usize,
}

impl TimeGrid {
    pub fn new(dt: f64, n_steps: usize) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) || n_steps == 0 {
            return Err(EdError::InvalidArgument(format!(
                "time grid needs dt > 0 and at least one step, got dt={dt}, n_steps={n_steps}"
            )));
        }
        Ok(Self { dt, n_steps })
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.n_steps).map(|k| k as f64 * self.dt).collect()
    }

    pub fn duration(&self) -> f64 {
        self.n_steps as f64 * self.dt
    }

    /// Frequency resolution 2π/T of a transform over the grid.
    pub fn resolution(&self) -> f64 {
        2.0 * PI / self.duration()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicsResult {
    pub times: Vec<f64>,
    /// ⟨a_j(t)⟩ indexed [site][time].
    pub a: Vec<Vec<Complex64>>,
    /// ⟨b(t)⟩ of the probe.
    pub probe: Vec<Complex64>,
    pub ground_energy: f64,
    pub substeps: usize,
    pub matvecs: usize,
    pub max_step_error: f64,
}

/// Truncated coherent amplitudes e^{−|α|²/2} αⁿ/√n!, n = 0..=n_max, renormalized.
pub fn coherent_amplitudes(alpha: f64, n_max: usize) -> Vec<f64> {
    let mut c = Vec::with_capacity(n_max + 1);
    let mut x = (-0.5 * alpha * alpha).exp();
    for n in 0..=n_max {
        if n > 0 {
            x *= alpha / (n as f64).sqrt();
        }
        c.push(x);
    }
    let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
    c.iter().map(|v| v / norm).collect()
}

fn augmented_hamiltonian(basis: &Basis, p: &ChainParams, probe: &ProbeParams, n_p: usize) -> CsrMatrix {
    let dim = basis.dim;
    CsrMatrix::from_rows(dim * (n_p + 1), |r, out| {
        let (k, s) = (r / dim, r % dim);
        let mut row = Vec::with_capacity(4 * basis.n_sites() + 1);
        push_row(basis, p, s, &mut row);
        for (c, v) in row {
            let v = if c == s { v + probe.omega_p * k as f64 } else { v };
            out.push(((k * dim + c) as u32, v));
        }
        let flipped = basis.flip(s, 0);
        if k > 0 {
            out.push((((k - 1) * dim + flipped) as u32, probe.g_p * (k as f64).sqrt()));
        }
        if k < n_p {
            out.push((((k + 1) * dim + flipped) as u32, probe.g_p * ((k + 1) as f64).sqrt()));
        }
    })
}

fn site_lowering(basis: &Basis, psi: &[Complex64], site: usize) -> Complex64 {
    let dim = basis.dim;
    let stride = basis.stride(site);
    let mut acc = Complex64::new(0.0, 0.0);
    for (r, x) in psi.iter().enumerate() {
        let n = basis.occupation(r % dim, site);
        if n > 0 {
            acc += psi[r - stride].conj() * x * (n as f64).sqrt();
        }
    }
    acc
}

fn probe_lowering(dim: usize, psi: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (r, x) in psi.iter().enumerate().skip(dim) {
        let k = r / dim;
        acc += psi[r - dim].conj() * x * (k as f64).sqrt();
    }
    acc
}

/// Time series ⟨a_j(t)⟩ after coupling the probe at t = 0.
pub fn probe_dynamics(
    p: &ChainParams,
    t: &TruncationSpec,
    probe: &ProbeParams,
    n_p: usize,
    grid: &TimeGrid,
) -> Result<DynamicsResult> {
    probe_dynamics_with(p, t, probe, n_p, grid, &PropagatorOptions::default(), &LanczosOptions::default())
}

pub fn probe_dynamics_with(
    p: &ChainParams,
    t: &TruncationSpec,
    probe: &ProbeParams,
    n_p: usize,
    grid: &TimeGrid,
    opts: &PropagatorOptions,
    lanczos: &LanczosOptions,
) -> Result<DynamicsResult> {
    probe.validate()?;
    if n_p == 0 {
        return Err(EdError::InvalidTruncation("the probe needs at least one excited level".into()));
    }
    let aug = t.dimension().saturating_mul(n_p as u64 + 1);
    if aug > t.dim_cap {
        return Err(EdError::DimensionCap { dim: aug, cap: t.dim_cap });
    }
    let gs = ground_state_with(p, t, &EdOptions { k: 1, lanczos: *lanczos, drift: false, ..Default::default() })?;
    let basis = &gs.basis;
    let dim = basis.dim;
    let h = augmented_hamiltonian(basis, p, probe, n_p);
    let c = coherent_amplitudes(probe.alpha_p, n_p);
    let mut psi = vec![Complex64::new(0.0, 0.0); dim * (n_p + 1)];
    for (k, ck) in c.iter().enumerate() {
        for (s, v) in gs.vectors[0].iter().enumerate() {
            psi[k * dim + s] = Complex64::new(ck * v, 0.0);
        }
    }

    let n = basis.n_sites();
    let mut a = vec![Vec::with_capacity(grid.n_steps + 1); n];
    let mut probe_series = Vec::with_capacity(grid.n_steps + 1);
    let (mut substeps, mut matvecs, mut max_err) = (0, 0, 0.0f64);
    for step in 0..=grid.n_steps {
        if step > 0 {
            let s = propagate(&h, &mut psi, grid.dt, opts)?;
            substeps += s.substeps;
            matvecs += s.matvecs;
            max_err = max_err.max(s.max_error);
        }
        for (j, series) in a.iter_mut().enumerate() {
            series.push(site_lowering(basis, &psi, j));
        }
        probe_series.push(probe_lowering(dim, &psi));
    }
    Ok(DynamicsResult {
        times: grid.times(),
        a,
        probe: probe_series,
        ground_energy: gs.ground_energy(),
        substeps,
        matvecs,
        max_step_error: max_err,
    })
}

/// A(ν) = Σ_t w(t) e^{iνt} s(t) dt with s(t) = N^{−1/2} Σ_j e^{−i qd j}
/// (⟨a_j(t)⟩ − ⟨a_j(0)⟩) and a Hann window w.
pub fn spectral_response(d: &DynamicsResult, qd: f64, nu: &[f64]) -> Vec<Complex64> {
    let n = d.a.len();
    let nt = d.times.len();
    let dt = if nt > 1 { d.times[1] - d.times[0] } else { 0.0 };
    let duration = d.times[nt - 1].max(f64::MIN_POSITIVE);
    let signal: Vec<Complex64> = (0..nt)
        .map(|k| {
            let s: Complex64 = (0..n)
                .map(|j| (d.a[j][k] - d.a[j][0]) * Complex64::from_polar(1.0, -qd * j as f64))
                .sum();
            let w = 0.5 * (1.0 - (2.0 * PI * d.times[k] / duration).cos());
            s * w / (n as f64).sqrt()
        })
        .collect();
    nu.iter()
        .map(|&v| {
            signal
                .iter()
                .zip(&d.times)
                .map(|(s, t)| s * Complex64::from_polar(dt, v * t))
                .sum()
        })
        .collect()
}

/// Matrix elements ⟨n|σˣ_0|0⟩ paired with gaps, for comparison with spectral peaks.
pub fn dipole_gaps(p: &ChainParams, t: &TruncationSpec, k: usize) -> Result<Vec<(f64, f64)>> {
    let r = ground_state(p, t, k)?;
    (1..r.energies.len())
        .map(|n| {
            let m = r.matrix_element(Operator::SigmaX(0), n, 0)?;
            Ok((r.energies[n] - r.energies[0], m.norm_sqr()))
        })
        .collect()
}
