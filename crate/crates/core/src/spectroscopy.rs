//! Simulated probing: a broadened pole model of the Kubo response of a weakly
//! coupled resonator, and single-photon Fano transmission through a waveguide
//! side-coupled to the first spin.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::ansatz_exc::{band_point, band_structure, Band, BandPoint, MomentumGrid};
use crate::ansatz_gs::lf_solve;
use crate::error::{ensure_finite, IsbError, Result};
use crate::export::{csv_line, fmt_float};
use crate::params::ChainParams;

/// Coherent amplitudes above this leave the linear-response regime.
pub const ALPHA_P_WARN: f64 = 0.2;

/// Squared spin weight below which a mode is treated as pure boson.
pub const SPIN_WEIGHT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeParams {
    /// System-probe coupling g_p.
    pub g_p: f64,
    /// Probe resonator or waveguide reference frequency.
    pub omega_p: f64,
    /// Coherent amplitude of the probe resonator.
    pub alpha_p: f64,
    /// Waveguide group velocity.
    pub v_g: f64,
    /// Lorentzian broadening of the response.
    pub eta: f64,
}

impl Default for ProbeParams {
    fn default() -> Self {
        Self {
            g_p: 0.01,
            omega_p: 1.0,
            alpha_p: 0.1,
            v_g: 1.0,
            eta: 1e-2,
        }
    }
}

impl ProbeParams {
    /// Validates the probe and returns non-fatal warnings.
    pub fn validate(&self) -> Result<Vec<String>> {
        for (name, x) in [
            ("g_p", self.g_p),
            ("omega_p", self.omega_p),
            ("alpha_p", self.alpha_p),
            ("v_g", self.v_g),
            ("eta", self.eta),
        ] {
            ensure_finite(name, x)?;
        }
        if self.g_p < 0.0 {
            return Err(IsbError::InvalidParams(format!("g_p must be non-negative, got {}", self.g_p)));
        }
        if self.eta <= 0.0 {
            return Err(IsbError::InvalidParams(format!("eta must be positive, got {}", self.eta)));
        }
        if self.v_g <= 0.0 {
            return Err(IsbError::InvalidParams(format!("v_g must be positive, got {}", self.v_g)));
        }
        let mut warnings = Vec::new();
        if self.alpha_p.abs() > ALPHA_P_WARN {
            warnings.push(format!(
                "alpha_p = {} exceeds {ALPHA_P_WARN}; the response is no longer linear",
                self.alpha_p
            ));
        }
        Ok(warnings)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resonance {
    pub energy: f64,
    pub width: f64,
    pub band: Band,
    pub qd: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ResonanceSet {
    resonances: Vec<Resonance>,
}

impl ResonanceSet {
    pub fn new(resonances: Vec<Resonance>) -> Result<Self> {
        let mut labels = BTreeSet::new();
        for r in &resonances {
            ensure_finite("resonance energy", r.energy)?;
            ensure_finite("resonance width", r.width)?;
            if r.width < 0.0 {
                return Err(IsbError::InvalidParams(format!("negative width {}", r.width)));
            }
            if !labels.insert((r.band, r.qd.to_bits())) {
                return Err(IsbError::InvalidParams(format!(
                    "duplicate resonance label ({}, {})",
                    r.band.label(),
                    r.qd
                )));
            }
        }
        Ok(Self { resonances })
    }

    pub fn resonances(&self) -> &[Resonance] {
        &self.resonances
    }

    pub fn len(&self) -> usize {
        self.resonances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.resonances.is_empty()
    }

    pub fn get(&self, band: Band, qd: f64) -> Option<&Resonance> {
        self.resonances.iter().find(|r| r.band == band && r.qd == qd)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumValues {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl SpectrumValues {
    pub fn len(&self) -> usize {
        match self {
            SpectrumValues::Real(v) => v.len(),
            SpectrumValues::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// |value| at flat index `i`.
    pub fn modulus(&self, i: usize) -> f64 {
        match self {
            SpectrumValues::Real(v) => v[i].abs(),
            SpectrumValues::Complex(v) => v[i].norm(),
        }
    }
}

/// Sampled spectrum on the outer product of its axes, first axis outermost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumCurve {
    pub axes: Vec<Axis>,
    pub value_name: String,
    pub values: SpectrumValues,
    pub metadata: serde_json::Value,
}

impl SpectrumCurve {
    pub fn new(
        axes: Vec<Axis>,
        value_name: &str,
        values: SpectrumValues,
        metadata: serde_json::Value,
    ) -> Result<Self> {
        for a in &axes {
            if a.values.is_empty() {
                return Err(IsbError::InvalidParams(format!("axis {} is empty", a.name)));
            }
            for x in &a.values {
                ensure_finite(&a.name, *x)?;
            }
            if a.values.windows(2).any(|w| w[1] <= w[0]) {
                return Err(IsbError::InvalidParams(format!("axis {} is not strictly increasing", a.name)));
            }
        }
        let expected: usize = axes.iter().map(|a| a.values.len()).product();
        if values.len() != expected {
            return Err(IsbError::InvalidParams(format!(
                "{} samples for a grid of {expected} points",
                values.len()
            )));
        }
        let finite = match &values {
            SpectrumValues::Real(v) => v.iter().all(|x| x.is_finite()),
            SpectrumValues::Complex(v) => v.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
        };
        if !finite {
            return Err(IsbError::InvalidParams("spectrum contains non-finite samples".into()));
        }
        Ok(Self {
            axes,
            value_name: value_name.to_owned(),
            values,
            metadata,
        })
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.values.len()).collect()
    }

    /// Axis coordinates of flat index `i`.
    pub fn coords(&self, mut i: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.axes.len()];
        for (k, a) in self.axes.iter().enumerate().rev() {
            let n = a.values.len();
            out[k] = a.values[i % n];
            i /= n;
        }
        out
    }

    pub fn csv_header(&self) -> String {
        let mut cols: Vec<String> = self.axes.iter().map(|a| a.name.clone()).collect();
        match self.values {
            SpectrumValues::Real(_) => cols.push(self.value_name.clone()),
            SpectrumValues::Complex(_) => {
                for s in ["re", "im", "abs"] {
                    cols.push(format!("{}_{s}", self.value_name));
                }
            }
        }
        csv_line(cols)
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.csv_header();
        for i in 0..self.values.len() {
            let mut row: Vec<String> = self.coords(i).into_iter().map(fmt_float).collect();
            match &self.values {
                SpectrumValues::Real(v) => row.push(fmt_float(v[i])),
                SpectrumValues::Complex(v) => {
                    row.push(fmt_float(v[i].re));
                    row.push(fmt_float(v[i].im));
                    row.push(fmt_float(v[i].norm()));
                }
            }
            out.push_str(&csv_line(row));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("spectrum serializes")
    }
}

/// Interior local maxima of `y` sampled on `x`, as (x, y) pairs.
pub fn local_maxima(x: &[f64], y: &[f64]) -> Vec<(f64, f64)> {
    (1..y.len().saturating_sub(1))
        .filter(|&i| y[i] > y[i - 1] && y[i] >= y[i + 1])
        .map(|i| (x[i], y[i]))
        .collect()
}

/// Lorentzian-broadened retarded pole i/(ν − ε + iη).
fn pole(nu: f64, eps: f64, eta: f64) -> Complex64 {
    Complex64::new(0.0, 1.0) / Complex64::new(nu - eps, eta)
}

fn same_momentum(a: f64, b: f64) -> bool {
    let d = (a - b).rem_euclid(2.0 * PI);
    d < 1e-9 || 2.0 * PI - d < 1e-9
}

/// Kubo response A_k(ν) with a vanishing fermionic residue.
pub fn kubo_response(
    p: &ChainParams,
    probe: &ProbeParams,
    nu_grid: &[f64],
    q_grid: &[f64],
) -> Result<SpectrumCurve> {
    kubo_response_with(p, probe, nu_grid, q_grid, 0.0)
}

/// Kubo response A_k(ν) of the probed chain.
///
/// Each band contributes α_p g_p (|β_b|² + χ|β_f|²) i/(ν − ε + iη); the
/// staggered static displacement adds A_π i/(ν + iη) at k = π with
/// A_π = √N times the Lang-Firsov boson polarization.
pub fn kubo_response_with(
    p: &ChainParams,
    probe: &ProbeParams,
    nu_grid: &[f64],
    q_grid: &[f64],
    chi: f64,
) -> Result<SpectrumCurve> {
    p.validate()?;
    probe.validate()?;
    ensure_finite("chi", chi)?;
    let static_weight = {
        let pol = lf_solve(p).boson_polarization;
        p.n_sites().map_or(pol, |n| pol * (n as f64).sqrt())
    };
    let amp = probe.alpha_p * probe.g_p;
    let points: Vec<BandPoint> = q_grid.iter().map(|&q| band_point(p, q)).collect();

    let values: Vec<Complex64> = points
        .par_iter()
        .flat_map_iter(|bp| {
            let stat = same_momentum(bp.qd, PI);
            nu_grid.iter().map(move |&nu| {
                let mut a = Complex64::new(0.0, 0.0);
                if stat {
                    a += static_weight * pole(nu, 0.0, probe.eta);
                }
                if amp != 0.0 {
                    for band in Band::BOTH {
                        let (wf, wb) = bp.weights(band);
                        a += amp * (wb + chi * wf) * pole(nu, bp.energy(band), probe.eta);
                    }
                }
                a
            })
        })
        .collect();

    SpectrumCurve::new(
        vec![
            Axis { name: "qd".into(), values: q_grid.to_vec() },
            Axis { name: "nu".into(), values: nu_grid.to_vec() },
        ],
        "a",
        SpectrumValues::Complex(values),
        json!({
            "kind": "kubo",
            "chain": p,
            "probe": probe,
            "fermion_residue": chi,
            "code_version": env!("CARGO_PKG_VERSION"),
        }),
    )
}

/// t(ω) = (1 + iΣΓ/(ω − ε))⁻¹ and T = |t|². Exactly at a pole with Γ > 0 the
/// limiting value 0 is returned.
pub fn transmission_at(res: &ResonanceSet, omega: f64) -> f64 {
    let mut s = 0.0;
    for r in res.resonances() {
        if r.width == 0.0 {
            continue;
        }
        let d = omega - r.energy;
        if d == 0.0 {
            return 0.0;
        }
        s += r.width / d;
    }
    1.0 / (1.0 + s * s)
}

pub fn fano_transmission(res: &ResonanceSet, omega_k_grid: &[f64]) -> Result<SpectrumCurve> {
    let values: Vec<f64> = omega_k_grid.par_iter().map(|&w| transmission_at(res, w)).collect();
    SpectrumCurve::new(
        vec![Axis { name: "omega_k".into(), values: omega_k_grid.to_vec() }],
        "transmission",
        SpectrumValues::Real(values),
        json!({
            "kind": "fano",
            "resonances": res,
            "code_version": env!("CARGO_PKG_VERSION"),
        }),
    )
}

/// Lowest excitation levels of a small exact chain and their coupling to the
/// probed spin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCouplings {
    pub n_sites: usize,
    pub levels: Vec<OracleLevel>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleLevel {
    /// E_n − E_0.
    pub gap: f64,
    /// Σ |⟨n|σˣ₁|GS⟩|² over the degenerate level.
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WidthEntry {
    pub band: Band,
    pub qd: f64,
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingModel {
    Uniform(f64),
    FromOracle(OracleCouplings),
    Table(Vec<WidthEntry>),
}

/// True where the two-band structure forbids a coupling to the waveguide:
/// the upper band at k = 0 and any pure-boson mode.
pub fn coupling_forbidden(bp: &BandPoint, band: Band) -> bool {
    (band == Band::Plus && bp.qd == 0.0) || bp.weights(band).0 < SPIN_WEIGHT_EPS
}

/// Resonances of the N-site chain on the half-zone momentum grid.
pub fn resonances_from_ansatz(
    p: &ChainParams,
    probe: &ProbeParams,
    couplings: &CouplingModel,
) -> Result<ResonanceSet> {
    probe.validate()?;
    let n = p
        .n_sites()
        .ok_or_else(|| IsbError::InvalidParams("resonances need a finite chain".into()))?;
    let bands = band_structure(p, 0, MomentumGrid::FiniteN)?;

    if let CouplingModel::FromOracle(o) = couplings {
        if o.n_sites != n {
            return Err(IsbError::OracleMismatch(format!(
                "oracle has {} sites, chain has {n}",
                o.n_sites
            )));
        }
    }
    if let CouplingModel::Uniform(g0) = couplings {
        if !(*g0 >= 0.0 && g0.is_finite()) {
            return Err(IsbError::InvalidParams(format!("uniform width must be non-negative, got {g0}")));
        }
    }

    let mut out = Vec::with_capacity(2 * bands.len());
    for bp in &bands {
        for band in Band::BOTH {
            let energy = bp.energy(band);
            let width = if coupling_forbidden(bp, band) {
                0.0
            } else {
                match couplings {
                    CouplingModel::Uniform(g0) => *g0,
                    CouplingModel::FromOracle(o) => {
                        oracle_weight(o, energy) * probe.g_p * probe.g_p / probe.v_g
                    }
                    CouplingModel::Table(t) => t
                        .iter()
                        .find(|e| e.band == band && same_momentum(e.qd, bp.qd))
                        .map(|e| e.width)
                        .ok_or_else(|| {
                            IsbError::InvalidParams(format!(
                                "no width for ({}, {})",
                                band.label(),
                                bp.qd
                            ))
                        })?,
                }
            };
            out.push(Resonance { energy, width, band, qd: bp.qd });
        }
    }
    ResonanceSet::new(out)
}

/// Weight of the coupled oracle level nearest to `energy`.
fn oracle_weight(o: &OracleCouplings, energy: f64) -> f64 {
    let max = o.levels.iter().map(|l| l.weight).fold(0.0, f64::max);
    o.levels
        .iter()
        .filter(|l| l.weight > 1e-12 * max)
        .min_by(|a, b| (a.gap - energy).abs().total_cmp(&(b.gap - energy).abs()))
        .map_or(0.0, |l| l.weight)
}

/// Ratios above this are reported as unresolved.
pub const RESOLUTION_RATIO: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolutionEntry {
    pub band: Band,
    pub qd: f64,
    pub energy: f64,
    pub width: f64,
    /// Distance to the nearest other resonance; infinite when alone.
    pub spacing: f64,
    pub ratio: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolutionReport {
    pub entries: Vec<ResolutionEntry>,
    pub all_resolved: bool,
}

pub fn well_resolved_check(res: &ResonanceSet) -> Result<ResolutionReport> {
    if res.is_empty() {
        return Err(IsbError::InvalidParams("no resonances to check".into()));
    }
    let rs = res.resonances();
    let entries: Vec<ResolutionEntry> = rs
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let spacing = rs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, o)| (o.energy - r.energy).abs())
                .fold(f64::INFINITY, f64::min);
            let ratio = if r.width == 0.0 { 0.0 } else { r.width / spacing };
            ResolutionEntry {
                band: r.band,
                qd: r.qd,
                energy: r.energy,
                width: r.width,
                spacing,
                ratio,
                flagged: ratio > RESOLUTION_RATIO,
            }
        })
        .collect();
    let all_resolved = entries.iter().all(|e| !e.flagged);
    Ok(ResolutionReport { entries, all_resolved })
}
