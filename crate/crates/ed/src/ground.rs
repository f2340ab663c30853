//! Low-lying spectrum, observables and matrix elements of the truncated chain.

use std::f64::consts::PI;

use isb_core::spectroscopy::{OracleCouplings, OracleLevel};
use isb_core::ChainParams;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{Basis, TruncationSpec};
use crate::error::{EdError, Result};
use crate::hamiltonian::build_sector_hamiltonian;
use crate::lanczos::{lowest_eigenpairs, LanczosOptions};

pub const MAX_EIGENPAIRS: usize = 20;

#[derive(Debug, Clone, Copy)]
pub struct EdOptions {
    pub k: usize,
    pub lanczos: LanczosOptions,
    /// Also solve at n_max − 1 and report the energy drift.
    pub drift: bool,
    pub drift_tol: f64,
    /// Levels closer than this (relative to the norm bound) count as degenerate.
    pub degeneracy_tol: f64,
}

impl Default for EdOptions {
    fn default() -> Self {
        Self {
            k: 1,
            lanczos: LanczosOptions::default(),
            drift: false,
            drift_tol: 1e-8,
            degeneracy_tol: 1e-9,
        }
    }
}

/// Per-site expectation values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observables {
    pub sigma_x: Vec<f64>,
    pub sigma_z: Vec<f64>,
    pub a: Vec<f64>,
    pub n: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderMeasures {
    /// ⟨(Σ_i (−1)^i σˣ_i / N)²⟩^{1/2}.
    pub staggered_sigma_x: f64,
    /// ⟨σˣ_0 σˣ_j⟩ for j = 0..N.
    pub correlations: Vec<f64>,
    /// Observables of (|0⟩ ± |1⟩)/√2 when the two lowest levels are a
    /// degenerate pair of opposite parity; sign chosen so ⟨σˣ_0⟩ ≥ 0.
    pub broken: Option<Observables>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Convergence {
    pub energy_lower: Option<f64>,
    /// E(n_max − 1) − E(n_max).
    pub drift: Option<f64>,
    pub max_occupation: f64,
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct EdResult {
    pub params: ChainParams,
    pub truncation: TruncationSpec,
    pub basis: Basis,
    pub energies: Vec<f64>,
    pub parities: Vec<i8>,
    pub residuals: Vec<f64>,
    /// Eigenvectors in the full product basis.
    pub vectors: Vec<Vec<f64>>,
    pub norm_bound: f64,
    pub observables: Observables,
    pub order: OrderMeasures,
    pub convergence: Convergence,
}

/// Serializable digest of an [`EdResult`] without the eigenvectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdSummary {
    pub params: ChainParams,
    pub truncation: TruncationSpec,
    pub dimension: usize,
    pub energies: Vec<f64>,
    pub parities: Vec<i8>,
    pub residuals: Vec<f64>,
    pub ground_energy_per_site: f64,
    pub observables: Observables,
    pub order: OrderMeasures,
    pub convergence: Convergence,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", content = "arg", rename_all = "snake_case")]
pub enum Operator {
    SigmaX(usize),
    SigmaZ(usize),
    A(usize),
    Number(usize),
    /// (1/√N) Σ_j e^{−i qd j} a_j.
    Aq(f64),
    /// Σ_j (−1)^j σˣ_j / N.
    StaggeredSigmaX,
    /// Σ_j (−1)^j a_j / N.
    StaggeredA,
}

/// A single-site operator applied to `v`.
pub(crate) fn apply_site(basis: &Basis, op: Operator, v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    match op {
        Operator::SigmaX(j) => {
            for (i, &x) in v.iter().enumerate() {
                if x != 0.0 {
                    out[basis.flip(i, j)] += x;
                }
            }
        }
        Operator::SigmaZ(j) => {
            for (i, &x) in v.iter().enumerate() {
                out[i] = basis.sz(i, j) * x;
            }
        }
        Operator::Number(j) => {
            for (i, &x) in v.iter().enumerate() {
                out[i] = basis.occupation(i, j) as f64 * x;
            }
        }
        Operator::A(j) => {
            let s = basis.stride(j);
            for (i, &x) in v.iter().enumerate() {
                let n = basis.occupation(i, j);
                if n > 0 && x != 0.0 {
                    out[i - s] += (n as f64).sqrt() * x;
                }
            }
        }
        _ => unreachable!("composite operators are expanded by the caller"),
    }
    out
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// ⟨bra|op|ket⟩ for real vectors in the full basis.
pub fn expectation(basis: &Basis, op: Operator, bra: &[f64], ket: &[f64]) -> Complex64 {
    let n = basis.n_sites();
    let stag = |j: usize| if j.is_multiple_of(2) { 1.0 } else { -1.0 };
    match op {
        Operator::Aq(qd) => (0..n)
            .map(|j| {
                let m = dot(bra, &apply_site(basis, Operator::A(j), ket));
                Complex64::from_polar(m / (n as f64).sqrt(), -qd * j as f64)
            })
            .sum(),
        Operator::StaggeredSigmaX => Complex64::new(
            (0..n).map(|j| stag(j) * dot(bra, &apply_site(basis, Operator::SigmaX(j), ket))).sum::<f64>() / n as f64,
            0.0,
        ),
        Operator::StaggeredA => Complex64::new(
            (0..n).map(|j| stag(j) * dot(bra, &apply_site(basis, Operator::A(j), ket))).sum::<f64>() / n as f64,
            0.0,
        ),
        site => Complex64::new(dot(bra, &apply_site(basis, site, ket)), 0.0),
    }
}

pub fn observables(basis: &Basis, v: &[f64]) -> Observables {
    let n = basis.n_sites();
    let ev = |op| expectation(basis, op, v, v).re;
    Observables {
        sigma_x: (0..n).map(|j| ev(Operator::SigmaX(j))).collect(),
        sigma_z: (0..n).map(|j| ev(Operator::SigmaZ(j))).collect(),
        a: (0..n).map(|j| ev(Operator::A(j))).collect(),
        n: (0..n).map(|j| ev(Operator::Number(j))).collect(),
    }
}

pub fn order_measures(basis: &Basis, v: &[f64]) -> OrderMeasures {
    let n = basis.n_sites();
    let flipped: Vec<Vec<f64>> = (0..n).map(|j| apply_site(basis, Operator::SigmaX(j), v)).collect();
    let mut stag = vec![0.0; v.len()];
    for (j, f) in flipped.iter().enumerate() {
        let s = if j % 2 == 0 { 1.0 } else { -1.0 } / n as f64;
        for (o, x) in stag.iter_mut().zip(f) {
            *o += s * x;
        }
    }
    OrderMeasures {
        staggered_sigma_x: dot(&stag, &stag).sqrt(),
        correlations: (0..n).map(|j| dot(&flipped[0], &flipped[j])).collect(),
        broken: None,
    }
}

pub fn ground_state(p: &ChainParams, t: &TruncationSpec, k: usize) -> Result<EdResult> {
    ground_state_with(p, t, &EdOptions { k, ..Default::default() })
}

struct Spectrum {
    energies: Vec<f64>,
    parities: Vec<i8>,
    residuals: Vec<f64>,
    vectors: Vec<Vec<f64>>,
    norm_bound: f64,
}

fn lowest_levels(p: &ChainParams, t: &TruncationSpec, k: usize, opts: &LanczosOptions) -> Result<Spectrum> {
    let mut levels: Vec<(f64, i8, f64, Vec<f64>)> = Vec::new();
    let mut norm_bound: f64 = 0.0;
    for parity in [1i8, -1] {
        let h = build_sector_hamiltonian(p, t, parity)?;
        let sector = h.sector.as_ref().expect("sector Hamiltonian");
        let kk = k.min(sector.len());
        let e = lowest_eigenpairs(&h.matrix, kk, opts)?;
        norm_bound = norm_bound.max(e.norm_bound);
        for i in 0..kk {
            levels.push((e.values[i], parity, e.residuals[i], sector.embed(&e.vectors[i], h.basis.dim)));
        }
    }
    levels.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
    levels.truncate(k);
    Ok(Spectrum {
        energies: levels.iter().map(|l| l.0).collect(),
        parities: levels.iter().map(|l| l.1).collect(),
        residuals: levels.iter().map(|l| l.2).collect(),
        vectors: levels.into_iter().map(|l| l.3).collect(),
        norm_bound,
    })
}

/// Ground energy alone.
pub fn ground_energy(p: &ChainParams, t: &TruncationSpec, opts: &LanczosOptions) -> Result<f64> {
    Ok(lowest_levels(p, t, 1, opts)?.energies[0])
}

pub fn ground_state_with(p: &ChainParams, t: &TruncationSpec, opts: &EdOptions) -> Result<EdResult> {
    if opts.k == 0 || opts.k > MAX_EIGENPAIRS {
        return Err(EdError::InvalidArgument(format!(
            "between 1 and {MAX_EIGENPAIRS} eigenpairs can be requested, got {}",
            opts.k
        )));
    }
    let basis = Basis::new(*t)?;
    // At least two levels are needed to detect a degenerate ground pair.
    let s = lowest_levels(p, t, opts.k.max(2).min(basis.dim), &opts.lanczos)?;
    let v0 = &s.vectors[0];
    let observables = observables(&basis, v0);
    let mut order = order_measures(&basis, v0);
    if s.energies.len() > 1
        && s.parities[0] != s.parities[1]
        && s.energies[1] - s.energies[0] <= opts.degeneracy_tol * s.norm_bound
    {
        let sx = expectation(&basis, Operator::SigmaX(0), v0, &s.vectors[1]).re;
        let sign = if sx >= 0.0 { 1.0 } else { -1.0 };
        let mixed: Vec<f64> = v0
            .iter()
            .zip(&s.vectors[1])
            .map(|(a, b)| (a + sign * b) * std::f64::consts::FRAC_1_SQRT_2)
            .collect();
        order.broken = Some(self::observables(&basis, &mixed));
    }

    let max_occupation = observables.n.iter().copied().fold(0.0, f64::max);
    let (energy_lower, drift) = if opts.drift && t.n_max > 1 {
        let lower = t.with_n_max(t.n_max - 1)?;
        let e = ground_energy(p, &lower, &opts.lanczos)?;
        (Some(e), Some(e - s.energies[0]))
    } else {
        (None, None)
    };
    let converged = max_occupation < 0.5 * t.n_max as f64 && drift.is_none_or(|d| d.abs() <= opts.drift_tol);

    let k = opts.k.min(s.energies.len());
    Ok(EdResult {
        params: *p,
        truncation: *t,
        basis,
        energies: s.energies[..k].to_vec(),
        parities: s.parities[..k].to_vec(),
        residuals: s.residuals[..k].to_vec(),
        vectors: s.vectors.into_iter().take(k).collect(),
        norm_bound: s.norm_bound,
        observables,
        order,
        convergence: Convergence { energy_lower, drift, max_occupation, converged },
    })
}

impl EdResult {
    pub fn ground_energy(&self) -> f64 {
        self.energies[0]
    }

    pub fn matrix_element(&self, op: Operator, bra: usize, ket: usize) -> Result<Complex64> {
        for i in [bra, ket] {
            if i >= self.vectors.len() {
                return Err(EdError::IndexOutOfRange { index: i, available: self.vectors.len() });
            }
        }
        if let Operator::SigmaX(j) | Operator::SigmaZ(j) | Operator::A(j) | Operator::Number(j) = op {
            if j >= self.basis.n_sites() {
                return Err(EdError::InvalidArgument(format!("site {j} outside the chain")));
            }
        }
        Ok(expectation(&self.basis, op, &self.vectors[bra], &self.vectors[ket]))
    }

    /// Excitation levels above the ground state with their summed
    /// |⟨n|σˣ_0|GS⟩|² over degenerate multiplets.
    pub fn oracle_couplings(&self) -> OracleCouplings {
        let tol = 1e-7 * self.norm_bound;
        let mut levels: Vec<OracleLevel> = Vec::new();
        let mut last = f64::NEG_INFINITY;
        for n in 1..self.energies.len() {
            let gap = self.energies[n] - self.energies[0];
            let w = expectation(&self.basis, Operator::SigmaX(0), &self.vectors[n], &self.vectors[0]).norm_sqr();
            if gap - last <= tol {
                let l = levels.last_mut().expect("a previous level");
                l.weight += w;
            } else {
                levels.push(OracleLevel { gap, weight: w });
                last = gap;
            }
        }
        OracleCouplings { n_sites: self.basis.n_sites(), levels }
    }

    pub fn summary(&self) -> EdSummary {
        EdSummary {
            params: self.params,
            truncation: self.truncation,
            dimension: self.basis.dim,
            energies: self.energies.clone(),
            parities: self.parities.clone(),
            residuals: self.residuals.clone(),
            ground_energy_per_site: self.energies[0] / self.basis.n_sites() as f64,
            observables: self.observables.clone(),
            order: self.order.clone(),
            convergence: self.convergence,
        }
    }
}

/// Momenta 2πk/N of an N-site ring.
pub fn ring_momenta(n: usize) -> Vec<f64> {
    (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::build_hamiltonian;
    use crate::lanczos::dense_spectrum;

    fn cp(omega0: f64, omega: f64, g: f64) -> ChainParams {
        ChainParams::new(omega0, omega, g).unwrap()
    }

    #[test]
    fn dense_oracle_two_cells() {
        let p = cp(0.8, 1.0, 0.45);
        let t = TruncationSpec::new(2, 1).unwrap();
        let h = build_hamiltonian(&p, &t).unwrap();
        let dense = dense_spectrum(&h.matrix);
        let r = ground_state(&p, &t, 12).unwrap();
        for (a, b) in r.energies.iter().zip(&dense) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn free_chain() {
        let p = cp(0.6, 1.0, 0.0);
        let t = TruncationSpec::new(4, 2).unwrap();
        let r = ground_state(&p, &t, 1).unwrap();
        assert!((r.ground_energy() + 4.0 * 0.3).abs() < 1e-12);
        for j in 0..4 {
            assert!((r.matrix_element(Operator::SigmaZ(j), 0, 0).unwrap().re + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn residuals_and_parity() {
        let p = cp(0.5, 1.0, 0.3);
        let t = TruncationSpec::new(2, 4).unwrap();
        let r = ground_state(&p, &t, 6).unwrap();
        let h = build_hamiltonian(&p, &t).unwrap();
        for (i, v) in r.vectors.iter().enumerate() {
            let mut hv = vec![0.0; v.len()];
            h.matrix.matvec(v, &mut hv);
            let res: f64 = hv.iter().zip(v).map(|(a, b)| (a - r.energies[i] * b).powi(2)).sum::<f64>().sqrt();
            assert!(res <= 1e-9 * r.norm_bound);
            let par: f64 = v.iter().enumerate().map(|(k, x)| r.basis.parity(k) as f64 * x * x).sum();
            assert!((par - r.parities[i] as f64).abs() < 1e-8);
        }
        assert!(r.energies.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn matrix_elements_are_hermitian() {
        let p = cp(0.5, 1.0, 0.3);
        let t = TruncationSpec::new(2, 3).unwrap();
        let r = ground_state(&p, &t, 5).unwrap();
        for m in 0..5 {
            for n in 0..5 {
                let a = r.matrix_element(Operator::SigmaX(0), m, n).unwrap();
                let b = r.matrix_element(Operator::SigmaX(0), n, m).unwrap();
                assert!((a - b.conj()).norm() < 1e-12);
            }
        }
        assert!(matches!(r.matrix_element(Operator::SigmaX(0), 5, 0), Err(EdError::IndexOutOfRange { .. })));
        assert!(r.matrix_element(Operator::A(7), 0, 0).is_err());
    }

    #[test]
    fn symmetry_broken_displacements_without_spin_field() {
        let (omega, g) = (1.0, 0.25);
        let p = cp(0.0, omega, g);
        let t = TruncationSpec::new(2, 8).unwrap();
        let r = ground_state(&p, &t, 2).unwrap();
        let b = r.order.broken.as_ref().expect("degenerate Néel pair");
        for j in 0..2 {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            assert!((b.sigma_x[j] - sign).abs() < 1e-8);
            assert!((b.a[j] + sign * 2.0 * g / omega).abs() < 1e-6);
        }
        assert!((r.order.staggered_sigma_x - 1.0).abs() < 1e-8);
        for j in 0..2 {
            assert!(r.observables.sigma_x[j].abs() < 1e-10);
        }
    }

    #[test]
    fn translation_symmetry() {
        let p = cp(0.3, 1.0, 0.45);
        let t = TruncationSpec::new(4, 5).unwrap();
        let r = ground_state(&p, &t, 2).unwrap();
        let o = &r.observables;
        for j in 1..4 {
            assert!((o.n[j] - o.n[0]).abs() < 1e-8);
            assert!((o.sigma_z[j] - o.sigma_z[0]).abs() < 1e-8);
        }
        if let Some(b) = &r.order.broken {
            for j in 1..4 {
                assert!((b.sigma_x[j].abs() - b.sigma_x[0].abs()).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn oracle_levels_are_clustered() {
        let p = cp(1.0, 1.0, 0.1).with_sites(4).unwrap();
        let t = TruncationSpec::new(4, 3).unwrap();
        let r = ground_state(&p, &t, 8).unwrap();
        let o = r.oracle_couplings();
        assert_eq!(o.n_sites, 4);
        assert!(o.levels.windows(2).all(|w| w[1].gap > w[0].gap));
        let total: f64 = o.levels.iter().map(|l| l.weight).sum();
        // Sum rule: Σ_n |⟨n|σˣ|0⟩|² ≤ ⟨0|σˣσˣ|0⟩ = 1.
        assert!(total <= 1.0 + 1e-12 && total > 0.5);
    }

    #[test]
    fn rejects_too_many_pairs() {
        let t = TruncationSpec::new(2, 1).unwrap();
        assert!(ground_state(&cp(1.0, 1.0, 0.1), &t, 21).is_err());
    }
}
