//! Phase-diagram sweeps of both ansätze over rectangular grids.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ansatz_gs::{lf_solve, sh_solve, VariationalSolution};
use crate::error::{IsbError, Result};
use crate::export::{csv_line, fmt_float};
use crate::params::ChainParams;

pub const MAX_GRID_POINTS: usize = 1_000_000;

/// Samples of one grid axis: an explicit list or an inclusive linspace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AxisSpec {
    Values(Vec<f64>),
    Linspace { start: f64, stop: f64, n: usize },
}

impl AxisSpec {
    pub fn samples(&self) -> Vec<f64> {
        match self {
            AxisSpec::Values(v) => v.clone(),
            AxisSpec::Linspace { start, stop, n } => match n {
                0 => Vec::new(),
                1 => vec![*start],
                _ => (0..*n)
                    .map(|i| start + (stop - start) * i as f64 / (*n - 1) as f64)
                    .collect(),
            },
        }
    }

    pub fn len(&self) -> usize {
        match self {
            AxisSpec::Values(v) => v.len(),
            AxisSpec::Linspace { n, .. } => *n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Grid over (ω, ω₀, g) or over (δ, θ, g) with ω = δ cos θ, ω₀ = δ sin θ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GridSpec {
    Rect { omega: AxisSpec, omega0: AxisSpec, g: AxisSpec },
    Polar { delta: AxisSpec, theta: AxisSpec, g: AxisSpec },
}

impl GridSpec {
    pub fn axis_names(&self) -> [&'static str; 3] {
        match self {
            GridSpec::Rect { .. } => ["omega", "omega0", "g"],
            GridSpec::Polar { .. } => ["delta", "theta", "g"],
        }
    }

    fn axes(&self) -> [&AxisSpec; 3] {
        match self {
            GridSpec::Rect { omega, omega0, g } => [omega, omega0, g],
            GridSpec::Polar { delta, theta, g } => [delta, theta, g],
        }
    }

    pub fn n_points(&self) -> usize {
        self.axes().iter().map(|a| a.len()).product()
    }

    /// Grid coordinates in row-major order, last axis fastest.
    pub fn points(&self) -> Result<Vec<[f64; 3]>> {
        let n = self.n_points();
        if n == 0 {
            return Err(IsbError::InvalidParams("empty phase-diagram grid".into()));
        }
        if n > MAX_GRID_POINTS {
            return Err(IsbError::InvalidParams(format!(
                "grid has {n} points, more than {MAX_GRID_POINTS}"
            )));
        }
        let [a, b, c] = self.axes().map(|x| x.samples());
        let mut out = Vec::with_capacity(n);
        for &x in &a {
            for &y in &b {
                for &z in &c {
                    out.push([x, y, z]);
                }
            }
        }
        Ok(out)
    }

    pub fn chain_params(&self, c: [f64; 3]) -> Result<ChainParams> {
        match self {
            GridSpec::Rect { .. } => ChainParams::new(c[1], c[0], c[2]),
            GridSpec::Polar { .. } => {
                let (omega, omega0) = (c[0] * c[1].cos(), c[0] * c[1].sin());
                // Round-off at θ = 0 must not produce a negative spin frequency.
                ChainParams::new(omega0.max(0.0), omega, c[2])
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseRow {
    pub index: usize,
    pub coords: [f64; 3],
    pub params: Option<ChainParams>,
    pub lf: Option<VariationalSolution>,
    pub sh: Option<VariationalSolution>,
    pub errors: Vec<String>,
}

fn solve_point(spec: &GridSpec, index: usize, coords: [f64; 3]) -> PhaseRow {
    let mut row = PhaseRow { index, coords, params: None, lf: None, sh: None, errors: Vec::new() };
    match spec.chain_params(coords) {
        Ok(p) => {
            row.params = Some(p);
            row.lf = Some(lf_solve(&p));
            match sh_solve(&p) {
                Ok(s) => row.sh = Some(s),
                Err(e) => row.errors.push(format!("sh: {e}")),
            }
        }
        Err(e) => row.errors.push(e.to_string()),
    }
    row
}

/// Solves every grid point with both ansätze on a pool of `workers` threads.
/// Rows come back in grid order whatever the pool size.
pub fn phase_diagram(spec: &GridSpec, workers: usize) -> Result<Vec<PhaseRow>> {
    let points = spec.points()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| IsbError::InvalidParams(format!("worker pool: {e}")))?;
    Ok(pool.install(|| {
        points
            .par_iter()
            .enumerate()
            .map(|(i, &c)| solve_point(spec, i, c))
            .collect()
    }))
}

pub const CSV_COLUMNS: [&str; 16] = [
    "index",
    "omega",
    "omega0",
    "g",
    "lf_energy_per_site",
    "lf_lambda",
    "lf_spin_magnetization",
    "lf_boson_polarization",
    "lf_ordered",
    "sh_f_star",
    "sh_alpha_star",
    "sh_energy_per_site",
    "sh_lambda",
    "sh_spin_magnetization",
    "sh_boson_polarization",
    "sh_ordered",
];

/// Grid table with the grid coordinates prepended for polar grids.
pub fn to_csv(spec: &GridSpec, rows: &[PhaseRow]) -> String {
    let polar = matches!(spec, GridSpec::Polar { .. });
    let mut cols: Vec<&str> = Vec::new();
    if polar {
        cols.extend(["delta", "theta"]);
    }
    cols.extend(CSV_COLUMNS);
    cols.push("error");
    let mut out = csv_line(&cols);

    let nan = || "nan".to_owned();
    for r in rows {
        let mut f: Vec<String> = Vec::with_capacity(cols.len());
        if polar {
            f.push(fmt_float(r.coords[0]));
            f.push(fmt_float(r.coords[1]));
        }
        f.push(r.index.to_string());
        match &r.params {
            Some(p) => f.extend([p.omega, p.omega0, p.g].map(fmt_float)),
            None => f.extend([nan(), nan(), nan()]),
        }
        match &r.lf {
            Some(s) => {
                f.extend([s.energy_per_site, s.lambda, s.spin_magnetization, s.boson_polarization].map(fmt_float));
                f.push(s.ordered.to_string());
            }
            None => f.extend((0..5).map(|_| nan())),
        }
        match &r.sh {
            Some(s) => {
                f.extend(
                    [s.f_star, s.alpha_star, s.energy_per_site, s.lambda, s.spin_magnetization, s.boson_polarization]
                        .map(fmt_float),
                );
                f.push(s.ordered.to_string());
            }
            None => f.extend((0..7).map(|_| nan())),
        }
        f.push(r.errors.join("; ").replace([',', '\n'], " "));
        out.push_str(&csv_line(f));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz_gs::lf_critical_g;
    use std::f64::consts::FRAC_PI_2;

    fn rect(omega: Vec<f64>, omega0: Vec<f64>, g: AxisSpec) -> GridSpec {
        GridSpec::Rect { omega: AxisSpec::Values(omega), omega0: AxisSpec::Values(omega0), g }
    }

    #[test]
    fn single_point_reduces_to_solvers() {
        let spec = rect(vec![1.0], vec![0.5], AxisSpec::Values(vec![0.3]));
        let rows = phase_diagram(&spec, 2).unwrap();
        assert_eq!(rows.len(), 1);
        let p = ChainParams::new(0.5, 1.0, 0.3).unwrap();
        assert_eq!(rows[0].lf.as_ref().unwrap(), &lf_solve(&p));
        assert_eq!(rows[0].sh.as_ref().unwrap(), &sh_solve(&p).unwrap());
    }

    #[test]
    fn row_major_order() {
        let spec = rect(vec![1.0, 2.0], vec![0.1, 0.2, 0.3], AxisSpec::Linspace { start: 0.0, stop: 0.4, n: 4 });
        let pts = spec.points().unwrap();
        assert_eq!(pts.len(), 24);
        assert_eq!(pts[0], [1.0, 0.1, 0.0]);
        assert_eq!(pts[1], [1.0, 0.1, 0.4 / 3.0]);
        assert_eq!(pts[4], [1.0, 0.2, 0.0]);
        assert_eq!(pts[12], [2.0, 0.1, 0.0]);
    }

    #[test]
    fn output_independent_of_workers() {
        let spec = rect(vec![0.5, 1.0], vec![0.5, 1.0], AxisSpec::Linspace { start: 0.0, stop: 0.6, n: 7 });
        let a = to_csv(&spec, &phase_diagram(&spec, 1).unwrap());
        let b = to_csv(&spec, &phase_diagram(&spec, 8).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn per_point_errors_are_recorded() {
        let spec = rect(vec![-1.0, 1.0], vec![0.5], AxisSpec::Values(vec![0.2]));
        let rows = phase_diagram(&spec, 2).unwrap();
        assert!(rows[0].params.is_none() && !rows[0].errors.is_empty());
        assert!(rows[1].lf.is_some() && rows[1].errors.is_empty());
        let csv = to_csv(&spec, &rows);
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn polar_parameterization() {
        let spec = GridSpec::Polar {
            delta: AxisSpec::Values(vec![2.0]),
            theta: AxisSpec::Values(vec![0.0, FRAC_PI_2 / 3.0]),
            g: AxisSpec::Values(vec![0.2]),
        };
        let rows = phase_diagram(&spec, 1).unwrap();
        let p = rows[1].params.unwrap();
        assert!((p.omega - 2.0 * (FRAC_PI_2 / 3.0).cos()).abs() < 1e-15);
        assert!((p.omega0 - 1.0).abs() < 1e-15);
        assert_eq!(rows[0].params.unwrap().omega0, 0.0);
        assert!(to_csv(&spec, &rows).starts_with("delta,theta,index,omega,"));
    }

    #[test]
    fn lf_contour_matches_critical_line() {
        let n = 801;
        let stop = 1.6;
        let dg = stop / (n - 1) as f64;
        let omegas = vec![1.0, 2.0, 4.0];
        let omega0s = vec![0.25, 0.5, 0.9];
        let spec = rect(omegas.clone(), omega0s.clone(), AxisSpec::Linspace { start: 0.0, stop, n });
        let rows = phase_diagram(&spec, 4).unwrap();
        for (i, &w) in omegas.iter().enumerate() {
            for (j, &w0) in omega0s.iter().enumerate() {
                let col = &rows[(i * omega0s.len() + j) * n..][..n];
                let first = col.iter().find(|r| r.lf.as_ref().unwrap().ordered).unwrap();
                let gc = lf_critical_g(w0, w).unwrap();
                assert!(first.coords[2] >= gc && first.coords[2] - gc <= dg, "{w} {w0}");
            }
        }
    }

    #[test]
    fn critical_coupling_falls_as_theta_closes() {
        let thetas: [f64; 5] = [0.6, 0.45, 0.3, 0.2, 0.1];
        let gcs: Vec<f64> = thetas
            .iter()
            .map(|&t| lf_critical_g(t.sin(), t.cos()).unwrap())
            .collect();
        assert!(gcs.windows(2).all(|w| w[1] < w[0]), "{gcs:?}");

        let n = 161;
        let spec = GridSpec::Polar {
            delta: AxisSpec::Values(vec![1.0]),
            theta: AxisSpec::Values(thetas.iter().rev().copied().collect()),
            g: AxisSpec::Linspace { start: 0.0, stop: 0.8, n },
        };
        let rows = phase_diagram(&spec, 3).unwrap();
        let onset = |k: usize| -> f64 {
            rows[k * n..][..n].iter().find(|r| r.lf.as_ref().unwrap().ordered).unwrap().coords[2]
        };
        let onsets: Vec<f64> = (0..thetas.len()).map(onset).collect();
        assert!(onsets.windows(2).all(|w| w[1] >= w[0]), "{onsets:?}");
        for (o, pin) in onsets.iter().zip(PINNED_ONSETS) {
            assert!((o - pin).abs() < 1e-12, "{onsets:?}");
        }
    }

    const PINNED_ONSETS: [f64; 5] = [0.155, 0.205, 0.24, 0.265, 0.275];

    #[test]
    fn grid_limits() {
        let big = rect(vec![1.0; 1000], vec![1.0; 1000], AxisSpec::Values(vec![0.1, 0.2]));
        assert!(phase_diagram(&big, 1).is_err());
        let empty = rect(vec![], vec![1.0], AxisSpec::Values(vec![0.1]));
        assert!(phase_diagram(&empty, 1).is_err());
    }

    #[test]
    fn grid_spec_serde() {
        let s = r#"{"kind":"polar","delta":[1.0],"theta":{"start":0.1,"stop":1.0,"n":4},"g":[0.2,0.3]}"#;
        let spec: GridSpec = serde_json::from_str(s).unwrap();
        assert_eq!(spec.n_points(), 8);
        assert_eq!(spec, serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap());
    }
}
