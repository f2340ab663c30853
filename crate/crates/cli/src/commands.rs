//! One function per subcommand. Each computes everything in memory and
//! returns the files to write.

use isb_core::export::{csv_line, fmt_float};
use isb_core::phase::{phase_diagram, to_csv};
use isb_core::spectroscopy::{
    fano_transmission, kubo_response_with, resonances_from_ansatz, well_resolved_check, CouplingModel, ProbeParams,
};
use isb_core::{band_structure, lf_solve, sh_solve, Band, MomentumGrid, VariationalSolution};
use isb_ed::dump::{observables_csv, time_series_csv, write_vectors};
use isb_ed::dynamics::probe_dynamics_with;
use isb_ed::krylov::PropagatorOptions;
use isb_ed::{convergence_sweep_with, ground_state_with, EdOptions, EdResult, LanczosOptions, TimeGrid};
use serde::Serialize;
use serde_json::json;

use crate::config::{Ansatz, CommandKind, CouplingSection, RunConfig};
use crate::error::CliError;
use crate::manifest::Outputs;

pub const SOLUTION_COLUMNS: [&str; 8] = [
    "kind",
    "f_star",
    "alpha_star",
    "energy_per_site",
    "lambda",
    "spin_magnetization",
    "boson_polarization",
    "ordered",
];

pub const ENERGY_COLUMNS: [&str; 4] = ["level", "energy", "parity", "residual"];

pub const BAND_COLUMNS: [&str; 10] = [
    "qd",
    "omega_q",
    "eps_q",
    "abs_g_q",
    "e_minus",
    "e_plus",
    "minus_beta_f2",
    "minus_beta_b2",
    "plus_beta_f2",
    "plus_beta_b2",
];

pub const RESONANCE_COLUMNS: [&str; 7] = ["band", "qd", "energy", "width", "spacing", "ratio", "flagged"];

pub const SWEEP_COLUMNS: [&str; 3] = ["n_max", "value", "difference"];

pub fn run(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let mut out = Outputs::default();
    if let Some(p) = &cfg.probe {
        for w in p.validate()? {
            out.warn(w);
        }
    }
    match cfg.command {
        CommandKind::Ground => ground(cfg, &mut out)?,
        CommandKind::PhaseDiagram => phase(cfg, &mut out)?,
        CommandKind::Bands => bands(cfg, &mut out)?,
        CommandKind::Kubo => kubo(cfg, &mut out)?,
        CommandKind::Fano => fano(cfg, &mut out)?,
        CommandKind::Ed => ed(cfg, &mut out)?,
        CommandKind::Convergence => convergence(cfg, &mut out)?,
    }
    Ok(out)
}

fn lanczos(cfg: &RunConfig) -> LanczosOptions {
    cfg.lanczos()
}

fn ed_options(cfg: &RunConfig) -> EdOptions {
    let e = cfg.ed.unwrap_or_default();
    EdOptions { k: e.k, drift: e.drift, lanczos: lanczos(cfg), ..Default::default() }
}

fn solution_row(s: &VariationalSolution) -> String {
    let kind = serde_json::to_value(s.kind).expect("kind serializes");
    csv_line([
        kind.as_str().unwrap_or_default().to_owned(),
        fmt_float(s.f_star),
        fmt_float(s.alpha_star),
        fmt_float(s.energy_per_site),
        fmt_float(s.lambda),
        fmt_float(s.spin_magnetization),
        fmt_float(s.boson_polarization),
        s.ordered.to_string(),
    ])
}

fn energies_csv(r: &EdResult) -> String {
    let mut s = csv_line(ENERGY_COLUMNS);
    for (i, e) in r.energies.iter().enumerate() {
        s.push_str(&csv_line([i.to_string(), fmt_float(*e), r.parities[i].to_string(), fmt_float(r.residuals[i])]));
    }
    s
}

fn warn_truncation(r: &EdResult, out: &mut Outputs) {
    let c = &r.convergence;
    if !c.converged {
        out.warn(format!(
            "truncation n_max={} not certified: max occupation {:.3e}, drift {:?}",
            r.truncation.n_max, c.max_occupation, c.drift
        ));
    }
}

fn ground(cfg: &RunConfig, out: &mut Outputs) -> Result<(), CliError> {
    let p = cfg.chain()?;
    let ansatz = cfg.ansatz.expect("validated");
    let (json, csv) = match ansatz {
        Ansatz::Lf | Ansatz::Sh => {
            let s = if ansatz == Ansatz::Lf { lf_solve(&p) } else { sh_solve(&p)? };
            let mut csv = csv_line(SOLUTION_COLUMNS);
            csv.push_str(&solution_row(&s));
            (serde_json::to_value(s).expect("solution serializes"), csv)
        }
        Ansatz::Ed => {
            let r = ground_state_with(&p, &cfg.truncation()?, &ed_options(cfg))?;
            warn_truncation(&r, out);
            (serde_json::to_value(r.summary()).expect("summary serializes"), energies_csv(&r))
        }
    };
    if cfg.format.json() {
        out.add_json("solution.json", &json);
    }
    if cfg.format.csv() {
        out.add("solution.csv", csv);
    }
    Ok(())
}

fn phase(cfg: &RunConfig, out: &mut Outputs) -> Result<(), CliError> {
    let spec = cfg.grid.as_ref().expect("validated");
    let rows = phase_diagram(spec, cfg.workers)?;
    let failed = rows.iter().filter(|r| !r.errors.is_empty()).count();
    if failed == rows.len() {
        let first = rows.first().map(|r| r.errors.join("; ")).unwrap_or_default();
        return Err(CliError::NotConverged(format!("every grid point failed, first: {first}")));
    }
    if failed > 0 {
        out.warn(format!("{failed} of {} grid points failed", rows.len()));
    }
    if cfg.format.csv() {
        out.add("grid.csv", to_csv(spec, &rows));
    }
    if cfg.format.json() {
        out.add_json("grid.json", &json!({ "grid": spec, "rows": rows }));
    }
    Ok(())
}

/// A band point without the convention-dependent phase of g_q.
#[derive(Serialize)]
struct BandRow {
    qd: f64,
    omega_q: f64,
    eps_q: f64,
    abs_g_q: f64,
    e_minus: f64,
    e_plus: f64,
    minus_beta_f2: f64,
    minus_beta_b2: f64,
    plus_beta_f2: f64,
    plus_beta_b2: f64,
}

fn bands(cfg: &RunConfig, out: &mut Outputs) -> Result<(), CliError> {
    let b = cfg.bands.expect("validated");
    let mut p = cfg.chain()?;
    if let Some(n) = b.n_sites {
        p = p.with_sites(n)?;
    }
    let rows: Vec<BandRow> = band_structure(&p, b.n_q, b.grid)?
        .iter()
        .map(|bp| {
            let (mf, mb) = bp.weights(Band::Minus);
            let (pf, pb) = bp.weights(Band::Plus);
            BandRow {
                qd: bp.qd,
                omega_q: bp.omega_q,
                eps_q: bp.eps_q,
                abs_g_q: bp.abs_g_q(),
                e_minus: bp.e_minus,
                e_plus: bp.e_plus,
                minus_beta_f2: mf,
                minus_beta_b2: mb,
                plus_beta_f2: pf,
                plus_beta_b2: pb,
            }
        })
        .collect();
    if cfg.format.csv() {
        let mut s = csv_line(BAND_COLUMNS);
        for r in &rows {
            s.push_str(&csv_line(
                [
                    r.qd,
                    r.omega_q,
                    r.eps_q,
                    r.abs_g_q,
                    r.e_minus,
                    r.e_plus,
                    r.minus_beta_f2,
                    r.minus_beta_b2,
                    r.plus_beta_f2,
                    r.plus_beta_b2,
                ]
                .map(fmt_float),
            ));
        }
        out.add("bands.csv", s);
    }
    if cfg.format.json() {
        let grid = if b.grid == MomentumGrid::FiniteN { "finite_n" } else { "uniform" };
        out.add_json("bands.json", &json!({ "params": p, "grid": grid, "points": rows }));
    }
    Ok(())
}

fn kubo(cfg: &RunConfig, out: &mut Outputs) -> Result<(), CliError> {
    let k = cfg.kubo.as_ref().expect("validated");
    let p = cfg.chain()?.with_sites(k.n_sites)?;
    let curve = kubo_response_with(&p, &cfg.probe(), &k.nu.samples(), &k.q_grid(), k.chi)?;
    if cfg.format.csv() {
        out.add("kubo.csv", curve.to_csv());
    }
    if cfg.format.json() {
        out.add_json("kubo.json", &curve.to_json());
    }
    Ok(())
}

fn coupling_model(cfg: &RunConfig, section: &CouplingSection) -> Result<CouplingModel, CliError> {
    Ok(match section {
        CouplingSection::Uniform { width } => CouplingModel::Uniform(*width),
        CouplingSection::Table { entries } => CouplingModel::Table(entries.clone()),
        CouplingSection::Oracle { levels } => {
            let opts = EdOptions { k: *levels, ..ed_options(cfg) };
            let r = ground_state_with(&cfg.chain()?, &cfg.truncation()?, &opts)?;
            CouplingModel::FromOracle(r.oracle_couplings())
        }
    })
}

fn fano(cfg: &RunConfig, out: &mut Outputs) -> Result<(), CliError> {
    let f = cfg.fano.as_ref().expect("validated");
    let p = cfg.chain()?.with_sites(f.n_sites)?;
    let probe: ProbeParams = cfg.probe();
    let res = resonances_from_ansatz(&p, &probe, &coupling_model(cfg, &f.coupling)?)?;
    let report = well_resolved_check(&res)?;
    if !report.all_resolved {
        let n = report.entries.iter().filter(|e| e.flagged).count();
        out.warn(format!("{n} resonances overlap their neighbours (width/spacing above the resolution ratio)"));
    }
    let curve = fano_transmission(&res, &f.omega_k.samples())?;
    if cfg.format.csv() {
        out.add("fano.csv", curve.to_csv());
        let mut s = csv_line(RESONANCE_COLUMNS);
        for e in &report.entries {
            s.push_str(&csv_line([
                e.band.label().to_owned(),
                fmt_float(e.qd),
                fmt_float(e.energy),
                fmt_float(e.width),
                fmt_float(e.spacing),
                fmt_float(e.ratio),
                e.flagged.to_string(),
            ]));
        }
        out.add("resonances.csv", s);
    }
    if cfg.format.json() {
        out.add_json("fano.json", &curve.to_json());
        out.add_json("resonances.json", &json!({ "resonances": res, "resolution": report }));
    }
    Ok(())
}

fn ed(cfg: &RunConfig, out: &mut Outputs) -> Result<(), CliError> {
    let p = cfg.chain()?;
    let t = cfg.truncation()?;
    let section = cfg.ed.unwrap_or_default();
    let r = ground_state_with(&p, &t, &ed_options(cfg))?;
    warn_truncation(&r, out);
    if cfg.format.json() {
        out.add_json("ed.json", &r.summary());
    }
    if cfg.format.csv() {
        out.add("energies.csv", energies_csv(&r));
        out.add("observables.csv", observables_csv(&r.observables));
    }
    if section.dump {
        let mut bytes = Vec::new();
        write_vectors(&mut bytes, &r)?;
        out.add("vectors.bin", bytes);
    }
    if let Some(d) = section.dynamics {
        let grid = TimeGrid::new(d.dt, d.n_steps)?;
        let dyn_result =
            probe_dynamics_with(&p, &t, &cfg.probe(), d.n_p, &grid, &PropagatorOptions::default(), &lanczos(cfg))?;
        if cfg.format.csv() {
            out.add("dynamics.csv", time_series_csv(&dyn_result));
        }
        if cfg.format.json() {
            out.add_json("dynamics.json", &dyn_result);
        }
    }
    Ok(())
}

fn convergence(cfg: &RunConfig, out: &mut Outputs) -> Result<(), CliError> {
    let c = cfg.convergence.unwrap_or_default();
    let table = convergence_sweep_with(&cfg.chain()?, &cfg.truncation()?, c.quantity, c.n_min, c.tol, &lanczos(cfg))?;
    if !table.converged {
        out.warn(format!("{} not converged to {:e} at n_max={}", c.quantity.label(), c.tol, cfg.truncation()?.n_max));
    }
    if cfg.format.csv() {
        let mut s = csv_line(SWEEP_COLUMNS);
        for r in &table.rows {
            s.push_str(&csv_line([
                r.n_max.to_string(),
                fmt_float(r.value),
                r.difference.map_or_else(|| "nan".to_owned(), fmt_float),
            ]));
        }
        out.add("convergence.csv", s);
    }
    if cfg.format.json() {
        out.add_json("convergence.json", &table);
    }
    Ok(())
}
