//! Run configuration: a TOML file overlaid with command-line flags.

use std::path::PathBuf;

use isb_core::phase::{AxisSpec, GridSpec};
use isb_core::spectroscopy::{ProbeParams, WidthEntry};
use isb_core::{ChainParams, MomentumGrid};
use isb_ed::convergence::Quantity;
use isb_ed::TruncationSpec;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const OUTPUT_DIR_ENV: &str = "ISB_OUTPUT_DIR";
pub const DEFAULT_OUTPUT_DIR: &str = "isb-output";
pub const DEFAULT_SEED: u64 = 0x15b_c4a1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Ground,
    PhaseDiagram,
    Bands,
    Kubo,
    Fano,
    Ed,
    Convergence,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Ground => "ground",
            CommandKind::PhaseDiagram => "phase-diagram",
            CommandKind::Bands => "bands",
            CommandKind::Kubo => "kubo",
            CommandKind::Fano => "fano",
            CommandKind::Ed => "ed",
            CommandKind::Convergence => "convergence",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
    #[default]
    Both,
}

impl Format {
    pub fn csv(self) -> bool {
        self != Format::Json
    }

    pub fn json(self) -> bool {
        self != Format::Csv
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Ansatz {
    Lf,
    Sh,
    Ed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSection {
    pub omega0: f64,
    pub omega: f64,
    pub g: f64,
}

impl ChainSection {
    pub fn params(&self) -> Result<ChainParams, CliError> {
        Ok(ChainParams::new(self.omega0, self.omega, self.g)?)
    }
}

fn default_n_q() -> usize {
    64
}

fn default_grid() -> MomentumGrid {
    MomentumGrid::Uniform
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandsSection {
    #[serde(default = "default_n_q")]
    pub n_q: usize,
    #[serde(default = "default_grid")]
    pub grid: MomentumGrid,
    /// Chain length for the finite grid.
    #[serde(default)]
    pub n_sites: Option<usize>,
}

fn default_n_sites() -> usize {
    10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KuboSection {
    pub nu: AxisSpec,
    #[serde(default = "default_n_sites")]
    pub n_sites: usize,
    /// Momenta; defaults to the ring momenta in [0, π].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<AxisSpec>,
    /// Fermionic residue weight.
    #[serde(default)]
    pub chi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum CouplingSection {
    Uniform { width: f64 },
    /// Widths from ED matrix elements; needs a `[truncation]` with the same N.
    Oracle {
        #[serde(default = "default_oracle_levels")]
        levels: usize,
    },
    Table { entries: Vec<WidthEntry> },
}

fn default_oracle_levels() -> usize {
    16
}

fn default_coupling() -> CouplingSection {
    CouplingSection::Uniform { width: 1e-3 }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanoSection {
    pub omega_k: AxisSpec,
    #[serde(default = "default_n_sites")]
    pub n_sites: usize,
    #[serde(default = "default_coupling")]
    pub coupling: CouplingSection,
}

fn default_k() -> usize {
    4
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsSection {
    pub dt: f64,
    pub n_steps: usize,
    /// Highest probe occupation kept.
    pub n_p: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdSection {
    #[serde(default = "default_k")]
    pub k: usize,
    /// Also solve at n_max − 1 and report the drift.
    #[serde(default = "yes")]
    pub drift: bool,
    /// Write the eigenvectors to vectors.bin.
    #[serde(default)]
    pub dump: bool,
    #[serde(default)]
    pub dynamics: Option<DynamicsSection>,
}

impl Default for EdSection {
    fn default() -> Self {
        Self { k: default_k(), drift: true, dump: false, dynamics: None }
    }
}

fn default_quantity() -> Quantity {
    Quantity::GroundEnergy
}

fn default_n_min() -> usize {
    1
}

fn default_tol() -> f64 {
    1e-8
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceSection {
    #[serde(default = "default_quantity")]
    pub quantity: Quantity,
    #[serde(default = "default_n_min")]
    pub n_min: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

impl Default for ConvergenceSection {
    fn default() -> Self {
        Self { quantity: default_quantity(), n_min: default_n_min(), tol: default_tol() }
    }
}

/// Overrides of the Lanczos solver settings.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LanczosSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub krylov_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_restarts: Option<usize>,
}

fn default_workers() -> usize {
    1
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

/// Fully resolved configuration of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandKind,
    pub output_dir: PathBuf,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ansatz: Option<Ansatz>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<TruncationSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bands: Option<BandsSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kubo: Option<KuboSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fano: Option<FanoSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ed: Option<EdSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convergence: Option<ConvergenceSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lanczos: Option<LanczosSection>,
}

fn missing(section: &str, command: CommandKind) -> CliError {
    CliError::Config(format!("`{}` needs a [{section}] section or the matching flags", command.name()))
}

impl KuboSection {
    pub fn q_grid(&self) -> Vec<f64> {
        match &self.q {
            Some(q) => q.samples(),
            None => {
                let mut q = isb_core::ansatz_exc::finite_half_zone(self.n_sites);
                if self.n_sites.is_multiple_of(2) {
                    q.push(std::f64::consts::PI);
                }
                q
            }
        }
    }
}

impl RunConfig {
    pub fn chain(&self) -> Result<ChainParams, CliError> {
        self.chain.as_ref().ok_or_else(|| missing("chain", self.command))?.params()
    }

    pub fn truncation(&self) -> Result<TruncationSpec, CliError> {
        let t = self.truncation.ok_or_else(|| missing("truncation", self.command))?;
        t.validate()?;
        Ok(t)
    }

    pub fn lanczos(&self) -> isb_ed::LanczosOptions {
        let d = isb_ed::LanczosOptions { seed: self.seed, ..Default::default() };
        let l = self.lanczos.unwrap_or_default();
        isb_ed::LanczosOptions {
            tol: l.tol.unwrap_or(d.tol),
            krylov_cap: l.krylov_cap.unwrap_or(d.krylov_cap),
            max_restarts: l.max_restarts.unwrap_or(d.max_restarts),
            seed: d.seed,
        }
    }

    pub fn probe(&self) -> ProbeParams {
        self.probe.unwrap_or_default()
    }

    /// Re-validates every embedded physical type and the sections the command needs.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.workers == 0 {
            return Err(CliError::Config("workers must be at least 1".into()));
        }
        if let Some(c) = &self.chain {
            c.params()?;
        }
        if let Some(t) = &self.truncation {
            t.validate()?;
        }
        if let Some(p) = &self.probe {
            p.validate()?;
        }
        if let Some(l) = &self.lanczos {
            if l.tol.is_some_and(|t| !(t > 0.0 && t.is_finite())) {
                return Err(CliError::Config("lanczos.tol must be positive".into()));
            }
            if l.krylov_cap.is_some_and(|m| m < 2) {
                return Err(CliError::Config("lanczos.krylov_cap must be at least 2".into()));
            }
        }
        match self.command {
            CommandKind::Ground => {
                self.chain()?;
                match self.ansatz.ok_or_else(|| missing("ansatz", self.command))? {
                    Ansatz::Ed => {
                        self.truncation()?;
                    }
                    Ansatz::Lf | Ansatz::Sh => {}
                }
            }
            CommandKind::PhaseDiagram => {
                let g = self.grid.as_ref().ok_or_else(|| missing("grid", self.command))?;
                g.points()?;
            }
            CommandKind::Bands => {
                self.chain()?;
                let b = self.bands.ok_or_else(|| missing("bands", self.command))?;
                if b.grid == MomentumGrid::FiniteN && b.n_sites.is_none() {
                    return Err(CliError::Config("the finite momentum grid needs bands.n_sites".into()));
                }
                if b.grid == MomentumGrid::Uniform && b.n_q == 0 {
                    return Err(CliError::Config("bands.n_q must be positive".into()));
                }
            }
            CommandKind::Kubo => {
                self.chain()?.with_sites(self.kubo.as_ref().ok_or_else(|| missing("kubo", self.command))?.n_sites)?;
            }
            CommandKind::Fano => {
                let f = self.fano.as_ref().ok_or_else(|| missing("fano", self.command))?;
                self.chain()?.with_sites(f.n_sites)?;
                if let CouplingSection::Oracle { levels } = f.coupling {
                    let t = self.truncation()?;
                    if t.n_sites != f.n_sites {
                        return Err(CliError::Config(format!(
                            "oracle truncation has {} sites, fano.n_sites is {}",
                            t.n_sites, f.n_sites
                        )));
                    }
                    if !(2..=isb_ed::ground::MAX_EIGENPAIRS).contains(&levels) {
                        return Err(CliError::Config(format!(
                            "oracle levels must lie in [2, {}]",
                            isb_ed::ground::MAX_EIGENPAIRS
                        )));
                    }
                }
            }
            CommandKind::Ed => {
                self.chain()?;
                self.truncation()?;
                let e = self.ed.unwrap_or_default();
                if e.k == 0 || e.k > isb_ed::ground::MAX_EIGENPAIRS {
                    return Err(CliError::Config(format!(
                        "ed.k must lie in [1, {}]",
                        isb_ed::ground::MAX_EIGENPAIRS
                    )));
                }
                if let Some(d) = e.dynamics {
                    isb_ed::TimeGrid::new(d.dt, d.n_steps)?;
                    if d.n_p == 0 {
                        return Err(CliError::Config("ed.dynamics.n_p must be at least 1".into()));
                    }
                }
            }
            CommandKind::Convergence => {
                self.chain()?;
                let t = self.truncation()?;
                let c = self.convergence.unwrap_or_default();
                if c.n_min == 0 || c.n_min > t.n_max {
                    return Err(CliError::Config("convergence.n_min must lie in [1, n_max]".into()));
                }
                if c.tol.is_nan() || c.tol <= 0.0 {
                    return Err(CliError::Config("convergence.tol must be positive".into()));
                }
            }
        }
        Ok(())
    }
}

/// Parses "start:stop:n" or a comma-separated list.
pub fn parse_axis(s: &str) -> Result<AxisSpec, String> {
    let err = |e: &dyn std::fmt::Display| format!("bad axis `{s}`: {e}");
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [a, b, n] => Ok(AxisSpec::Linspace {
            start: a.trim().parse().map_err(|e| err(&e))?,
            stop: b.trim().parse().map_err(|e| err(&e))?,
            n: n.trim().parse().map_err(|e| err(&e))?,
        }),
        [list] => list
            .split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|e| err(&e)))
            .collect::<Result<Vec<_>, _>>()
            .map(AxisSpec::Values),
        _ => Err(format!("bad axis `{s}`: expected start:stop:n or a comma list")),
    }
}

/// Converts a serializable value to a TOML value for overlaying.
pub fn to_toml<T: Serialize>(v: &T) -> toml::Value {
    toml::Value::try_from(v).expect("config values map to TOML")
}

/// Sets `path` (dot separated) in `table`, creating intermediate tables.
pub fn set_path(table: &mut toml::Table, path: &str, value: toml::Value) -> Result<(), CliError> {
    let mut keys: Vec<&str> = path.split('.').collect();
    let last = keys.pop().expect("non-empty path");
    let mut cur = table;
    for k in keys {
        let entry = cur.entry(k.to_owned()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry
            .as_table_mut()
            .ok_or_else(|| CliError::Config(format!("`{k}` must be a table to set `{path}`")))?;
    }
    cur.insert(last.to_owned(), value);
    Ok(())
}

/// Inserts every key of `defaults` that `table[section]` lacks.
pub fn fill_defaults(table: &mut toml::Table, section: &str, defaults: toml::Value) -> Result<(), CliError> {
    let toml::Value::Table(defaults) = defaults else { return Ok(()) };
    let entry = table
        .entry(section.to_owned())
        .or_insert_with(|| toml::Value::Table(toml::Table::new()));
    let t = entry
        .as_table_mut()
        .ok_or_else(|| CliError::Config(format!("`{section}` must be a table")))?;
    for (k, v) in defaults {
        t.entry(k).or_insert(v);
    }
    Ok(())
}

pub fn from_table(table: toml::Table) -> Result<RunConfig, CliError> {
    let cfg: RunConfig = toml::Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}
