//! Command-line flags. Every flag overrides the matching config-file key.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use isb_core::phase::AxisSpec;
use isb_core::MomentumGrid;
use isb_ed::convergence::Quantity;
use isb_ed::Boundary;

use crate::config::{
    fill_defaults, from_table, parse_axis, set_path, to_toml, Ansatz, Format, RunConfig, DEFAULT_OUTPUT_DIR,
    OUTPUT_DIR_ENV,
};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "isb", version, about = "Interspersed spin-boson chain: variational, exact and spectroscopic solvers")]
pub struct Cli {
    /// TOML run configuration; flags win over its keys.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, env = OUTPUT_DIR_ENV)]
    pub output_dir: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Seed of the Lanczos start vectors.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ground state from one ansatz or from exact diagonalization.
    Ground {
        #[arg(long, value_enum)]
        ansatz: Option<Ansatz>,
        #[command(flatten)]
        chain: ChainArgs,
        #[command(flatten)]
        truncation: TruncationArgs,
    },
    /// Both ansätze over a grid of parameters.
    PhaseDiagram(GridArgs),
    /// Quasiparticle bands.
    Bands {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long)]
        n_q: Option<usize>,
        #[arg(long, value_enum)]
        grid: Option<GridKind>,
        /// Chain length of the finite momentum grid.
        #[arg(long)]
        n_sites: Option<usize>,
    },
    /// Kubo response of the probed chain.
    Kubo {
        #[command(flatten)]
        chain: ChainArgs,
        #[command(flatten)]
        probe: ProbeArgs,
        /// Frequencies as start:stop:n or a comma list.
        #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
        nu: Option<AxisSpec>,
        #[arg(long)]
        n_sites: Option<usize>,
        /// Momenta as start:stop:n or a comma list.
        #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
        q: Option<AxisSpec>,
        /// Fermionic residue weight.
        #[arg(long)]
        chi: Option<f64>,
    },
    /// Waveguide transmission through the chain resonances.
    Fano {
        #[command(flatten)]
        chain: ChainArgs,
        #[command(flatten)]
        probe: ProbeArgs,
        /// Waveguide frequencies as start:stop:n or a comma list.
        #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
        omega_k: Option<AxisSpec>,
        #[arg(long)]
        n_sites: Option<usize>,
        #[arg(long, value_enum)]
        coupling: Option<CouplingKind>,
        /// Width of every resonance for the uniform model.
        #[arg(long)]
        width: Option<f64>,
        /// ED levels used by the oracle model.
        #[arg(long)]
        levels: Option<usize>,
        /// Boson cutoff of the oracle model.
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Exact diagonalization, optionally with probe dynamics.
    Ed {
        #[command(flatten)]
        chain: ChainArgs,
        #[command(flatten)]
        truncation: TruncationArgs,
        #[command(flatten)]
        probe: ProbeArgs,
        /// Number of eigenpairs.
        #[arg(long)]
        k: Option<usize>,
        /// Skip the n_max − 1 drift solve.
        #[arg(long)]
        no_drift: bool,
        /// Write eigenvectors to vectors.bin.
        #[arg(long)]
        dump: bool,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        n_steps: Option<usize>,
        /// Highest probe occupation.
        #[arg(long)]
        n_p: Option<usize>,
    },
    /// Sweep of one ED quantity against the boson cutoff.
    Convergence {
        #[command(flatten)]
        chain: ChainArgs,
        #[command(flatten)]
        truncation: TruncationArgs,
        #[arg(long, value_enum)]
        quantity: Option<QuantityArg>,
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GridKind {
    FiniteN,
    Uniform,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CouplingKind {
    Uniform,
    Oracle,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum QuantityArg {
    GroundEnergy,
    Gap,
    StaggeredOrder,
    MaxOccupation,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BoundaryArg {
    Periodic,
    Open,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GridShape {
    Rect,
    Polar,
}

#[derive(Debug, Args)]
pub struct ChainArgs {
    #[arg(long)]
    pub omega0: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub g: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TruncationArgs {
    #[arg(long)]
    pub n_sites: Option<usize>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long, value_enum)]
    pub boundary: Option<BoundaryArg>,
    /// Largest Hilbert dimension accepted.
    #[arg(long)]
    pub dim_cap: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[arg(long)]
    pub g_p: Option<f64>,
    #[arg(long)]
    pub omega_p: Option<f64>,
    #[arg(long)]
    pub alpha_p: Option<f64>,
    #[arg(long)]
    pub v_g: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, value_enum)]
    pub kind: Option<GridShape>,
    #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
    pub omega: Option<AxisSpec>,
    #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
    pub omega0: Option<AxisSpec>,
    #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
    pub delta: Option<AxisSpec>,
    #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
    pub theta: Option<AxisSpec>,
    #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
    pub g: Option<AxisSpec>,
}

/// Collects `(path, value)` overrides, skipping unset flags.
struct Overlay(Vec<(String, toml::Value)>);

impl Overlay {
    fn set<T: serde::Serialize>(&mut self, path: &str, v: Option<T>) {
        if let Some(v) = v {
            self.0.push((path.to_owned(), to_toml(&v)));
        }
    }

    fn chain(&mut self, c: &ChainArgs) {
        self.set("chain.omega0", c.omega0);
        self.set("chain.omega", c.omega);
        self.set("chain.g", c.g);
    }

    fn truncation(&mut self, t: &TruncationArgs) {
        self.set("truncation.n_sites", t.n_sites);
        self.set("truncation.n_max", t.n_max);
        self.set(
            "truncation.boundary",
            t.boundary.map(|b| match b {
                BoundaryArg::Periodic => Boundary::Periodic,
                BoundaryArg::Open => Boundary::Open,
            }),
        );
        self.set("truncation.dim_cap", t.dim_cap);
    }

    fn probe(&mut self, p: &ProbeArgs) {
        self.set("probe.g_p", p.g_p);
        self.set("probe.omega_p", p.omega_p);
        self.set("probe.alpha_p", p.alpha_p);
        self.set("probe.v_g", p.v_g);
        self.set("probe.eta", p.eta);
    }
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Ground { .. } => "ground",
            Command::PhaseDiagram(_) => "phase-diagram",
            Command::Bands { .. } => "bands",
            Command::Kubo { .. } => "kubo",
            Command::Fano { .. } => "fano",
            Command::Ed { .. } => "ed",
            Command::Convergence { .. } => "convergence",
        }
    }

    fn overlay(&self) -> Overlay {
        let mut o = Overlay(Vec::new());
        match self {
            Command::Ground { ansatz, chain, truncation } => {
                o.set("ansatz", *ansatz);
                o.chain(chain);
                o.truncation(truncation);
            }
            Command::PhaseDiagram(g) => {
                o.set(
                    "grid.kind",
                    g.kind.map(|k| match k {
                        GridShape::Rect => "rect",
                        GridShape::Polar => "polar",
                    }),
                );
                o.set("grid.omega", g.omega.clone());
                o.set("grid.omega0", g.omega0.clone());
                o.set("grid.delta", g.delta.clone());
                o.set("grid.theta", g.theta.clone());
                o.set("grid.g", g.g.clone());
            }
            Command::Bands { chain, n_q, grid, n_sites } => {
                o.chain(chain);
                o.0.push(("bands".into(), toml::Value::Table(toml::Table::new())));
                o.set("bands.n_q", *n_q);
                o.set(
                    "bands.grid",
                    grid.map(|g| match g {
                        GridKind::FiniteN => MomentumGrid::FiniteN,
                        GridKind::Uniform => MomentumGrid::Uniform,
                    }),
                );
                o.set("bands.n_sites", *n_sites);
            }
            Command::Kubo { chain, probe, nu, n_sites, q, chi } => {
                o.chain(chain);
                o.probe(probe);
                o.set("kubo.nu", nu.clone());
                o.set("kubo.q", q.clone());
                o.set("kubo.n_sites", *n_sites);
                o.set("kubo.chi", *chi);
            }
            Command::Fano { chain, probe, omega_k, n_sites, coupling, width, levels, n_max } => {
                o.chain(chain);
                o.probe(probe);
                o.set("fano.omega_k", omega_k.clone());
                o.set("fano.n_sites", *n_sites);
                o.set(
                    "fano.coupling.model",
                    coupling.map(|c| match c {
                        CouplingKind::Uniform => "uniform",
                        CouplingKind::Oracle => "oracle",
                    }),
                );
                o.set("fano.coupling.width", *width);
                o.set("fano.coupling.levels", *levels);
                if let Some(n) = n_max {
                    o.set("truncation.n_max", Some(*n));
                    o.set("truncation.n_sites", *n_sites);
                }
            }
            Command::Ed { chain, truncation, probe, k, no_drift, dump, dt, n_steps, n_p } => {
                o.chain(chain);
                o.truncation(truncation);
                o.probe(probe);
                o.0.push(("ed".into(), toml::Value::Table(toml::Table::new())));
                o.set("ed.k", *k);
                o.set("ed.drift", no_drift.then_some(false));
                o.set("ed.dump", dump.then_some(true));
                o.set("ed.dynamics.dt", *dt);
                o.set("ed.dynamics.n_steps", *n_steps);
                o.set("ed.dynamics.n_p", *n_p);
            }
            Command::Convergence { chain, truncation, quantity, n_min, tol } => {
                o.chain(chain);
                o.truncation(truncation);
                o.0.push(("convergence".into(), toml::Value::Table(toml::Table::new())));
                o.set(
                    "convergence.quantity",
                    quantity.map(|q| match q {
                        QuantityArg::GroundEnergy => Quantity::GroundEnergy,
                        QuantityArg::Gap => Quantity::Gap,
                        QuantityArg::StaggeredOrder => Quantity::StaggeredOrder,
                        QuantityArg::MaxOccupation => Quantity::MaxOccupation,
                    }),
                );
                o.set("convergence.n_min", *n_min);
                o.set("convergence.tol", *tol);
            }
        }
        o
    }
}

impl Cli {
    /// File keys, then flags, then defaults, then strict parsing and validation.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut table = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
                toml::from_str::<toml::Table>(&text).map_err(|e| CliError::Config(e.to_string()))?
            }
            None => toml::Table::new(),
        };
        if let Some(c) = table.get("command").and_then(|v| v.as_str()) {
            if c != self.command.name() {
                return Err(CliError::Config(format!(
                    "config is for `{c}` but `{}` was invoked",
                    self.command.name()
                )));
            }
        }
        table.insert("command".into(), toml::Value::String(self.command.name().into()));
        let mut o = self.command.overlay();
        o.set("output_dir", self.output_dir.clone().map(|p| p.to_string_lossy().into_owned()));
        o.set("workers", self.workers);
        o.set("seed", self.seed.map(|s| i64::try_from(s).map_err(|_| ())).transpose().map_err(|_| {
            CliError::Config(format!("seed must be below 2^63, got {:?}", self.seed))
        })?);
        o.set("format", self.format);
        for (path, v) in o.0 {
            // Bare section markers only create the table.
            if v.as_table().is_some_and(|t| t.is_empty()) {
                table.entry(path).or_insert(v);
            } else {
                set_path(&mut table, &path, v)?;
            }
        }
        if !table.contains_key("output_dir") {
            table.insert("output_dir".into(), toml::Value::String(DEFAULT_OUTPUT_DIR.into()));
        }
        if let Some(c) = table.get_mut("fano").and_then(|f| f.get_mut("coupling")).and_then(|c| c.as_table_mut()) {
            c.entry("model").or_insert_with(|| toml::Value::String("uniform".into()));
        }
        if let Some(g) = table.get_mut("grid").and_then(|g| g.as_table_mut()) {
            g.entry("kind").or_insert_with(|| toml::Value::String("rect".into()));
        }
        if table.contains_key("probe") {
            fill_defaults(&mut table, "probe", to_toml(&isb_core::spectroscopy::ProbeParams::default()))?;
        }
        from_table(table)
    }
}
