//! Dependence of ED observables on the boson truncation.

use isb_core::ChainParams;
use serde::{Deserialize, Serialize};

use crate::basis::TruncationSpec;
use crate::error::{EdError, Result};
use crate::ground::{ground_state_with, EdOptions};
use crate::lanczos::LanczosOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    GroundEnergy,
    /// E_1 − E_0.
    Gap,
    StaggeredOrder,
    /// Largest per-site ⟨a†a⟩.
    MaxOccupation,
}

impl Quantity {
    pub fn label(self) -> &'static str {
        match self {
            Quantity::GroundEnergy => "ground_energy",
            Quantity::Gap => "gap",
            Quantity::StaggeredOrder => "staggered_order",
            Quantity::MaxOccupation => "max_occupation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n_max: usize,
    pub value: f64,
    /// value(n_max) − value(n_max − 1).
    pub difference: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub quantity: Quantity,
    pub tol: f64,
    pub rows: Vec<SweepRow>,
    pub converged: bool,
}

/// Evaluates `quantity` for n_max = `n_min`..=`t.n_max`.
pub fn convergence_sweep(
    p: &ChainParams,
    t: &TruncationSpec,
    quantity: Quantity,
    n_min: usize,
    tol: f64,
) -> Result<ConvergenceTable> {
    convergence_sweep_with(p, t, quantity, n_min, tol, &LanczosOptions::default())
}

pub fn convergence_sweep_with(
    p: &ChainParams,
    t: &TruncationSpec,
    quantity: Quantity,
    n_min: usize,
    tol: f64,
    lanczos: &LanczosOptions,
) -> Result<ConvergenceTable> {
    if n_min == 0 || n_min > t.n_max {
        return Err(EdError::InvalidArgument(format!(
            "sweep needs 1 ≤ n_min ≤ n_max, got n_min={n_min}, n_max={}",
            t.n_max
        )));
    }
    let k = if quantity == Quantity::Gap { 2 } else { 1 };
    let mut rows: Vec<SweepRow> = Vec::new();
    for n_max in n_min..=t.n_max {
        let opts = EdOptions { k, lanczos: *lanczos, drift: false, ..Default::default() };
        let r = ground_state_with(p, &t.with_n_max(n_max)?, &opts)?;
        let value = match quantity {
            Quantity::GroundEnergy => r.energies[0],
            Quantity::Gap => r.energies.get(1).map_or(f64::NAN, |e| e - r.energies[0]),
            Quantity::StaggeredOrder => r.order.staggered_sigma_x,
            Quantity::MaxOccupation => r.convergence.max_occupation,
        };
        let difference = rows.last().map(|prev| value - prev.value);
        rows.push(SweepRow { n_max, value, difference });
    }
    let converged = matches!(rows.last().and_then(|r| r.difference), Some(d) if d.abs() < tol);
    Ok(ConvergenceTable { quantity, tol, rows, converged })
}
