//! Eigenvector dumps and CSV export of observables and time series.
//!
//! Binary layout, all little-endian:
//!
//! | bytes | content |
//! |-------|---------|
//! | 8 | magic `ISBVEC01` |
//! | 4 | n_sites (u32) |
//! | 4 | n_max (u32) |
//! | 4 | boundary (u32, 0 periodic, 1 open) |
//! | 4 | number of vectors k (u32) |
//! | 8 | dimension (u64) |
//! | 8k | energies (f64) |
//! | 16·k·dim | amplitudes as (re, im) f64 pairs, vector after vector |
//!
//! Amplitude `i` belongs to spins `i / (n_max+1)^N` (bit j set = spin j up)
//! and occupations `n_j = (i mod (n_max+1)^N) / (n_max+1)^j mod (n_max+1)`.

use std::io::{Read, Write};

use isb_core::export::{csv_line, fmt_float};
use num_complex::Complex64;

use crate::basis::{Boundary, TruncationSpec, DEFAULT_DIM_CAP};
use crate::dynamics::DynamicsResult;
use crate::error::{EdError, Result};
use crate::ground::{EdResult, Observables};

pub const MAGIC: &[u8; 8] = b"ISBVEC01";

pub fn write_vectors<W: Write>(mut w: W, result: &EdResult) -> Result<()> {
    let t = &result.truncation;
    w.write_all(MAGIC)?;
    w.write_all(&(t.n_sites as u32).to_le_bytes())?;
    w.write_all(&(t.n_max as u32).to_le_bytes())?;
    let boundary: u32 = match t.boundary {
        Boundary::Periodic => 0,
        Boundary::Open => 1,
    };
    w.write_all(&boundary.to_le_bytes())?;
    w.write_all(&(result.vectors.len() as u32).to_le_bytes())?;
    w.write_all(&(result.basis.dim as u64).to_le_bytes())?;
    for e in &result.energies {
        w.write_all(&e.to_le_bytes())?;
    }
    let mut buf = Vec::with_capacity(16 * result.basis.dim);
    for v in &result.vectors {
        buf.clear();
        for x in v {
            buf.extend_from_slice(&x.to_le_bytes());
            buf.extend_from_slice(&0f64.to_le_bytes());
        }
        w.write_all(&buf)?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct VectorDump {
    pub truncation: TruncationSpec,
    pub energies: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
}

fn read_array<const N: usize, R: Read>(r: &mut R) -> Result<[u8; N]> {
    let mut b = [0u8; N];
    r.read_exact(&mut b)?;
    Ok(b)
}

pub fn read_vectors<R: Read>(mut r: R) -> Result<VectorDump> {
    if &read_array::<8, _>(&mut r)? != MAGIC {
        return Err(EdError::InvalidArgument("not an eigenvector dump (bad magic)".into()));
    }
    let u32_at = |b: [u8; 4]| u32::from_le_bytes(b) as usize;
    let n_sites = u32_at(read_array(&mut r)?);
    let n_max = u32_at(read_array(&mut r)?);
    let boundary = match u32_at(read_array(&mut r)?) {
        0 => Boundary::Periodic,
        1 => Boundary::Open,
        b => return Err(EdError::InvalidArgument(format!("unknown boundary code {b}"))),
    };
    let k = u32_at(read_array(&mut r)?);
    let dim = u64::from_le_bytes(read_array(&mut r)?);
    let truncation = TruncationSpec { n_max, n_sites, boundary, dim_cap: DEFAULT_DIM_CAP.max(dim) };
    truncation.validate()?;
    if truncation.dimension() != dim {
        return Err(EdError::InvalidArgument(format!(
            "header dimension {dim} disagrees with the truncation ({})",
            truncation.dimension()
        )));
    }
    let energies = (0..k)
        .map(|_| Ok(f64::from_le_bytes(read_array(&mut r)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut vectors = Vec::with_capacity(k);
    let mut buf = vec![0u8; 16 * dim as usize];
    for _ in 0..k {
        r.read_exact(&mut buf)?;
        vectors.push(
            buf.chunks_exact(16)
                .map(|c| {
                    let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
                    let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
                    Complex64::new(re, im)
                })
                .collect(),
        );
    }
    Ok(VectorDump { truncation, energies, vectors })
}

pub const OBSERVABLE_COLUMNS: [&str; 5] = ["site", "sigma_x", "sigma_z", "a", "n"];

pub fn observables_csv(o: &Observables) -> String {
    let mut out = csv_line(OBSERVABLE_COLUMNS);
    for j in 0..o.sigma_x.len() {
        out.push_str(&csv_line([
            j.to_string(),
            fmt_float(o.sigma_x[j]),
            fmt_float(o.sigma_z[j]),
            fmt_float(o.a[j]),
            fmt_float(o.n[j]),
        ]));
    }
    out
}

pub fn time_series_header(n_sites: usize) -> Vec<String> {
    let mut h = vec!["t".to_owned()];
    for j in 0..n_sites {
        h.push(format!("a{j}_re"));
        h.push(format!("a{j}_im"));
    }
    h.push("probe_re".into());
    h.push("probe_im".into());
    h
}

pub fn time_series_csv(d: &DynamicsResult) -> String {
    let mut out = csv_line(time_series_header(d.a.len()));
    for (k, t) in d.times.iter().enumerate() {
        let mut row = vec![fmt_float(*t)];
        for series in &d.a {
            row.push(fmt_float(series[k].re));
            row.push(fmt_float(series[k].im));
        }
        let b = d.probe.get(k).copied().unwrap_or_default();
        row.push(fmt_float(b.re));
        row.push(fmt_float(b.im));
        out.push_str(&csv_line(row));
    }
    out
}
