//! File formats.
//!
//! - Grid functions: CSV `x1,…,xn,t,value`, one row per sample, any row
//!   order. Spatial coordinates must form a uniform product grid; times may
//!   be irregular. Lines starting with `#` are comments.
//! - Quadrature: CSV `w1,w2,w3,weight`.
//! - Trajectories: CSV `t,mode,coeff` with `mode` as `l:m` on the
//!   half-sphere and `k` on the interval.
//! - Spectral fields: JSON `{"l_max", "modes": [{"l", "m", "coeff"}]}`.
//!
//! Written floats use Rust's shortest round-trip form, so reading a file
//! back gives the same bits.

use std::io::{Read, Write};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use parabolic_lab_core::holder::{GridAxis, GridFunction, SpaceTimeGrid};
use parabolic_lab_core::spectral::{ModeBasis, QuadratureRule, SpectralField};
use serde::{Deserialize, Serialize};

/// Coordinates closer than this (relative to the axis extent) are the same.
const COORD_TOL: f64 = 1e-9;

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().from_writer(w)
}

/// `# ` comment lines ahead of a CSV body.
pub fn write_comments<W: Write>(mut w: W, lines: &[String]) -> std::io::Result<()> {
    for l in lines {
        writeln!(w, "# {l}")?;
    }
    Ok(())
}

pub fn write_grid_csv<W: Write>(u: &GridFunction, w: W) -> Result<()> {
    let grid = u.grid();
    let n = grid.dim();
    let mut out = writer(w);
    let mut header: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    header.push("t".into());
    header.push("value".into());
    out.write_record(&header)?;
    let mut x = vec![0.0; n];
    let mut row = Vec::with_capacity(n + 2);
    for s in 0..grid.space_len() {
        grid.point(s, &mut x);
        for (k, &t) in grid.times().iter().enumerate() {
            row.clear();
            row.extend(x.iter().map(f64::to_string));
            row.push(t.to_string());
            row.push(u.at(s, k).to_string());
            out.write_record(&row)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn distinct(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    let scale = v.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    v.dedup_by(|a, b| (*a - *b).abs() <= COORD_TOL * scale);
    v
}

fn locate(sorted: &[f64], x: f64) -> Option<usize> {
    let scale = sorted.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let i = sorted.partition_point(|&v| v < x);
    [i.checked_sub(1), Some(i)]
        .into_iter()
        .flatten()
        .filter(|&j| j < sorted.len())
        .find(|&j| (sorted[j] - x).abs() <= COORD_TOL * scale)
}

pub fn read_grid_csv<R: Read>(r: R) -> Result<GridFunction> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(r);
    let header = rdr.headers()?.clone();
    let cols = header.len();
    if cols < 3 {
        bail!("grid CSV needs columns x1..xn,t,value, found {cols}");
    }
    let n = cols - 2;
    for (i, name) in header.iter().enumerate() {
        let want = match i {
            i if i < n => format!("x{}", i + 1),
            i if i == n => "t".into(),
            _ => "value".into(),
        };
        if name != want {
            bail!("grid CSV column {} is `{name}`, expected `{want}`", i + 1);
        }
    }
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let vals = rec
            .iter()
            .map(|s| s.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .with_context(|| format!("data row {}: not a number", line + 1))?;
        if vals.iter().any(|v| !v.is_finite()) {
            bail!("data row {}: non-finite entry", line + 1);
        }
        rows.push(vals);
    }
    if rows.is_empty() {
        bail!("grid CSV has no data rows");
    }
    let coords: Vec<Vec<f64>> = (0..=n).map(|c| distinct(rows.iter().map(|r| r[c]).collect())).collect();
    let mut axes = Vec::with_capacity(n);
    for (i, c) in coords[..n].iter().enumerate() {
        if c.len() < 2 {
            bail!("axis x{} has a single coordinate", i + 1);
        }
        let step = (c[c.len() - 1] - c[0]) / (c.len() - 1) as f64;
        let axis = GridAxis::new(c[0], step, c.len());
        if c.iter().enumerate().any(|(j, &v)| (axis.coord(j) - v).abs() > COORD_TOL * step.max(v.abs())) {
            bail!("axis x{} is not uniformly spaced", i + 1);
        }
        axes.push(axis);
    }
    let times = coords[n].clone();
    let grid = SpaceTimeGrid::new(axes, times.clone())?;
    let (ns, nt) = (grid.space_len(), grid.time_len());
    if rows.len() != ns * nt {
        bail!("grid CSV has {} rows, the product grid needs {}", rows.len(), ns * nt);
    }
    let strides = grid.strides();
    let mut values = vec![f64::NAN; ns * nt];
    for (line, r) in rows.iter().enumerate() {
        let mut flat = 0;
        for i in 0..n {
            let j = locate(&coords[i], r[i]).expect("coordinate came from this column");
            flat += j * strides[i];
        }
        let k = locate(&times, r[n]).expect("time came from this column");
        let slot = &mut values[flat * nt + k];
        if !slot.is_nan() {
            bail!("data row {}: duplicate sample", line + 1);
        }
        *slot = r[n + 1];
    }
    Ok(GridFunction::new(grid, values)?)
}

pub fn write_quadrature_csv<W: Write>(rule: &QuadratureRule, w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["w1", "w2", "w3", "weight"])?;
    for (p, wt) in rule.nodes().iter().zip(rule.weights()) {
        out.write_record([p[0].to_string(), p[1].to_string(), p[2].to_string(), wt.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

/// Rows `(t, mode label, coefficient)`.
pub fn write_trajectory_csv<W: Write>(rows: impl IntoIterator<Item = (f64, String, f64)>, w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["t", "mode", "coeff"])?;
    for (t, mode, c) in rows {
        out.write_record([t.to_string(), mode, c.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

pub fn spectral_rows(times: &[f64], states: &[SpectralField]) -> Vec<(f64, String, f64)> {
    let mut rows = Vec::new();
    for (t, s) in times.iter().zip(states) {
        for (m, c) in s.basis().modes().iter().zip(s.coeffs()) {
            rows.push((*t, format!("{}:{}", m.l, m.m), *c));
        }
    }
    rows
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeCoeff {
    pub l: u32,
    pub m: i32,
    pub coeff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralFieldFile {
    pub l_max: u32,
    pub modes: Vec<ModeCoeff>,
}

impl SpectralFieldFile {
    pub fn from_field(f: &SpectralField) -> Self {
        let modes = f.basis().modes().iter().zip(f.coeffs()).map(|(m, &coeff)| ModeCoeff { l: m.l, m: m.m, coeff }).collect();
        Self { l_max: f.basis().l_max(), modes }
    }

    /// Modes not listed are zero.
    pub fn to_field(&self) -> Result<SpectralField> {
        let basis = Arc::new(ModeBasis::enumerate(self.l_max)?);
        let mut coeffs = vec![0.0; basis.len()];
        for mc in &self.modes {
            let i = basis
                .index_of(mc.l, mc.m)
                .with_context(|| format!("mode ({}, {}) is not in the basis with l_max = {}", mc.l, mc.m, self.l_max))?;
            coeffs[i] = mc.coeff;
        }
        Ok(SpectralField::new(basis, coeffs)?)
    }
}
