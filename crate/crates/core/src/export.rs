//! OFF meshes and sampled retraction paths.

use std::fmt::Write as _;

use thiserror::Error;

use crate::chart::{CellChart, ChartError, PointRef};
use crate::complex::SimplicialComplex;
use crate::spine::Decomposition;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExportError {
    #[error("OFF export needs vertex coordinates")]
    NoCoordinates,
    #[error("OFF export needs ambient dimension ≤ 3, got {0}")]
    AmbientTooLarge(usize),
    #[error("OFF export needs dimension ≤ 3, got {0}")]
    DimensionTooLarge(usize),
    #[error(transparent)]
    Chart(#[from] ChartError),
}

fn padded(x: &[f64]) -> [f64; 3] {
    let mut p = [0.0; 3];
    p[..x.len()].copy_from_slice(x);
    p
}

fn check(c: &SimplicialComplex) -> Result<&[Vec<f64>], ExportError> {
    if c.dim() > 3 {
        return Err(ExportError::DimensionTooLarge(c.dim()));
    }
    let coords = c.coords().ok_or(ExportError::NoCoordinates)?;
    match c.ambient_dim() {
        Some(d) if d > 3 => Err(ExportError::AmbientTooLarge(d)),
        _ => Ok(coords),
    }
}

fn off(points: &[[f64; 3]], faces: &[(Vec<usize>, Option<[f32; 3]>)]) -> String {
    let mut s = String::new();
    writeln!(s, "OFF").unwrap();
    writeln!(s, "{} {} 0", points.len(), faces.len()).unwrap();
    for p in points {
        writeln!(s, "{} {} {}", p[0], p[1], p[2]).unwrap();
    }
    for (f, color) in faces {
        let idx: Vec<String> = f.iter().map(usize::to_string).collect();
        match color {
            Some([r, g, b]) => writeln!(s, "{} {} {r} {g} {b}", f.len(), idx.join(" ")).unwrap(),
            None => writeln!(s, "{} {}", f.len(), idx.join(" ")).unwrap(),
        }
    }
    s
}

/// All vertices, and the spine faces coloured red.
pub fn spine_off(c: &SimplicialComplex, d: &Decomposition) -> Result<String, ExportError> {
    let coords = check(c)?;
    let points: Vec<[f64; 3]> = coords.iter().map(|x| padded(x)).collect();
    let faces: Vec<_> = d
        .spine
        .iter()
        .map(|&r| (c.face(c.dim() - 1, r).to_vec(), Some([1.0, 0.0, 0.0])))
        .collect();
    Ok(off(&points, &faces))
}

/// The whole complex.
pub fn complex_off(c: &SimplicialComplex) -> Result<String, ExportError> {
    let coords = check(c)?;
    let points: Vec<[f64; 3]> = coords.iter().map(|x| padded(x)).collect();
    let faces: Vec<_> = c.tops().iter().map(|t| (t.clone(), None)).collect();
    Ok(off(&points, &faces))
}

/// Interior lattice points of the root with denominator `grid`, as
/// barycentric coordinates.
pub fn root_grid(n: usize, grid: usize) -> Vec<Vec<f64>> {
    fn rec(left: usize, slots: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            acc.push(left);
            out.push(acc.clone());
            acc.pop();
            return;
        }
        for k in 1..left.saturating_sub(slots - 2) {
            acc.push(k);
            rec(left - k, slots - 1, acc, out);
            acc.pop();
        }
    }
    let mut parts = Vec::new();
    if grid > n {
        rec(grid, n + 1, &mut Vec::new(), &mut parts);
    }
    parts
        .into_iter()
        .map(|p| p.into_iter().map(|k| k as f64 / grid as f64).collect())
        .collect()
}

/// Point cloud of the forward images of [`root_grid`].
pub fn forward_grid_off(chart: &CellChart, grid: usize) -> Result<String, ExportError> {
    let c = chart.complex();
    check(c)?;
    let mut points = Vec::new();
    for p in root_grid(c.dim(), grid) {
        let q = chart.forward_map(&p)?;
        points.push(padded(&q.ambient(c).expect("coordinates checked")));
    }
    Ok(off(&points, &[]))
}

/// One row of a sampled retraction: the point `F(x, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RetractionRow {
    pub sample: usize,
    pub t: f64,
    pub point: PointRef,
}

/// `F(x, t)` for each `x` at `t = j / steps`, `j = 0..=steps`.
pub fn retraction_rows(
    chart: &CellChart,
    points: &[PointRef],
    steps: usize,
) -> Result<Vec<RetractionRow>, ChartError> {
    let steps = steps.max(1);
    let mut out = Vec::with_capacity(points.len() * (steps + 1));
    for (i, x) in points.iter().enumerate() {
        for j in 0..=steps {
            let t = j as f64 / steps as f64;
            out.push(RetractionRow {
                sample: i,
                t,
                point: chart.retract(x, t)?,
            });
        }
    }
    Ok(out)
}
