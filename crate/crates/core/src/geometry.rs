//! Intrinsic Euclidean geometry of a single top simplex.
//!
//! A simplex is known only through its squared edge lengths. Displacements
//! are barycentric difference vectors (entries summing to zero); writing
//! `δ = Σ_{j≥1} δ_j (p_j - p_0)` turns inner products into the Gram form of
//! the edge vectors at vertex 0.

use nalgebra::{DMatrix, DVector};

use crate::complex::{Metric, SimplicialComplex};

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexGeometry {
    /// Gram matrix of the edge vectors `p_j - p_0`, `j = 1..=n`.
    gram: DMatrix<f64>,
}

impl SimplexGeometry {
    pub fn new(c: &SimplicialComplex, metric: &Metric, t: usize) -> Self {
        Self::from_vertices(c, metric, c.top(t))
    }

    /// Geometry of the simplex spanned by the given vertices of `c`.
    pub fn from_vertices(c: &SimplicialComplex, metric: &Metric, verts: &[usize]) -> Self {
        let k = verts.len() - 1;
        let sq = |a: usize, b: usize| metric.between(c, verts[a], verts[b]).powi(2);
        let gram = DMatrix::from_fn(k, k, |i, j| {
            0.5 * (sq(0, i + 1) + sq(0, j + 1) - sq(i + 1, j + 1))
        });
        SimplexGeometry { gram }
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    /// Inner product of two barycentric displacements.
    pub fn dot(&self, a: &[f64], b: &[f64]) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += a[i + 1] * self.gram[(i, j)] * b[j + 1];
            }
        }
        s
    }

    pub fn norm(&self, a: &[f64]) -> f64 {
        self.dot(a, a).max(0.0).sqrt()
    }

    /// Distance between two points given in barycentric coordinates.
    pub fn distance(&self, p: &[f64], q: &[f64]) -> f64 {
        let d: Vec<f64> = p.iter().zip(q).map(|(a, b)| a - b).collect();
        self.norm(&d)
    }

    /// n-dimensional volume; zero (or NaN-free negative rounding clamped to
    /// zero) for degenerate simplices.
    pub fn volume(&self) -> f64 {
        let n = self.dim();
        let det = if n == 0 { 1.0 } else { self.gram.determinant() };
        det.max(0.0).sqrt() / factorial(n)
    }

    /// Vertex positions in `R^n` of an isometric copy with vertex 0 at the
    /// origin, or `None` if the simplex is degenerate.
    pub fn embedding(&self) -> Option<Vec<DVector<f64>>> {
        let n = self.dim();
        let l = self.gram.clone().cholesky()?.l();
        let mut out = vec![DVector::zeros(n)];
        for j in 0..n {
            out.push(l.row(j).transpose());
        }
        Some(out)
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}
