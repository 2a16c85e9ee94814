use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::MEMBERSHIP_TOL;

use super::ChartError;

/// A point of the complex: a top simplex and barycentric coordinates with
/// respect to its sorted vertex tuple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRef {
    pub top: usize,
    pub bary: Vec<f64>,
}

impl PointRef {
    /// Checked constructor: `n + 1` finite coordinates, each `≥ -1e-12`,
    /// summing to one within `1e-12`.
    pub fn new(c: &SimplicialComplex, top: usize, bary: Vec<f64>) -> Result<Self, ChartError> {
        if top >= c.num_tops() {
            return Err(ChartError::InvalidPoint(format!("no top simplex {top}")));
        }
        if bary.len() != c.dim() + 1 {
            return Err(ChartError::InvalidPoint(format!(
                "expected {} barycentric coordinates, got {}",
                c.dim() + 1,
                bary.len()
            )));
        }
        if bary.iter().any(|x| !x.is_finite() || *x < -MEMBERSHIP_TOL) {
            return Err(ChartError::InvalidPoint(format!(
                "coordinates out of range: {bary:?}"
            )));
        }
        let sum: f64 = bary.iter().sum();
        if (sum - 1.0).abs() > MEMBERSHIP_TOL {
            return Err(ChartError::InvalidPoint(format!(
                "coordinates sum to {sum}"
            )));
        }
        Ok(PointRef { top, bary })
    }

    pub fn barycenter(c: &SimplicialComplex, top: usize) -> Self {
        let k = c.dim() + 1;
        PointRef {
            top,
            bary: vec![1.0 / k as f64; k],
        }
    }

    /// Local indices of the coordinates above the membership tolerance.
    pub fn support(&self) -> Vec<usize> {
        (0..self.bary.len())
            .filter(|&i| self.bary[i] > MEMBERSHIP_TOL)
            .collect()
    }

    /// Sorted global vertex ids of the smallest face containing the point.
    pub fn support_vertices(&self, c: &SimplicialComplex) -> Vec<usize> {
        let top = c.top(self.top);
        self.support().into_iter().map(|i| top[i]).collect()
    }

    /// `(vertex, weight)` pairs over the vertices of the top, sorted by vertex.
    pub fn weights(&self, c: &SimplicialComplex) -> Vec<(usize, f64)> {
        c.top(self.top)
            .iter()
            .copied()
            .zip(self.bary.iter().copied())
            .collect()
    }

    /// Largest difference of vertex weights; meaningful across tops since
    /// missing vertices carry weight zero.
    pub fn bary_distance(&self, c: &SimplicialComplex, other: &PointRef) -> f64 {
        let (a, b) = (self.weights(c), other.weights(c));
        let (mut i, mut j) = (0, 0);
        let mut worst = 0.0f64;
        while i < a.len() || j < b.len() {
            let diff = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) if x.0 == y.0 => {
                    i += 1;
                    j += 1;
                    x.1 - y.1
                }
                (Some(x), Some(y)) if x.0 < y.0 => {
                    i += 1;
                    x.1
                }
                (Some(x), None) => {
                    i += 1;
                    x.1
                }
                (_, Some(y)) => {
                    j += 1;
                    y.1
                }
                (None, None) => unreachable!(),
            };
            worst = worst.max(diff.abs());
        }
        worst
    }

    /// Re-expresses the point in another top containing its support.
    pub fn in_top(&self, c: &SimplicialComplex, top: usize) -> Option<PointRef> {
        if top == self.top {
            return Some(self.clone());
        }
        let verts = c.top(top);
        let mut bary = vec![0.0; verts.len()];
        for (v, w) in self.weights(c) {
            match verts.iter().position(|&u| u == v) {
                Some(i) => bary[i] = w,
                None if w.abs() <= MEMBERSHIP_TOL => {}
                None => return None,
            }
        }
        Some(PointRef { top, bary })
    }

    pub fn ambient(&self, c: &SimplicialComplex) -> Option<Vec<f64>> {
        c.ambient_point(self.top, &self.bary)
    }

    /// Affine combination `(1 - f) a + f b` of two points of the same top.
    pub(crate) fn lerp(a: &PointRef, b: &PointRef, f: f64) -> PointRef {
        debug_assert_eq!(a.top, b.top);
        PointRef {
            top: a.top,
            bary: a
                .bary
                .iter()
                .zip(&b.bary)
                .map(|(x, y)| x + f * (y - x))
                .collect(),
        }
    }
}
