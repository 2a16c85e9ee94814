//! Frame extension over the cell.
//!
//! Each top simplex `T` with sorted vertices `t_0..t_n` carries the affine
//! basis `e_j = t_j - t_0`. A frame on `T` is an `n × n` matrix `M` whose row
//! `i` holds the coefficients of `X_i` in that basis. Across a gate the
//! frame is carried over by unfolding the child onto the parent: both are
//! laid out isometrically in `R^n` on opposite sides of the shared face, so
//! the same vectors are re-expressed in the child's basis.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::chart::{CellChart, ExtensionRecord};
use crate::geometry::SimplexGeometry;

use super::FieldError;

/// Smallest admissible `|det|` of a frame matrix.
pub const FRAME_DET_MIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct FrameField {
    matrices: Vec<DMatrix<f64>>,
    /// Per record: `T` with `M_child = M_parent · T`.
    transitions: Vec<DMatrix<f64>>,
}

impl FrameField {
    pub fn matrix(&self, top: usize) -> &DMatrix<f64> {
        &self.matrices[top]
    }

    pub fn matrices(&self) -> &[DMatrix<f64>] {
        &self.matrices
    }

    /// The constant transition `f_ij` of each gate, in record order.
    pub fn transitions(&self) -> &[DMatrix<f64>] {
        &self.transitions
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].nrows()
    }

    /// Smallest `|det|` over all simplices.
    pub fn min_abs_det(&self) -> f64 {
        self.matrices
            .iter()
            .map(|m| m.determinant().abs())
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn extend_frame(chart: &CellChart) -> Result<FrameField, FieldError> {
    let c = chart.complex();
    let n = c.dim();
    let mut matrices: Vec<Option<DMatrix<f64>>> = vec![None; c.num_tops()];
    matrices[chart.root()] = Some(DMatrix::identity(n, n));
    let mut transitions = Vec::with_capacity(chart.records().len());
    for rec in chart.records() {
        let t = transition(chart, rec)?;
        let parent = matrices[rec.parent].as_ref().expect("parent framed first");
        let m = parent * &t;
        let det = m.determinant();
        if !(det.abs() > FRAME_DET_MIN) {
            return Err(FieldError::SingularFrame {
                top: rec.child,
                det,
            });
        }
        matrices[rec.child] = Some(m);
        transitions.push(t);
    }
    Ok(FrameField {
        matrices: matrices
            .into_iter()
            .map(|m| m.expect("every top is reached"))
            .collect(),
        transitions,
    })
}

/// `E_P · E_C⁻¹`, with both edge matrices taken in the parent's embedding.
fn transition(chart: &CellChart, rec: &ExtensionRecord) -> Result<DMatrix<f64>, FieldError> {
    let c = chart.complex();
    let m = chart.metric();
    let n = c.dim();
    let parent = c.top(rec.parent);
    let child = c.top(rec.child);
    let singular = |top| FieldError::SingularFrame { top, det: 0.0 };
    let pos = chart
        .geometry(rec.parent)
        .embedding()
        .ok_or_else(|| singular(rec.parent))?;
    let at = |v: usize| &pos[parent.iter().position(|&u| u == v).expect("parent vertex")];

    let face: Vec<usize> = c.face(n - 1, rec.face).to_vec();
    let w = *parent
        .iter()
        .find(|v| !face.contains(v))
        .expect("parent apex");
    let v = rec.opposite_vertex;
    let f0 = at(face[0]);
    let len = |a: usize, b: usize| m.between(c, a, b);

    // u = pos(v) - pos(f0) = tangential part + h · outward normal
    let omega = at(w) - f0;
    let (tangent, omega_perp) = if n == 1 {
        (DVector::zeros(n), omega.clone())
    } else {
        let b = DMatrix::from_fn(n - 1, n, |k, j| at(face[k + 1])[j] - f0[j]);
        let bbt = &b * b.transpose();
        let lu = bbt.clone().lu();
        let g = DVector::from_fn(n - 1, |k, _| {
            0.5 * (len(v, face[0]).powi(2) + len(face[0], face[k + 1]).powi(2)
                - len(v, face[k + 1]).powi(2))
        });
        let coef = lu.solve(&g).ok_or_else(|| singular(rec.parent))?;
        let proj = lu
            .solve(&(&b * &omega))
            .ok_or_else(|| singular(rec.parent))?;
        (b.transpose() * coef, &omega - b.transpose() * proj)
    };
    let h2 = len(v, face[0]).powi(2) - tangent.norm_squared();
    let wn = omega_perp.norm();
    if !(h2 > 0.0) || !(wn > 0.0) {
        return Err(singular(rec.child));
    }
    let pos_v = f0 + tangent - omega_perp * (h2.sqrt() / wn);

    let cpos = |u: usize| if u == v { pos_v.clone() } else { at(u).clone() };
    let e_p = DMatrix::from_fn(n, n, |j, k| pos[j + 1][k] - pos[0][k]);
    let c0 = cpos(child[0]);
    let e_c = DMatrix::from_fn(n, n, |j, k| cpos(child[j + 1])[k] - c0[k]);
    let inv = e_c.try_inverse().ok_or_else(|| singular(rec.child))?;
    Ok(e_p * inv)
}

/// Per-gate disagreement of the frame seen from both sides.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateAgreement {
    pub record: usize,
    pub face: usize,
    /// Largest difference of inner products with gate edges and of normal
    /// components, over all frame vectors.
    pub max_error: f64,
}

/// Compares each frame vector on the two sides of every gate using only
/// intrinsic data: inner products with the gate's edges, and the normal
/// component `δ_w h_w` (parent) against `-δ_v h_v` (child).
pub fn gate_agreement(chart: &CellChart, frame: &FrameField) -> Vec<GateAgreement> {
    let c = chart.complex();
    let n = c.dim();
    chart
        .records()
        .iter()
        .enumerate()
        .map(|(i, rec)| {
            let face = c.face(n - 1, rec.face);
            let (parent, child) = (c.top(rec.parent), c.top(rec.child));
            let (gp, gc) = (chart.geometry(rec.parent), chart.geometry(rec.child));
            let face_geom = SimplexGeometry::from_vertices(c, chart.metric(), face);
            let (vp, vc, vf) = (gp.volume(), gc.volume(), face_geom.volume());
            let h_w = n as f64 * vp / vf;
            let h_v = n as f64 * vc / vf;
            let local = |top: &[usize], v: usize| top.iter().position(|&u| u == v).expect("vertex");
            let w_local = (0..=n).find(|&k| !face.contains(&parent[k])).expect("apex");
            let v_local = (0..=n).find(|&k| !face.contains(&child[k])).expect("apex");
            let edge = |top: &[usize], k: usize| {
                let mut e = vec![0.0; n + 1];
                e[local(top, face[k])] += 1.0;
                e[local(top, face[0])] -= 1.0;
                e
            };
            let mut worst = 0.0f64;
            for row in 0..n {
                let dp = displacement(frame.matrix(rec.parent), row);
                let dc = displacement(frame.matrix(rec.child), row);
                for k in 1..n {
                    let a = gp.dot(&dp, &edge(parent, k));
                    let b = gc.dot(&dc, &edge(child, k));
                    worst = worst.max((a - b).abs());
                }
                worst = worst.max((dp[w_local] * h_w + dc[v_local] * h_v).abs());
            }
            GateAgreement {
                record: i,
                face: rec.face,
                max_error: worst,
            }
        })
        .collect()
}

/// Barycentric displacement of frame vector `row`.
fn displacement(m: &DMatrix<f64>, row: usize) -> Vec<f64> {
    let n = m.ncols();
    let mut d = vec![0.0; n + 1];
    for j in 0..n {
        d[j + 1] = m[(row, j)];
        d[0] -= m[(row, j)];
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{circle3, sphere_tet};
    use crate::chart::build_chart;
    use crate::complex::Metric;
    use crate::spine::{decompose, Strategy};

    #[test]
    fn circle_frames_are_signs() {
        let c = circle3();
        let d = decompose(&c, 0, Strategy::Bfs, 0).unwrap();
        let ch = build_chart(&c, &d, &Metric::unit(&c)).unwrap();
        let f = extend_frame(&ch).unwrap();
        // root [0,1] points 0 -> 1; [1,2] continues past 1, [0,2] runs back past 0
        assert_eq!(f.matrix(0)[(0, 0)], 1.0);
        let signs: Vec<f64> = (0..3).map(|t| f.matrix(t)[(0, 0)]).collect();
        assert!((signs[1] + 1.0).abs() < 1e-12, "{signs:?}");
        assert!((signs[2] - 1.0).abs() < 1e-12, "{signs:?}");
        assert!(gate_agreement(&ch, &f).iter().all(|g| g.max_error < 1e-12));
    }

    #[test]
    fn tetrahedron_frames_agree() {
        let c = sphere_tet();
        for root in 0..4 {
            let d = decompose(&c, root, Strategy::Dfs, 0).unwrap();
            let ch = build_chart(&c, &d, &Metric::from_complex(&c).unwrap()).unwrap();
            let f = extend_frame(&ch).unwrap();
            assert_eq!(f.matrix(root), &DMatrix::identity(2, 2));
            assert!(f.min_abs_det() > FRAME_DET_MIN);
            for g in gate_agreement(&ch, &f) {
                assert!(g.max_error < 1e-9, "{g:?}");
            }
        }
    }
}
