//! The cell chart: broken lines, the coordinate map from the open root
//! simplex onto the cell, and the retraction onto the spine.
//!
//! Every point of the cell lies on a broken line that starts at the root
//! barycenter `c₀`. Inside the root the lines are rays from `c₀`. A line that
//! leaves its simplex through a gate continues in the child along the
//! direction `v - d`, where `v` is the child vertex opposite the gate and `d`
//! is the gate barycenter. In child barycentric coordinates a line through
//! the gate point `y` is
//!
//! ```text
//! α_v(τ) = τ,   α_f(τ) = y_f - τ/n   (f on the gate)
//! ```
//!
//! which exits at `τ = n · min_f y_f`. The line stops as soon as it reaches a
//! point of the spine closure.
//!
//! The map `ψ` sends the point at arc length `s` on the ray to the point at
//! arc length `stretch(s, s1, s2)` on the broken line, composed once per
//! segment in growth order.

mod line;
mod point;

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::complex::{Metric, SimplicialComplex};
use crate::geometry::SimplexGeometry;
use crate::spine::{spine_closure, Decomposition};
use crate::MEMBERSHIP_TOL;

pub use line::{BrokenLine, Segment};
pub use point::PointRef;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChartError {
    #[error("stretch domain violated: {0}")]
    Domain(String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("point is not interior to the root simplex")]
    NotInterior,
    #[error("point of top {top} lies on the spine face {face:?}")]
    Black { top: usize, face: Vec<usize> },
    #[error("point of top {top} is not on the spine")]
    NotOnSpine { top: usize },
    #[error("broken line meets the white face {face:?} of codimension > 1")]
    Unreachable { face: Vec<usize> },
    #[error("homotopy parameter {0} outside [0, 1]")]
    TimeOutOfRange(f64),
    #[error("invalid decomposition: {0}")]
    Decomposition(String),
}

/// `(s1 + s2) / s1 · s`: the point at distance `s` along an interval of
/// length `s1` moved onto the concatenation with an interval of length `s2`.
pub fn stretch(s: f64, s1: f64, s2: f64) -> Result<f64, ChartError> {
    if !(s1 > 0.0 && s1.is_finite()) {
        return Err(ChartError::Domain(format!("s1 = {s1} must be positive")));
    }
    if !(s2 >= 0.0 && s2.is_finite()) {
        return Err(ChartError::Domain(format!(
            "s2 = {s2} must be non-negative"
        )));
    }
    if !(0.0..=s1).contains(&s) {
        return Err(ChartError::Domain(format!("s = {s} outside [0, {s1}]")));
    }
    Ok(stretch_unchecked(s, s1, s2))
}

/// Inverse of [`stretch`] for `0 ≤ s ≤ s1 + s2`.
pub fn compress(s: f64, s1: f64, s2: f64) -> Result<f64, ChartError> {
    if !(s1 > 0.0 && s1.is_finite()) || !(s2 >= 0.0 && s2.is_finite()) {
        return Err(ChartError::Domain(format!(
            "bad lengths s1 = {s1}, s2 = {s2}"
        )));
    }
    if !(0.0..=s1 + s2).contains(&s) {
        return Err(ChartError::Domain(format!(
            "s = {s} outside [0, {}]",
            s1 + s2
        )));
    }
    Ok(compress_unchecked(s, s1, s2))
}

fn stretch_unchecked(s: f64, s1: f64, s2: f64) -> f64 {
    s * (s1 + s2) / s1
}

fn compress_unchecked(s: f64, s1: f64, s2: f64) -> f64 {
    s * s1 / (s1 + s2)
}

/// Where the interval family of a record's parent emanates from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Apex {
    /// The parent is the root; its intervals are rays from `c₀`.
    RootCenter,
    /// The parent's intervals are those of the record that created it.
    Inherited { record: usize },
}

/// One growth step of the cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtensionRecord {
    pub face: usize,
    pub parent: usize,
    pub child: usize,
    pub apex: Apex,
    /// Barycenter of the gate face, in child coordinates.
    pub gate_center: PointRef,
    pub opposite_vertex: usize,
    /// Length of `v - d` under the metric.
    pub direction_length: f64,
    opposite_local: usize,
    /// Local indices of the gate vertices (sorted) in the child and parent.
    face_in_child: Vec<usize>,
    face_in_parent: Vec<usize>,
}

/// A white point together with the broken line through it.
#[derive(Debug, Clone, PartialEq)]
pub struct Located {
    pub line: BrokenLine,
    /// Arc length of the point from `c₀`.
    pub arc: f64,
    /// Where the line leaves the root, in root coordinates.
    pub boundary: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct CellChart {
    complex: SimplicialComplex,
    decomposition: Decomposition,
    metric: Metric,
    records: Vec<ExtensionRecord>,
    geometry: Vec<SimplexGeometry>,
    closure: Vec<BTreeSet<usize>>,
    entry: Vec<Option<usize>>,
    by_face: HashMap<usize, usize>,
    center: PointRef,
}

pub fn build_chart(
    c: &SimplicialComplex,
    d: &Decomposition,
    m: &Metric,
) -> Result<CellChart, ChartError> {
    d.validate(c)
        .map_err(|e| ChartError::Decomposition(e.to_string()))?;
    let n = c.dim();
    let geometry: Vec<SimplexGeometry> = (0..c.num_tops())
        .map(|t| SimplexGeometry::new(c, m, t))
        .collect();
    let mut entry = vec![None; c.num_tops()];
    let mut by_face = HashMap::new();
    let mut records = Vec::with_capacity(d.gates.len());
    for (i, g) in d.gates.iter().enumerate() {
        let face = c.face(n - 1, g.face);
        let (child, parent) = (c.top(g.child), c.top(g.parent));
        let local =
            |top: &[usize], v: usize| top.iter().position(|&u| u == v).expect("gate vertex");
        let face_in_child: Vec<usize> = face.iter().map(|&v| local(child, v)).collect();
        let face_in_parent: Vec<usize> = face.iter().map(|&v| local(parent, v)).collect();
        let opposite_local = (0..=n)
            .find(|i| !face_in_child.contains(i))
            .expect("opposite vertex");
        let mut center = vec![0.0; n + 1];
        for &k in &face_in_child {
            center[k] = 1.0 / n as f64;
        }
        let mut dir: Vec<f64> = center.iter().map(|x| -x).collect();
        dir[opposite_local] = 1.0;
        let apex = if g.parent == d.root {
            Apex::RootCenter
        } else {
            Apex::Inherited {
                record: entry[g.parent].expect("parent precedes child"),
            }
        };
        records.push(ExtensionRecord {
            face: g.face,
            parent: g.parent,
            child: g.child,
            apex,
            gate_center: PointRef {
                top: g.child,
                bary: center,
            },
            opposite_vertex: child[opposite_local],
            direction_length: geometry[g.child].norm(&dir),
            opposite_local,
            face_in_child,
            face_in_parent,
        });
        entry[g.child] = Some(i);
        by_face.insert(g.face, i);
    }
    Ok(CellChart {
        complex: c.clone(),
        decomposition: d.clone(),
        metric: m.clone(),
        records,
        geometry,
        closure: spine_closure(c, d),
        entry,
        by_face,
        center: PointRef::barycenter(c, d.root),
    })
}

impl CellChart {
    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn decomposition(&self) -> &Decomposition {
        &self.decomposition
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn records(&self) -> &[ExtensionRecord] {
        &self.records
    }

    pub fn geometry(&self, top: usize) -> &SimplexGeometry {
        &self.geometry[top]
    }

    pub fn root(&self) -> usize {
        self.decomposition.root
    }

    /// `c₀`, the barycenter of the root.
    pub fn center(&self) -> &PointRef {
        &self.center
    }

    /// Record through which `top` joined the cell (`None` for the root).
    pub fn entry_record(&self, top: usize) -> Option<&ExtensionRecord> {
        self.entry[top].map(|i| &self.records[i])
    }

    /// Number of gates between the root and `top`.
    pub fn depth(&self, top: usize) -> usize {
        let mut t = top;
        let mut k = 0;
        while let Some(r) = self.entry_record(t) {
            t = r.parent;
            k += 1;
        }
        k
    }

    /// The spine face carrying `p`, if `p` is black.
    pub fn spine_face(&self, p: &PointRef) -> Option<Vec<usize>> {
        let face = p.support_vertices(&self.complex);
        let k = face.len().checked_sub(1)?;
        if k >= self.complex.dim() {
            return None;
        }
        let id = self.complex.face_id(&face)?;
        self.closure[k].contains(&id).then_some(face)
    }

    pub fn is_black(&self, p: &PointRef) -> bool {
        self.spine_face(p).is_some()
    }

    fn is_center(&self, p: &PointRef) -> bool {
        p.top == self.root() && p.bary == self.center.bary
    }

    /// Maps a point of the open root simplex onto the cell.
    pub fn forward_map(&self, p: &[f64]) -> Result<PointRef, ChartError> {
        let p = PointRef::new(&self.complex, self.root(), p.to_vec())?;
        if p.bary.iter().any(|&x| x <= MEMBERSHIP_TOL) {
            return Err(ChartError::NotInterior);
        }
        if self.is_center(&p) {
            return Ok(self.center.clone());
        }
        let (b, lambda) = self.ray_exit(&p.bary);
        let line = self.line_from_boundary(&b)?;
        let radius = line.segments[0].length;
        let mut s = radius / lambda;
        let mut acc = radius;
        for seg in &line.segments[1..] {
            s = stretch_unchecked(s.min(acc), acc, seg.length);
            acc += seg.length;
        }
        Ok(line.point_at(s))
    }

    /// Inverse of [`CellChart::forward_map`]; returns root coordinates.
    pub fn inverse_map(&self, q: &PointRef) -> Result<Vec<f64>, ChartError> {
        self.check(q)?;
        if let Some(face) = self.spine_face(q) {
            return Err(ChartError::Black { top: q.top, face });
        }
        if self.is_center(q) {
            return Ok(self.center.bary.clone());
        }
        let loc = self.locate(q)?;
        let offsets = loc.line.offsets();
        let mut s = loc.arc;
        for (seg, &before) in loc.line.segments.iter().zip(&offsets).skip(1).rev() {
            s = compress_unchecked(s, before, seg.length);
        }
        let rho = (s / loc.line.segments[0].length).clamp(0.0, 1.0);
        Ok(self
            .center
            .bary
            .iter()
            .zip(&loc.boundary)
            .map(|(c, b)| c + rho * (b - c))
            .collect())
    }

    /// The broken line through the white point `q` and the arc length of
    /// `q` on it. `c₀` gets the line through the first gate's barycenter.
    pub fn locate(&self, q: &PointRef) -> Result<Located, ChartError> {
        self.check(q)?;
        if let Some(face) = self.spine_face(q) {
            return Err(ChartError::Black { top: q.top, face });
        }
        let root = self.root();
        if self.is_center(q) {
            let g = &self
                .records
                .iter()
                .find(|r| r.parent == root)
                .expect("root has a gate");
            let mut b = vec![0.0; self.complex.dim() + 1];
            for &k in &g.face_in_parent {
                b[k] = 1.0 / self.complex.dim() as f64;
            }
            let line = self.line_from_boundary(&b)?;
            return Ok(Located {
                line,
                arc: 0.0,
                boundary: b,
            });
        }
        if q.top == root {
            let (b, _) = self.ray_exit(&q.bary);
            let line = self.line_from_boundary(&b)?;
            let arc = self.geometry[root].distance(&self.center.bary, &q.bary);
            return Ok(Located {
                line,
                arc,
                boundary: b,
            });
        }
        let (mut line, boundary) = self.trace_back(q);
        let last = line.segments.pop().expect("child segment");
        let rec = self.entry_record(q.top).expect("child record");
        let y: Vec<f64> = rec
            .face_in_child
            .iter()
            .map(|&k| last.start.bary[k])
            .collect();
        let arc = line.total_length() + q.bary[rec.opposite_local] * rec.direction_length;
        line.segments.push(self.segment_in_child(rec, &y));
        self.extend(&mut line)?;
        Ok(Located {
            line,
            arc,
            boundary,
        })
    }

    /// The broken line ending at the spine point `z`, arriving from inside
    /// `z.top`.
    pub fn broken_line_to(&self, z: &PointRef) -> Result<BrokenLine, ChartError> {
        self.check(z)?;
        if !self.is_black(z) {
            return Err(ChartError::NotOnSpine { top: z.top });
        }
        if z.top == self.root() {
            return Ok(BrokenLine {
                segments: vec![self.root_segment(&z.bary)],
            });
        }
        let (mut line, _) = self.trace_back(z);
        if line.segments.last().is_some_and(|s| s.length == 0.0) {
            line.segments.pop();
        }
        Ok(line)
    }

    /// The homotopy `F(x, t)`: moves `x` along its broken line so that its
    /// remaining arc length to the endpoint becomes `(1 - t) s(x)`.
    pub fn retract(&self, x: &PointRef, t: f64) -> Result<PointRef, ChartError> {
        if !(0.0..=1.0).contains(&t) {
            return Err(ChartError::TimeOutOfRange(t));
        }
        self.check(x)?;
        if t == 0.0 || self.is_black(x) {
            return Ok(x.clone());
        }
        let loc = self.locate(x)?;
        if t == 1.0 {
            return Ok(loc.line.endpoint().clone());
        }
        let total = loc.line.total_length();
        Ok(loc.line.point_at(loc.arc + t * (total - loc.arc)))
    }

    /// `s(x)`: remaining arc length from `x` to the end of its broken line
    /// (zero on the spine).
    pub fn arc_to_spine(&self, x: &PointRef) -> Result<f64, ChartError> {
        self.check(x)?;
        if self.is_black(x) {
            return Ok(0.0);
        }
        let loc = self.locate(x)?;
        Ok(loc.line.total_length() - loc.arc)
    }

    /// The full broken line leaving the root at boundary point `b`.
    pub fn line_from_boundary(&self, b: &[f64]) -> Result<BrokenLine, ChartError> {
        let mut line = BrokenLine {
            segments: vec![self.root_segment(b)],
        };
        self.extend(&mut line)?;
        Ok(line)
    }

    fn check(&self, p: &PointRef) -> Result<(), ChartError> {
        PointRef::new(&self.complex, p.top, p.bary.clone()).map(|_| ())
    }

    fn root_segment(&self, b: &[f64]) -> Segment {
        let root = self.root();
        Segment {
            top: root,
            start: self.center.clone(),
            end: PointRef {
                top: root,
                bary: b.to_vec(),
            },
            length: self.geometry[root].distance(&self.center.bary, b),
        }
    }

    /// Where the ray from `c₀` through `p` leaves the root, and the factor
    /// `λ` with `b = c₀ + λ (p - c₀)`.
    fn ray_exit(&self, p: &[f64]) -> (Vec<f64>, f64) {
        let c = &self.center.bary;
        let mut best: Option<(usize, f64)> = None;
        for i in 0..p.len() {
            if p[i] < c[i] {
                let l = c[i] / (c[i] - p[i]);
                if best.is_none_or(|(_, b)| l < b) {
                    best = Some((i, l));
                }
            }
        }
        let (i, lambda) = best.expect("p differs from the barycenter");
        let mut b: Vec<f64> = c.iter().zip(p).map(|(c, p)| c + lambda * (p - c)).collect();
        b[i] = 0.0;
        for x in &mut b {
            if x.abs() <= MEMBERSHIP_TOL * 1e-3 {
                *x = 0.0;
            }
        }
        (b, lambda)
    }

    /// The full segment in the child of `rec` starting at gate point `y`
    /// (coordinates in gate-vertex order).
    fn segment_in_child(&self, rec: &ExtensionRecord, y: &[f64]) -> Segment {
        let n = self.complex.dim();
        let m = y.iter().copied().fold(f64::INFINITY, f64::min);
        let tau = n as f64 * m;
        let mut start = vec![0.0; n + 1];
        let mut end = vec![0.0; n + 1];
        for (&k, &yk) in rec.face_in_child.iter().zip(y) {
            start[k] = yk;
            end[k] = if yk == m { 0.0 } else { yk - m };
        }
        end[rec.opposite_local] = tau;
        Segment {
            top: rec.child,
            start: PointRef {
                top: rec.child,
                bary: start,
            },
            end: PointRef {
                top: rec.child,
                bary: end,
            },
            length: tau * rec.direction_length,
        }
    }

    /// Continues `line` through gates until it reaches the spine closure.
    fn extend(&self, line: &mut BrokenLine) -> Result<(), ChartError> {
        loop {
            let p = line.endpoint().clone();
            if self.is_black(&p) {
                return Ok(());
            }
            let zeros: Vec<usize> = (0..p.bary.len())
                .filter(|&i| p.bary[i] <= MEMBERSHIP_TOL)
                .collect();
            if zeros.len() != 1 || line.segments.len() > self.complex.num_tops() {
                return Err(ChartError::Unreachable {
                    face: p.support_vertices(&self.complex),
                });
            }
            let ridge = self.complex.top_ridges(p.top)[zeros[0]];
            let rec = self
                .by_face
                .get(&ridge)
                .map(|&i| &self.records[i])
                .filter(|r| r.parent == p.top)
                .ok_or_else(|| ChartError::Unreachable {
                    face: p.support_vertices(&self.complex),
                })?;
            let y: Vec<f64> = rec.face_in_parent.iter().map(|&k| p.bary[k]).collect();
            line.segments.push(self.segment_in_child(rec, &y));
        }
    }

    /// Walks from `q` (in a child) back to the root through entry gates.
    /// Returns the line from `c₀` ending exactly at `q` and the root exit
    /// point.
    fn trace_back(&self, q: &PointRef) -> (BrokenLine, Vec<f64>) {
        let n = self.complex.dim();
        // (record, point in child coordinates) from q upward
        let mut steps: Vec<(&ExtensionRecord, PointRef)> = Vec::new();
        let mut cur = q.clone();
        while let Some(rec) = self.entry_record(cur.top) {
            let tau = cur.bary[rec.opposite_local];
            let mut parent = vec![0.0; n + 1];
            for (&kc, &kp) in rec.face_in_child.iter().zip(&rec.face_in_parent) {
                parent[kp] = cur.bary[kc] + tau / n as f64;
            }
            steps.push((rec, cur));
            cur = PointRef {
                top: rec.parent,
                bary: parent,
            };
        }
        let boundary = cur.bary.clone();
        let mut segments = vec![self.root_segment(&boundary)];
        for (rec, end) in steps.into_iter().rev() {
            let prev = &segments.last().expect("segment").end;
            let mut start = vec![0.0; n + 1];
            for (&kc, &kp) in rec.face_in_child.iter().zip(&rec.face_in_parent) {
                start[kc] = prev.bary[kp];
            }
            segments.push(Segment {
                top: rec.child,
                start: PointRef {
                    top: rec.child,
                    bary: start,
                },
                length: end.bary[rec.opposite_local] * rec.direction_length,
                end,
            });
        }
        (BrokenLine { segments }, boundary)
    }
}
