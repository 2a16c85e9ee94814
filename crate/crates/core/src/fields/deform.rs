//! Deformation of a tensor field toward the hole, and its seam report.
//!
//! For a white point `y` at arc length `s(y)` on a broken line split as
//! `(s0, s1)`:
//!
//! * `s(y) ≤ s0`: the value is `K⁰ = K(c₀)`;
//! * otherwise the value is `K(x)` for the point `x` of the same line at arc
//!   length `(s(y) - s0) / s1 · (s0 + s1)`.
//!
//! Spine points keep `K`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chart::{BrokenLine, CellChart, PointRef};

use super::{Evaluate, FieldError, HoleRegion, LineSplit, TensorField};

/// Jump size above which a seam sample counts as a discontinuity.
pub const SEAM_TOL: f64 = 1e-6;
/// Approach offsets are `BASE_OFFSET / 2^k` for `k < LEVELS`.
pub const BASE_OFFSET: f64 = 1e-8;
const LEVELS: usize = 4;
/// One-sided slope difference above which a seam sample is flagged as a kink.
const KINK_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeformCase {
    /// `y` is on the spine: `K(y)`.
    Spine,
    /// `y` is outside the hole: `K⁰`.
    Outside,
    /// `y` is in the hole: `K` at the reparametrized point.
    Tail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeformTrace {
    pub case: DeformCase,
    /// Arc length of `y` from `c₀` (absent on the spine).
    pub s_y: Option<f64>,
    /// Arc length of the preimage `x` (tail case only).
    pub s_x: Option<f64>,
    pub split: Option<LineSplit>,
    /// Where the input field was evaluated.
    pub preimage: PointRef,
    pub value: Vec<f64>,
}

/// `K̄`, evaluated lazily.
#[derive(Debug, Clone)]
pub struct DeformedField {
    input: TensorField,
    chart: Arc<CellChart>,
    hole: HoleRegion,
    k0: Vec<f64>,
}

pub fn deform_tensor(
    k: &TensorField,
    chart: Arc<CellChart>,
    hole: HoleRegion,
) -> Result<DeformedField, FieldError> {
    if k.dim() != chart.complex().dim() {
        return Err(FieldError::SizeMismatch {
            expected: chart.complex().dim(),
            got: k.dim(),
        });
    }
    let k0 = k.evaluate(chart.center())?;
    Ok(DeformedField {
        input: k.clone(),
        chart,
        hole,
        k0,
    })
}

/// `(s(y) - s0) / s1 · (s0 + s1)`, clamped to the line.
pub fn reparametrize(split: LineSplit, s_y: f64) -> f64 {
    if s_y >= split.total {
        return split.total;
    }
    ((s_y - split.s0) / split.s1 * split.total).max(0.0)
}

impl DeformedField {
    pub fn input(&self) -> &TensorField {
        &self.input
    }

    pub fn chart(&self) -> &CellChart {
        &self.chart
    }

    pub fn hole(&self) -> &HoleRegion {
        &self.hole
    }

    /// `K⁰`: the input's components at `c₀`.
    pub fn k0(&self) -> &[f64] {
        &self.k0
    }

    pub fn trace(&self, y: &PointRef) -> Result<DeformTrace, FieldError> {
        if self.chart.is_black(y) {
            return Ok(DeformTrace {
                case: DeformCase::Spine,
                s_y: None,
                s_x: None,
                split: None,
                preimage: y.clone(),
                value: self.input.evaluate(y)?,
            });
        }
        let loc = self.chart.locate(y)?;
        let split = self.hole.split(loc.line.total_length());
        self.on_line(&loc.line, split, loc.arc)
    }

    fn on_line(
        &self,
        line: &BrokenLine,
        split: LineSplit,
        s_y: f64,
    ) -> Result<DeformTrace, FieldError> {
        if s_y <= split.s0 {
            return Ok(DeformTrace {
                case: DeformCase::Outside,
                s_y: Some(s_y),
                s_x: None,
                split: Some(split),
                preimage: self.chart.center().clone(),
                value: self.k0.clone(),
            });
        }
        let s_x = reparametrize(split, s_y);
        let x = line.point_at(s_x);
        Ok(DeformTrace {
            case: DeformCase::Tail,
            s_y: Some(s_y),
            s_x: Some(s_x),
            split: Some(split),
            value: self.input.evaluate(&x)?,
            preimage: x,
        })
    }

    /// A plain [`TensorField`] evaluating `K̄`.
    pub fn into_field(self) -> TensorField {
        let (r, s) = self.input.rank();
        let n = self.input.dim();
        let frame = self.input.frame().cloned();
        let f = TensorField::from_fn(n, r, s, move |p| self.evaluate(p));
        match frame {
            Some(fr) => f.with_frame(fr),
            None => f,
        }
    }
}

impl Evaluate for DeformedField {
    fn evaluate(&self, p: &PointRef) -> Result<Vec<f64>, FieldError> {
        Ok(self.trace(p)?.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Seam {
    HoleBoundary,
    SpineLimit,
    Gate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Attribution {
    /// The input field already jumps between the preimages.
    Input,
    /// The input is continuous there; the jump comes from the deformation.
    Deformation,
}

/// One approach sequence across a seam.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeamSample {
    pub seam: Seam,
    pub line: usize,
    /// Arc length of the seam point on its line.
    pub arc: f64,
    pub location: PointRef,
    /// Largest component jump at offset [`BASE_OFFSET`].
    pub raw_jump: f64,
    /// Extrapolated jump at zero offset.
    pub limit_jump: f64,
    /// The same limit for the input field at the preimages.
    pub input_jump: f64,
    pub attribution: Option<Attribution>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeamSummary {
    pub seam: Seam,
    pub count: usize,
    pub max_raw_jump: f64,
    pub max_limit_jump: f64,
}

/// A seam point where one-sided slopes differ; these are expected at the
/// hole boundary and may occur at gates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Kink {
    pub seam: Seam,
    pub line: usize,
    pub arc: f64,
    pub slope_jump: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuityReport {
    pub lines: usize,
    pub epsilon: f64,
    pub epsilon_max: f64,
    pub offsets: Vec<f64>,
    /// Largest `|K̄ - K⁰|` exactly on the hole boundary.
    pub boundary_mismatch: f64,
    pub seams: Vec<SeamSummary>,
    /// Seam samples whose limit jump exceeds [`SEAM_TOL`].
    pub faults: Vec<SeamSample>,
    pub kinks: Vec<Kink>,
    pub distance_proxy: &'static str,
}

impl ContinuityReport {
    pub fn is_continuous(&self) -> bool {
        self.faults.is_empty()
    }

    pub fn summary(&self, seam: Seam) -> Option<&SeamSummary> {
        self.seams.iter().find(|s| s.seam == seam)
    }
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn richardson(d: &[f64]) -> f64 {
    let k = d.len();
    (2.0 * d[k - 1] - d[k - 2]).max(0.0)
}

/// `samples` lines through random root-boundary points (fixed seed), then
/// the line through every gate barycenter.
fn sample_lines(chart: &CellChart, samples: usize) -> Result<Vec<BrokenLine>, FieldError> {
    let c = chart.complex();
    let n = c.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut out = Vec::with_capacity(samples + chart.records().len());
    for _ in 0..samples {
        let skip = rng.gen_range(0..=n);
        let mut w: Vec<f64> = (0..n)
            .map(|_| -rng.gen::<f64>().max(f64::MIN_POSITIVE).ln())
            .collect();
        let sum: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= sum);
        w.insert(skip, 0.0);
        out.push(chart.line_from_boundary(&w)?);
    }
    for rec in chart.records() {
        out.push(chart.locate(&rec.gate_center)?.line);
    }
    Ok(out)
}

pub fn continuity_report(
    field: &DeformedField,
    samples: usize,
) -> Result<ContinuityReport, FieldError> {
    let chart = field.chart();
    let offsets: Vec<f64> = (0..LEVELS)
        .map(|k| BASE_OFFSET / (1u64 << k) as f64)
        .collect();
    let lines = sample_lines(chart, samples)?;
    let mut all = Vec::new();
    let mut kinks = Vec::new();
    let mut boundary_mismatch = 0.0f64;

    for (li, line) in lines.iter().enumerate() {
        let total = line.total_length();
        let split = field.hole().split(total);

        // exactly on the hole boundary
        let yb = line.point_at(split.s0);
        if !chart.is_black(&yb) {
            boundary_mismatch = boundary_mismatch.max(max_diff(&field.evaluate(&yb)?, field.k0()));
        }

        let mut crossings = vec![(Seam::HoleBoundary, split.s0)];
        for (k, a) in line.offsets().into_iter().enumerate().skip(1) {
            if line.segments[k].length > 0.0 && a > BASE_OFFSET && a + BASE_OFFSET < total {
                crossings.push((Seam::Gate, a));
            }
        }
        for (seam, arc) in crossings {
            let mut d = Vec::with_capacity(LEVELS);
            let mut di = Vec::with_capacity(LEVELS);
            let mut slopes = (0.0, 0.0);
            let centre = field.trace(&line.point_at(arc))?;
            for (lvl, &h) in offsets.iter().enumerate() {
                let lo = field.trace(&line.point_at(arc - h))?;
                let hi = field.trace(&line.point_at(arc + h))?;
                d.push(max_diff(&lo.value, &hi.value));
                di.push(max_diff(
                    &field.input().evaluate(&lo.preimage)?,
                    &field.input().evaluate(&hi.preimage)?,
                ));
                if lvl == 0 {
                    slopes = (
                        max_diff(&centre.value, &lo.value) / h,
                        max_diff(&hi.value, &centre.value) / h,
                    );
                }
            }
            let slope_jump = (slopes.1 - slopes.0).abs();
            if slope_jump > KINK_TOL {
                kinks.push(Kink {
                    seam,
                    line: li,
                    arc,
                    slope_jump,
                });
            }
            all.push(sample(seam, li, arc, line.point_at(arc), &d, &di));
        }

        // approaching the endpoint on the spine
        let z = line.endpoint();
        let kz = field.evaluate(z)?;
        let kz_in = field.input().evaluate(z)?;
        let mut d = Vec::with_capacity(LEVELS);
        let mut di = Vec::with_capacity(LEVELS);
        for &h in &offsets {
            let t = field.trace(&line.point_at(total - h))?;
            d.push(max_diff(&t.value, &kz));
            di.push(max_diff(&field.input().evaluate(&t.preimage)?, &kz_in));
        }
        all.push(sample(Seam::SpineLimit, li, total, z.clone(), &d, &di));
    }

    let seams = [Seam::HoleBoundary, Seam::SpineLimit, Seam::Gate]
        .into_iter()
        .map(|seam| {
            let of: Vec<&SeamSample> = all.iter().filter(|s| s.seam == seam).collect();
            SeamSummary {
                seam,
                count: of.len(),
                max_raw_jump: of.iter().map(|s| s.raw_jump).fold(0.0, f64::max),
                max_limit_jump: of.iter().map(|s| s.limit_jump).fold(0.0, f64::max),
            }
        })
        .collect();
    Ok(ContinuityReport {
        lines: lines.len(),
        epsilon: field.hole().epsilon,
        epsilon_max: field.hole().epsilon_max,
        offsets,
        boundary_mismatch,
        seams,
        faults: all
            .into_iter()
            .filter(|s| s.attribution.is_some())
            .collect(),
        kinks,
        distance_proxy: "remaining arc length along the broken line",
    })
}

/// One evaluation of `K̄` along a sampled broken line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeformRow {
    pub line: usize,
    pub s_y: f64,
    pub case: DeformCase,
    pub components: Vec<f64>,
}

/// `K̄` at `per_line + 1` equally spaced arc lengths (from `c₀` to the
/// spine endpoint) on each of the lines used by [`continuity_report`].
pub fn deformation_rows(
    field: &DeformedField,
    samples: usize,
    per_line: usize,
) -> Result<Vec<DeformRow>, FieldError> {
    let per_line = per_line.max(1);
    let lines = sample_lines(field.chart(), samples)?;
    let mut out = Vec::with_capacity(lines.len() * (per_line + 1));
    for (li, line) in lines.iter().enumerate() {
        let total = line.total_length();
        for j in 0..=per_line {
            let s_y = if j == per_line {
                total
            } else {
                total * j as f64 / per_line as f64
            };
            let y = line.point_at(s_y);
            let t = field.trace(&y)?;
            out.push(DeformRow {
                line: li,
                s_y,
                case: t.case,
                components: t.value,
            });
        }
    }
    Ok(out)
}

fn sample(
    seam: Seam,
    line: usize,
    arc: f64,
    location: PointRef,
    d: &[f64],
    di: &[f64],
) -> SeamSample {
    let limit_jump = richardson(d);
    let input_jump = richardson(di);
    let attribution = (limit_jump > SEAM_TOL).then_some(if input_jump >= 0.5 * limit_jump {
        Attribution::Input
    } else {
        Attribution::Deformation
    });
    SeamSample {
        seam,
        line,
        arc,
        location,
        raw_jump: d[0],
        limit_jump,
        input_jump,
        attribution,
    }
}
