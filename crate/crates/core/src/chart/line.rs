use serde::Serialize;

use crate::complex::SimplicialComplex;

use super::PointRef;

/// A straight piece of a broken line inside one top simplex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Segment {
    pub top: usize,
    pub start: PointRef,
    pub end: PointRef,
    pub length: f64,
}

/// Segments in order from the root barycenter to the endpoint on the spine.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BrokenLine {
    pub segments: Vec<Segment>,
}

impl BrokenLine {
    pub fn start(&self) -> &PointRef {
        &self.segments[0].start
    }

    pub fn endpoint(&self) -> &PointRef {
        &self.segments.last().expect("broken line has a segment").end
    }

    pub fn total_length(&self) -> f64 {
        self.segments.iter().map(|s| s.length).sum()
    }

    /// Arc length at which each segment begins.
    pub fn offsets(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.segments
            .iter()
            .map(|s| {
                let a = acc;
                acc += s.length;
                a
            })
            .collect()
    }

    /// The point at arc length `arc` from the start, clamped to the line.
    /// On a junction the earlier segment wins.
    pub fn point_at(&self, arc: f64) -> PointRef {
        if arc <= 0.0 {
            return self.start().clone();
        }
        let mut acc = 0.0;
        for seg in &self.segments {
            if seg.length > 0.0 && arc <= acc + seg.length {
                let f = ((arc - acc) / seg.length).clamp(0.0, 1.0);
                return PointRef::lerp(&seg.start, &seg.end, f);
            }
            acc += seg.length;
        }
        self.endpoint().clone()
    }

    /// Largest barycentric disagreement between the end of one segment and
    /// the start of the next.
    pub fn junction_mismatch(&self, c: &SimplicialComplex) -> f64 {
        self.segments
            .windows(2)
            .map(|w| w[0].end.bary_distance(c, &w[1].start))
            .fold(0.0, f64::max)
    }
}
