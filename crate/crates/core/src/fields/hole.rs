//! The hole `BH(ε)` in arc-length form.
//!
//! Distance to the spine is measured by the remaining arc length along a
//! point's broken line, so the part of a line inside the hole is always its
//! tail. The tail length is capped at a fixed fraction of the line so the
//! white part never vanishes.

use serde::Serialize;

use crate::chart::CellChart;

use super::FieldError;

/// Largest fraction of a broken line that may lie in the hole.
pub const TAIL_FRACTION_MAX: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HoleRegion {
    pub epsilon: f64,
    /// Minimum sampled broken-line length; `epsilon` must stay below it.
    pub epsilon_max: f64,
    pub tail_fraction_max: f64,
}

/// Split of one broken line into its white head and black tail.
///
/// `s1` is exactly `min(ε, τ_max · total)` and `s0` is `total - s1`
/// correctly rounded, so `s0 + s1` can differ from `total` by one ulp.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineSplit {
    pub s0: f64,
    pub s1: f64,
    pub total: f64,
}

impl HoleRegion {
    pub fn split(&self, total: f64) -> LineSplit {
        let s1 = self.epsilon.min(self.tail_fraction_max * total);
        LineSplit {
            s0: total - s1,
            s1,
            total,
        }
    }
}

pub fn black_hole_region(chart: &CellChart, epsilon: f64) -> Result<HoleRegion, FieldError> {
    let epsilon_max = admissible_epsilon(chart)?;
    if !(epsilon > 0.0) || epsilon >= epsilon_max {
        return Err(FieldError::Epsilon {
            epsilon,
            epsilon_max,
        });
    }
    Ok(HoleRegion {
        epsilon,
        epsilon_max,
        tail_fraction_max: TAIL_FRACTION_MAX,
    })
}

/// Minimum broken-line length over [`boundary_samples`].
pub fn admissible_epsilon(chart: &CellChart) -> Result<f64, FieldError> {
    let mut best = f64::INFINITY;
    for b in boundary_samples(chart) {
        let line = chart.line_from_boundary(&b)?;
        best = best.min(line.total_length());
    }
    Ok(best)
}

/// Deterministic grid on the boundary of the root: for each ridge, the
/// points whose barycentric coordinates on the ridge are positive multiples
/// of `1/N`, plus the ridge barycenter.
pub fn boundary_samples(chart: &CellChart) -> Vec<Vec<f64>> {
    let n = chart.complex().dim();
    let grid = match n {
        0..=2 => 24,
        3 => 12,
        _ => 6,
    };
    let mut out = Vec::new();
    for skip in 0..=n {
        let mut center = vec![1.0 / n as f64; n + 1];
        center[skip] = 0.0;
        out.push(center);
        compositions(grid, n, &mut |parts| {
            let mut b = Vec::with_capacity(n + 1);
            let mut it = parts.iter();
            for k in 0..=n {
                b.push(if k == skip {
                    0.0
                } else {
                    *it.next().expect("part") as f64 / grid as f64
                });
            }
            out.push(b);
        });
    }
    out
}

/// Calls `f` on every way to write `total` as `parts` positive integers.
fn compositions(total: usize, parts: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(left: usize, parts: usize, acc: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if parts == 1 {
            acc.push(left);
            f(acc);
            acc.pop();
            return;
        }
        for k in 1..left.saturating_sub(parts - 2) {
            acc.push(k);
            rec(left - k, parts - 1, acc, f);
            acc.pop();
        }
    }
    if parts > 0 && total >= parts {
        rec(total, parts, &mut Vec::new(), f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_counts() {
        let mut k = 0;
        compositions(6, 3, &mut |p| {
            assert_eq!(p.iter().sum::<usize>(), 6);
            assert!(p.iter().all(|&x| x > 0));
            k += 1;
        });
        // C(5, 2)
        assert_eq!(k, 10);
        let mut k = 0;
        compositions(24, 1, &mut |p| {
            assert_eq!(p, [24]);
            k += 1;
        });
        assert_eq!(k, 1);
    }

    #[test]
    fn split_keeps_a_white_head() {
        let h = HoleRegion {
            epsilon: 1.0,
            epsilon_max: 2.0,
            tail_fraction_max: TAIL_FRACTION_MAX,
        };
        let long = h.split(5.0);
        assert_eq!((long.s0, long.s1), (4.0, 1.0));
        let short = h.split(0.5);
        assert!(short.s0 > 0.0 && short.s1 > 0.0);
        for t in [0.1, 0.3, 1.7, 2.9, 1e3 / 7.0] {
            let sp = h.split(t);
            assert!((sp.s0 + sp.s1 - t).abs() <= f64::EPSILON * t);
        }
    }
}
