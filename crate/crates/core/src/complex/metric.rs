use thiserror::Error;

use super::SimplicialComplex;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("expected {expected} edge lengths, got {found}")]
    WrongCount { expected: usize, found: usize },
    #[error("edge {edge:?} has non-positive or non-finite length {length}")]
    NonPositive { edge: Vec<usize>, length: f64 },
    #[error("triangle {triangle:?} violates the strict triangle inequality")]
    TriangleInequality { triangle: Vec<usize> },
}

/// Piecewise-linear metric: one positive length per edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    lengths: Vec<f64>,
}

impl Metric {
    /// Explicit edge lengths indexed by 1-face id.
    pub fn new(c: &SimplicialComplex, lengths: Vec<f64>) -> Result<Self, MetricError> {
        let expected = c.num_faces(1);
        if lengths.len() != expected {
            return Err(MetricError::WrongCount {
                expected,
                found: lengths.len(),
            });
        }
        for (e, &l) in lengths.iter().enumerate() {
            if !(l.is_finite() && l > 0.0) {
                return Err(MetricError::NonPositive {
                    edge: c.face(1, e).to_vec(),
                    length: l,
                });
            }
        }
        let metric = Metric { lengths };
        if c.dim() >= 2 {
            for tri in c.faces(2) {
                let a = metric.between(c, tri[0], tri[1]);
                let b = metric.between(c, tri[0], tri[2]);
                let d = metric.between(c, tri[1], tri[2]);
                if a + b <= d || a + d <= b || b + d <= a {
                    return Err(MetricError::TriangleInequality {
                        triangle: tri.clone(),
                    });
                }
            }
        }
        Ok(metric)
    }

    /// Euclidean lengths when the complex carries coordinates, unit lengths otherwise.
    pub fn from_complex(c: &SimplicialComplex) -> Result<Self, MetricError> {
        let lengths = match c.coords() {
            Some(coords) => c
                .faces(1)
                .iter()
                .map(|e| {
                    coords[e[0]]
                        .iter()
                        .zip(&coords[e[1]])
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        .sqrt()
                })
                .collect(),
            None => vec![1.0; c.num_faces(1)],
        };
        Metric::new(c, lengths)
    }

    /// Every edge of length one.
    pub fn unit(c: &SimplicialComplex) -> Self {
        Metric {
            lengths: vec![1.0; c.num_faces(1)],
        }
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn length(&self, edge: usize) -> f64 {
        self.lengths[edge]
    }

    /// Length of the edge joining vertices `u` and `v` (zero when `u == v`).
    ///
    /// Panics if `{u, v}` is not an edge of `c`.
    pub fn between(&self, c: &SimplicialComplex, u: usize, v: usize) -> f64 {
        if u == v {
            return 0.0;
        }
        let key = if u < v { [u, v] } else { [v, u] };
        let id = c
            .face_id(&key)
            .unwrap_or_else(|| panic!("{{{u}, {v}}} is not an edge"));
        self.lengths[id]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclidean_and_unit_defaults() {
        let c = SimplicialComplex::new(
            1,
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
            Some(vec![vec![0.0, 0.0], vec![3.0, 0.0], vec![0.0, 4.0]]),
        )
        .unwrap();
        let m = Metric::from_complex(&c).unwrap();
        assert_eq!(m.between(&c, 0, 1), 3.0);
        assert_eq!(m.between(&c, 2, 1), 5.0);
        let bare =
            SimplicialComplex::new(1, vec![vec![0, 1], vec![1, 2], vec![0, 2]], None).unwrap();
        assert_eq!(
            Metric::from_complex(&bare).unwrap().lengths(),
            &[1.0, 1.0, 1.0]
        );
    }

    #[test]
    fn rejects_degenerate_triangles() {
        let c = SimplicialComplex::new(2, vec![vec![0, 1, 2]], None).unwrap();
        assert!(matches!(
            Metric::new(&c, vec![1.0, 1.0, 2.0]),
            Err(MetricError::TriangleInequality { .. })
        ));
        assert!(matches!(
            Metric::new(&c, vec![1.0, 0.0, 1.0]),
            Err(MetricError::NonPositive { .. })
        ));
        assert!(matches!(
            Metric::new(&c, vec![1.0]),
            Err(MetricError::WrongCount { .. })
        ));
        assert!(Metric::new(&c, vec![1.0, 1.0, 1.5]).is_ok());
    }
}
