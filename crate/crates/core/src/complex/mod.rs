//! Pure simplicial complexes given by their top simplices.
//!
//! A complex of dimension `n` is stored as its list of top simplices (sorted
//! vertex tuples, in input order) together with the derived face lattice
//! `F_0, ..., F_n`. Lower faces receive ids in lexicographic order of their
//! sorted vertex tuples, so ids are reproducible across runs; top simplices
//! keep their input order as ids.

mod dual;
mod metric;
pub mod tri;
mod validate;

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

pub use dual::{DualEdge, DualGraph};
pub use metric::{Metric, MetricError};
pub use validate::{validate_closed_manifold, LinkViolation, RidgeViolation, ValidationReport};

/// Errors raised while building a complex from raw data.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComplexError {
    #[error("complex has no top simplices")]
    Empty,
    #[error("top simplex {top} has {found} vertices, expected {expected}")]
    WrongArity {
        top: usize,
        expected: usize,
        found: usize,
    },
    #[error("top simplex {top} repeats vertex {vertex}")]
    RepeatedVertex { top: usize, vertex: usize },
    #[error("top simplices {first} and {second} span the same vertices {vertices:?}")]
    DuplicateTop {
        first: usize,
        second: usize,
        vertices: Vec<usize>,
    },
    #[error("top simplex {top} uses vertex {vertex} but only {count} vertices exist")]
    VertexOutOfRange {
        top: usize,
        vertex: usize,
        count: usize,
    },
    #[error("vertex {0} is not used by any top simplex")]
    UnusedVertex(usize),
    #[error("vertex {vertex} has {found} coordinates, expected {expected}")]
    CoordinateArity {
        vertex: usize,
        expected: usize,
        found: usize,
    },
    #[error("ambient dimension {ambient} is smaller than the complex dimension {dim}")]
    AmbientTooSmall { ambient: usize, dim: usize },
    #[error("vertex {0} has a non-finite coordinate")]
    NonFiniteCoordinate(usize),
    #[error(
        "removing top simplex {top} would leave a complex that is not pure of dimension {dim}"
    )]
    NotPure { top: usize, dim: usize },
}

/// A pure simplicial complex with its face lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplicialComplex {
    dim: usize,
    num_vertices: usize,
    coords: Option<Vec<Vec<f64>>>,
    /// `faces[k]` lists the k-faces; `faces[dim]` are the tops in input order.
    faces: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
    /// For each top, the ridge ids opposite each local vertex.
    top_ridges: Vec<Vec<usize>>,
    /// For each ridge, the tops containing it.
    ridge_cofacets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Builds a complex of dimension `dim` from its top simplices.
    ///
    /// Vertex tuples are sorted on entry. The vertex count is the number of
    /// coordinate rows when coordinates are given, and `max index + 1`
    /// otherwise; every vertex must be used.
    pub fn new(
        dim: usize,
        tops: Vec<Vec<usize>>,
        coords: Option<Vec<Vec<f64>>>,
    ) -> Result<Self, ComplexError> {
        if tops.is_empty() {
            return Err(ComplexError::Empty);
        }
        let mut sorted_tops = Vec::with_capacity(tops.len());
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        for (t, mut top) in tops.into_iter().enumerate() {
            if top.len() != dim + 1 {
                return Err(ComplexError::WrongArity {
                    top: t,
                    expected: dim + 1,
                    found: top.len(),
                });
            }
            top.sort_unstable();
            if let Some(w) = top.windows(2).find(|w| w[0] == w[1]) {
                return Err(ComplexError::RepeatedVertex {
                    top: t,
                    vertex: w[0],
                });
            }
            if let Some(&first) = seen.get(&top) {
                return Err(ComplexError::DuplicateTop {
                    first,
                    second: t,
                    vertices: top,
                });
            }
            seen.insert(top.clone(), t);
            sorted_tops.push(top);
        }

        let max_vertex = sorted_tops.iter().map(|t| t[dim]).max().unwrap_or(0);
        let num_vertices = match &coords {
            Some(rows) => rows.len(),
            None => max_vertex + 1,
        };
        if let Some((t, top)) = sorted_tops
            .iter()
            .enumerate()
            .find(|(_, top)| top[dim] >= num_vertices)
        {
            return Err(ComplexError::VertexOutOfRange {
                top: t,
                vertex: top[dim],
                count: num_vertices,
            });
        }
        let mut used = vec![false; num_vertices];
        for top in &sorted_tops {
            for &v in top {
                used[v] = true;
            }
        }
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(ComplexError::UnusedVertex(v));
        }
        if let Some(rows) = &coords {
            let ambient = rows[0].len();
            if ambient < dim {
                return Err(ComplexError::AmbientTooSmall { ambient, dim });
            }
            for (v, row) in rows.iter().enumerate() {
                if row.len() != ambient {
                    return Err(ComplexError::CoordinateArity {
                        vertex: v,
                        expected: ambient,
                        found: row.len(),
                    });
                }
                if row.iter().any(|x| !x.is_finite()) {
                    return Err(ComplexError::NonFiniteCoordinate(v));
                }
            }
        }

        let mut faces = Vec::with_capacity(dim + 1);
        let mut index = Vec::with_capacity(dim + 1);
        for k in 0..dim {
            let mut set = BTreeSet::new();
            for top in &sorted_tops {
                for_each_subset(top, k + 1, |s| {
                    set.insert(s.to_vec());
                });
            }
            let list: Vec<Vec<usize>> = set.into_iter().collect();
            index.push(
                list.iter()
                    .enumerate()
                    .map(|(i, f)| (f.clone(), i))
                    .collect::<HashMap<_, _>>(),
            );
            faces.push(list);
        }
        index.push(seen);
        faces.push(sorted_tops);

        let mut complex = SimplicialComplex {
            dim,
            num_vertices,
            coords,
            faces,
            index,
            top_ridges: Vec::new(),
            ridge_cofacets: Vec::new(),
        };
        if dim > 0 {
            let mut cofacets = vec![Vec::new(); complex.faces[dim - 1].len()];
            let mut top_ridges = Vec::with_capacity(complex.num_tops());
            for (t, top) in complex.faces[dim].iter().enumerate() {
                let ridges: Vec<usize> = (0..=dim)
                    .map(|i| complex.index[dim - 1][&omit(top, i)])
                    .collect();
                for &r in &ridges {
                    cofacets[r].push(t);
                }
                top_ridges.push(ridges);
            }
            complex.top_ridges = top_ridges;
            complex.ridge_cofacets = cofacets;
        }
        Ok(complex)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn coords(&self) -> Option<&[Vec<f64>]> {
        self.coords.as_deref()
    }

    /// Ambient dimension of the vertex coordinates, if any.
    pub fn ambient_dim(&self) -> Option<usize> {
        self.coords.as_ref().map(|c| c[0].len())
    }

    pub fn tops(&self) -> &[Vec<usize>] {
        &self.faces[self.dim]
    }

    pub fn num_tops(&self) -> usize {
        self.faces[self.dim].len()
    }

    pub fn top(&self, t: usize) -> &[usize] {
        &self.faces[self.dim][t]
    }

    /// The k-faces as sorted vertex tuples, indexed by face id.
    pub fn faces(&self, k: usize) -> &[Vec<usize>] {
        &self.faces[k]
    }

    pub fn num_faces(&self, k: usize) -> usize {
        self.faces.get(k).map_or(0, Vec::len)
    }

    pub fn face(&self, k: usize, id: usize) -> &[usize] {
        &self.faces[k][id]
    }

    /// Looks up the id of a face given as a sorted vertex tuple.
    pub fn face_id(&self, vertices: &[usize]) -> Option<usize> {
        let k = vertices.len().checked_sub(1)?;
        self.index.get(k)?.get(vertices).copied()
    }

    /// `(|F_0|, |F_1|, ..., |F_n|)`.
    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    /// Ridge ids of top `t`; entry `i` is the ridge opposite local vertex `i`.
    pub fn top_ridges(&self, t: usize) -> &[usize] {
        &self.top_ridges[t]
    }

    /// Tops containing ridge `r`.
    pub fn ridge_cofacets(&self, r: usize) -> &[usize] {
        &self.ridge_cofacets[r]
    }

    /// Alternating sum of the f-vector.
    pub fn euler_characteristic(&self) -> i64 {
        self.faces
            .iter()
            .enumerate()
            .map(|(k, f)| {
                if k % 2 == 0 {
                    f.len() as i64
                } else {
                    -(f.len() as i64)
                }
            })
            .sum()
    }

    /// Ambient position of a barycentric combination of the vertices of top `t`.
    pub fn ambient_point(&self, t: usize, bary: &[f64]) -> Option<Vec<f64>> {
        let coords = self.coords.as_ref()?;
        let mut out = vec![0.0; coords[0].len()];
        for (&v, &w) in self.top(t).iter().zip(bary) {
            for (o, x) in out.iter_mut().zip(&coords[v]) {
                *o += w * x;
            }
        }
        Some(out)
    }

    /// The complex with top simplex `t` removed; all faces of `t` must
    /// survive in the closure of the remaining tops.
    pub fn without_top(&self, t: usize) -> Result<SimplicialComplex, ComplexError> {
        if self.num_tops() <= 1 {
            return Err(ComplexError::Empty);
        }
        let tops: Vec<Vec<usize>> = self
            .tops()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != t)
            .map(|(_, s)| s.clone())
            .collect();
        let mut used = vec![false; self.num_vertices];
        for top in &tops {
            for &v in top {
                used[v] = true;
            }
        }
        if used.iter().any(|u| !u) {
            return Err(ComplexError::NotPure {
                top: t,
                dim: self.dim,
            });
        }
        let out = SimplicialComplex::new(self.dim, tops, self.coords.clone())?;
        if out.f_vector()[..self.dim] != self.f_vector()[..self.dim] {
            return Err(ComplexError::NotPure {
                top: t,
                dim: self.dim,
            });
        }
        Ok(out)
    }

    /// Same complex with vertex `v` renamed to `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<SimplicialComplex, ComplexError> {
        let tops = self
            .tops()
            .iter()
            .map(|t| t.iter().map(|&v| perm[v]).collect())
            .collect();
        let coords = self.coords.as_ref().map(|rows| {
            let mut out = rows.clone();
            for (v, row) in rows.iter().enumerate() {
                out[perm[v]] = row.clone();
            }
            out
        });
        SimplicialComplex::new(self.dim, tops, coords)
    }
}

/// Calls `f` with every `size`-element subset of the sorted tuple `set`, in
/// lexicographic order.
pub(crate) fn for_each_subset(set: &[usize], size: usize, mut f: impl FnMut(&[usize])) {
    fn rec(
        set: &[usize],
        size: usize,
        start: usize,
        buf: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize]),
    ) {
        if buf.len() == size {
            f(buf);
            return;
        }
        let need = size - buf.len();
        for i in start..=set.len() - need {
            buf.push(set[i]);
            rec(set, size, i + 1, buf, f);
            buf.pop();
        }
    }
    if size > set.len() {
        return;
    }
    let mut buf = Vec::with_capacity(size);
    rec(set, size, 0, &mut buf, &mut f);
}

/// `set` with the element at position `i` removed.
pub(crate) fn omit(set: &[usize], i: usize) -> Vec<usize> {
    set.iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &v)| v)
        .collect()
}
