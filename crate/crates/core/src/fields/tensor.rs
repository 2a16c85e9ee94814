use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::chart::PointRef;
use crate::complex::SimplicialComplex;

use super::{FieldError, FrameField};

type Components = dyn Fn(&PointRef) -> Result<Vec<f64>, FieldError> + Send + Sync;

/// Anything that yields tensor components at a point.
pub trait Evaluate {
    fn evaluate(&self, p: &PointRef) -> Result<Vec<f64>, FieldError>;
}

/// A tensor field of type `(r, s)` given by its frame components.
///
/// Components are stored row-major with the `r` upper indices first, so
/// there are `n^(r+s)` of them.
#[derive(Clone)]
pub struct TensorField {
    r: usize,
    s: usize,
    n: usize,
    eval: Arc<Components>,
    frame: Option<Arc<FrameField>>,
}

impl fmt::Debug for TensorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TensorField")
            .field("r", &self.r)
            .field("s", &self.s)
            .field("n", &self.n)
            .finish_non_exhaustive()
    }
}

pub fn component_count(n: usize, r: usize, s: usize) -> usize {
    n.pow((r + s) as u32)
}

impl TensorField {
    pub fn from_fn<F>(n: usize, r: usize, s: usize, f: F) -> Self
    where
        F: Fn(&PointRef) -> Result<Vec<f64>, FieldError> + Send + Sync + 'static,
    {
        TensorField {
            r,
            s,
            n,
            eval: Arc::new(f),
            frame: None,
        }
    }

    /// Components `offset + Σ_a x_a · coefficients[a]` in the ambient
    /// coordinates `x` of the point.
    pub fn linear(
        c: &SimplicialComplex,
        r: usize,
        s: usize,
        offset: Vec<f64>,
        coefficients: Vec<Vec<f64>>,
    ) -> Result<Self, FieldError> {
        let d = c.ambient_dim().ok_or(FieldError::NoCoordinates)?;
        let count = component_count(c.dim(), r, s);
        if offset.len() != count {
            return Err(FieldError::SizeMismatch {
                expected: count,
                got: offset.len(),
            });
        }
        if coefficients.len() != d {
            return Err(FieldError::SizeMismatch {
                expected: d,
                got: coefficients.len(),
            });
        }
        if let Some(row) = coefficients.iter().find(|row| row.len() != count) {
            return Err(FieldError::SizeMismatch {
                expected: count,
                got: row.len(),
            });
        }
        let c = Arc::new(c.clone());
        Ok(TensorField::from_fn(c.dim(), r, s, move |p| {
            let x = p
                .ambient(&c)
                .ok_or_else(|| FieldError::Evaluation(format!("bad point {p:?}")))?;
            let mut out = offset.clone();
            for (xa, row) in x.iter().zip(&coefficients) {
                for (o, k) in out.iter_mut().zip(row) {
                    *o += xa * k;
                }
            }
            Ok(out)
        }))
    }

    pub fn with_frame(mut self, frame: Arc<FrameField>) -> Self {
        self.frame = Some(frame);
        self
    }

    pub fn frame(&self) -> Option<&Arc<FrameField>> {
        self.frame.as_ref()
    }

    pub fn rank(&self) -> (usize, usize) {
        (self.r, self.s)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn component_count(&self) -> usize {
        component_count(self.n, self.r, self.s)
    }

    /// Components in the affine basis `e_j` of the point's simplex.
    pub fn affine_components(&self, p: &PointRef) -> Result<Vec<f64>, FieldError> {
        let frame = self.frame.as_ref().ok_or(FieldError::NoFrame)?;
        let k = self.evaluate(p)?;
        Ok(to_affine(frame.matrix(p.top), self.r, self.s, &k))
    }
}

impl Evaluate for TensorField {
    fn evaluate(&self, p: &PointRef) -> Result<Vec<f64>, FieldError> {
        let k = (self.eval)(p)?;
        let count = self.component_count();
        if k.len() != count {
            return Err(FieldError::SizeMismatch {
                expected: count,
                got: k.len(),
            });
        }
        if let Some(x) = k.iter().find(|x| !x.is_finite()) {
            return Err(FieldError::Evaluation(format!(
                "non-finite component {x} at {p:?}"
            )));
        }
        Ok(k)
    }
}

/// The field `K⁰` whose frame components are `components` everywhere.
pub fn constant_tensor(
    components: Vec<f64>,
    frame: Arc<FrameField>,
    r: usize,
    s: usize,
) -> Result<TensorField, FieldError> {
    let n = frame.dim();
    let count = component_count(n, r, s);
    if components.len() != count {
        return Err(FieldError::SizeMismatch {
            expected: count,
            got: components.len(),
        });
    }
    Ok(TensorField::from_fn(n, r, s, move |_| Ok(components.clone())).with_frame(frame))
}

/// Re-expresses frame components in the affine basis: upper indices map by
/// `Mᵀ`, lower indices by `M⁻¹`.
pub fn to_affine(m: &DMatrix<f64>, r: usize, s: usize, k: &[f64]) -> Vec<f64> {
    let n = m.nrows();
    let upper = m.transpose();
    let lower = m
        .clone()
        .try_inverse()
        .expect("frame matrices are invertible");
    let mut out = k.to_vec();
    for axis in 0..r + s {
        let a = if axis < r { &upper } else { &lower };
        out = apply_on_axis(a, n, r + s, axis, &out);
    }
    out
}

/// Contracts `a` with index `axis` of a row-major tensor with `order`
/// indices of size `n`.
fn apply_on_axis(a: &DMatrix<f64>, n: usize, order: usize, axis: usize, t: &[f64]) -> Vec<f64> {
    let stride = n.pow((order - axis - 1) as u32);
    let mut out = vec![0.0; t.len()];
    for (idx, o) in out.iter_mut().enumerate() {
        let i = (idx / stride) % n;
        let base = idx - i * stride;
        *o = (0..n).map(|j| a[(i, j)] * t[base + j * stride]).sum();
    }
    out
}
