//! The `.fld` field description format.
//!
//! ```text
//! # comment
//! type r s
//! constant
//! k_1 ... k_N                 (N = n^(r+s) floats, any line breaks)
//! ```
//!
//! or
//!
//! ```text
//! type r s
//! linear
//! offset row (N floats)
//! one row of N floats per ambient coordinate
//! ```

use std::path::Path;
use std::sync::Arc;

use crate::complex::SimplicialComplex;

use super::{component_count, constant_tensor, FieldError, FrameField, TensorField};

#[derive(Debug, Clone, PartialEq)]
pub enum FieldSpec {
    Constant {
        r: usize,
        s: usize,
        values: Vec<f64>,
    },
    Linear {
        r: usize,
        s: usize,
        rows: Vec<Vec<f64>>,
    },
}

fn parse_err(line: usize, message: impl Into<String>) -> FieldError {
    FieldError::Parse {
        line,
        message: message.into(),
    }
}

impl FieldSpec {
    pub fn read(path: impl AsRef<Path>) -> Result<Self, FieldError> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| FieldError::Io(format!("{}: {e}", path.as_ref().display())))?;
        FieldSpec::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, FieldError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (no, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "missing `type r s`"))?;
        let (r, s) = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["type", r, s] => (
                r.parse()
                    .map_err(|e| parse_err(no, format!("bad r: {e}")))?,
                s.parse()
                    .map_err(|e| parse_err(no, format!("bad s: {e}")))?,
            ),
            _ => return Err(parse_err(no, "expected `type r s`")),
        };
        let (no, kind) = lines
            .next()
            .ok_or_else(|| parse_err(no + 1, "missing `constant` or `linear`"))?;
        let mut rows = Vec::new();
        for (no, l) in lines {
            let row = l
                .split_whitespace()
                .map(str::parse::<f64>)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| parse_err(no, format!("bad number: {e}")))?;
            if let Some(x) = row.iter().find(|x| !x.is_finite()) {
                return Err(parse_err(no, format!("non-finite value {x}")));
            }
            rows.push(row);
        }
        match kind {
            "constant" => Ok(FieldSpec::Constant {
                r,
                s,
                values: rows.concat(),
            }),
            "linear" => Ok(FieldSpec::Linear { r, s, rows }),
            other => Err(parse_err(no, format!("unknown field kind `{other}`"))),
        }
    }

    pub fn rank(&self) -> (usize, usize) {
        match self {
            FieldSpec::Constant { r, s, .. } | FieldSpec::Linear { r, s, .. } => (*r, *s),
        }
    }

    /// Builds the field on `c`, with `frame` as its evaluation basis.
    pub fn build(
        &self,
        c: &SimplicialComplex,
        frame: Arc<FrameField>,
    ) -> Result<TensorField, FieldError> {
        match self {
            FieldSpec::Constant { r, s, values } => constant_tensor(values.clone(), frame, *r, *s),
            FieldSpec::Linear { r, s, rows } => {
                let count = component_count(c.dim(), *r, *s);
                let (offset, coefficients) =
                    rows.split_first().ok_or(FieldError::SizeMismatch {
                        expected: count,
                        got: 0,
                    })?;
                Ok(
                    TensorField::linear(c, *r, *s, offset.clone(), coefficients.to_vec())?
                        .with_frame(frame),
                )
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_kinds() {
        let c = FieldSpec::parse("# scalar\ntype 0 0\nconstant\n7\n").unwrap();
        assert_eq!(
            c,
            FieldSpec::Constant {
                r: 0,
                s: 0,
                values: vec![7.0]
            }
        );
        let l = FieldSpec::parse("type 1 0\nlinear\n0 0\n1 0\n0 1\n0.5 0.5\n").unwrap();
        let FieldSpec::Linear { rows, .. } = l else {
            panic!()
        };
        assert_eq!(rows.len(), 4);
    }

    #[test]
    fn reports_errors_with_lines() {
        assert!(matches!(
            FieldSpec::parse("tipe 0 0\n"),
            Err(FieldError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            FieldSpec::parse("type 0 0\nquadratic\n1\n"),
            Err(FieldError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            FieldSpec::parse("type 0 0\nconstant\nx\n"),
            Err(FieldError::Parse { line: 3, .. })
        ));
    }
}
