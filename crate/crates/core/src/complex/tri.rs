//! The `.tri` text format.
//!
//! ```text
//! # comment
//! dim 2
//! coords 3          (optional, followed by one row of floats per vertex)
//! 0 0 1
//! ...
//! 0 1 2             (one top simplex per line)
//! ```

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use super::{ComplexError, SimplicialComplex};

#[derive(Debug, Error)]
pub enum TriError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

fn parse_err(line: usize, message: impl Into<String>) -> TriError {
    TriError::Parse {
        line,
        message: message.into(),
    }
}

pub fn read_tri(path: impl AsRef<Path>) -> Result<SimplicialComplex, TriError> {
    let text = std::fs::read_to_string(path)?;
    parse_tri(&text)
}

pub fn parse_tri(text: &str) -> Result<SimplicialComplex, TriError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .peekable();

    let (no, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing `dim` header"))?;
    let dim = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["dim", n] => n
            .parse::<usize>()
            .map_err(|e| parse_err(no, format!("bad dimension: {e}")))?,
        _ => return Err(parse_err(no, "expected `dim n`")),
    };

    let mut coords = None;
    if let Some(&(no, l)) = lines.peek() {
        if l.starts_with("coords") {
            lines.next();
            let d = match l.split_whitespace().collect::<Vec<_>>().as_slice() {
                ["coords", d] => d
                    .parse::<usize>()
                    .map_err(|e| parse_err(no, format!("bad coordinate dimension: {e}")))?,
                _ => return Err(parse_err(no, "expected `coords d`")),
            };
            coords = Some(d);
        }
    }

    let body: Vec<(usize, Vec<&str>)> = lines
        .map(|(no, l)| (no, l.split_whitespace().collect()))
        .collect();
    // Coordinate rows come first. When d != n+1 arity alone marks the end of
    // the block; otherwise the block length V is the one for which the
    // remaining rows are integer tuples whose largest index is V - 1.
    let split = match coords {
        None => 0,
        Some(d) if d != dim + 1 => body.iter().take_while(|(_, f)| f.len() == d).count(),
        Some(d) => {
            let max_tail = |v: usize| -> Option<usize> {
                let mut m = None;
                for (_, f) in &body[v..] {
                    for x in f {
                        let i = x.parse::<usize>().ok()?;
                        m = Some(m.map_or(i, |m: usize| m.max(i)));
                    }
                }
                m
            };
            let limit = body.iter().take_while(|(_, f)| f.len() == d).count();
            (1..=limit)
                .find(|&v| max_tail(v) == Some(v - 1))
                .unwrap_or(limit)
        }
    };
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut tops: Vec<Vec<usize>> = Vec::new();
    for (i, (no, fields)) in body.iter().enumerate() {
        let no = *no;
        if i < split {
            let row = fields
                .iter()
                .map(|f| f.parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| parse_err(no, format!("bad coordinate: {e}")))?;
            rows.push(row);
        } else {
            if fields.len() != dim + 1 {
                return Err(parse_err(
                    no,
                    format!(
                        "expected {} vertex indices, found {}",
                        dim + 1,
                        fields.len()
                    ),
                ));
            }
            let top = fields
                .iter()
                .map(|f| f.parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| parse_err(no, format!("bad vertex index: {e}")))?;
            tops.push(top);
        }
    }
    let coords = coords.map(|_| rows);
    Ok(SimplicialComplex::new(dim, tops, coords)?)
}

/// Serializes a complex; tops are written as sorted tuples in id order and
/// coordinates with the shortest round-trip float representation.
pub fn write_tri(c: &SimplicialComplex) -> String {
    let mut out = String::new();
    writeln!(out, "dim {}", c.dim()).unwrap();
    if let Some(rows) = c.coords() {
        writeln!(out, "coords {}", rows[0].len()).unwrap();
        for row in rows {
            let line: Vec<String> = row.iter().map(|x| format_float(*x)).collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
    }
    for top in c.tops() {
        let line: Vec<String> = top.iter().map(usize::to_string).collect();
        writeln!(out, "{}", line.join(" ")).unwrap();
    }
    out
}

/// Shortest round-trip representation that always reads back as a float.
fn format_float(x: f64) -> String {
    let s = format!("{x:?}");
    if s.contains(['.', 'e', 'E']) || s.contains("inf") || s.contains("NaN") {
        s
    } else {
        format!("{s}.0")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_coords() {
        let text =
            "# a triangle boundary\ndim 1\ncoords 2\n0 0\n1.0 0\n0 1.5\n0 1\n1 2 # last\n2 0\n";
        let c = parse_tri(text).unwrap();
        assert_eq!(c.dim(), 1);
        assert_eq!(c.num_tops(), 3);
        assert_eq!(c.coords().unwrap()[2], vec![0.0, 1.5]);
        assert_eq!(c.tops()[2], vec![0, 2]);
    }

    #[test]
    fn ambiguous_arity_resolved_by_vertex_count() {
        // d == n + 1 == 2 and the coordinates happen to be integers
        let text = "dim 1\ncoords 2\n0 0\n1 0\n0 1\n0 1\n1 2\n0 2\n";
        let c = parse_tri(text).unwrap();
        assert_eq!(c.num_vertices(), 3);
        assert_eq!(c.num_tops(), 3);
    }

    #[test]
    fn write_is_stable() {
        let text = "dim 2\ncoords 3\n0.0 0.0 0.0\n1.0 0.0 0.0\n0.0 1.0 0.0\n0.1 0.2 0.30000000000000004\n0 1 2\n0 1 3\n0 2 3\n1 2 3\n";
        let c = parse_tri(text).unwrap();
        let written = write_tri(&c);
        assert_eq!(written, text);
        assert_eq!(write_tri(&parse_tri(&written).unwrap()), written);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_tri("dim 2\n0 1 2\n0 1\n").unwrap_err();
        assert!(matches!(err, TriError::Parse { line: 3, .. }), "{err}");
        assert!(matches!(
            parse_tri("dimension 2\n"),
            Err(TriError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_tri("dim 1\n0 1\n0 1\n"),
            Err(TriError::Complex(_))
        ));
    }
}
