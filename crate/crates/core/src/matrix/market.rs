//! Matrix Market coordinate format, restricted to the Hermitian kinds.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use super::sparse::{SparseHermitianMatrix, Storage};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Complex,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Reads and validates a Matrix Market file.
pub fn load_matrix(path: impl AsRef<Path>) -> Result<SparseHermitianMatrix> {
    let text = std::fs::read_to_string(path)?;
    parse_matrix_market(&text)
}

/// Parses Matrix Market text. Accepted headers: `real symmetric`,
/// `complex hermitian` and `real general`.
pub fn parse_matrix_market(text: &str) -> Result<SparseHermitianMatrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));

    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_err(1, "missing %%MatrixMarket matrix header"));
    }
    if tokens[2] != "coordinate" {
        return Err(parse_err(1, format!("unsupported format '{}'", tokens[2])));
    }
    let (field, storage) = match (tokens[3].as_str(), tokens[4].as_str()) {
        ("real", "symmetric") => (Field::Real, Storage::Symmetric),
        ("complex", "hermitian") => (Field::Complex, Storage::Symmetric),
        ("real", "general") => (Field::Real, Storage::General),
        (f, s) => return Err(parse_err(1, format!("unsupported kind '{f} {s}'"))),
    };

    let mut body = lines.filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));
    let (size_line, size) = body.next().ok_or_else(|| parse_err(2, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(size_line, format!("bad integer '{t}'"))))
        .collect::<Result<_>>()?;
    if dims.len() != 3 {
        return Err(parse_err(size_line, "size line needs rows, cols, nnz"));
    }
    let (rows, cols, nnz) = (dims[0], dims[1], dims[2]);
    if rows != cols {
        return Err(Error::Dimension(format!("{rows}x{cols} is not square")));
    }

    let mut triplets = Vec::with_capacity(nnz);
    let mut seen = std::collections::HashSet::with_capacity(nnz);
    for (line, l) in body {
        if triplets.len() == nnz {
            return Err(parse_err(line, format!("more than the declared {nnz} entries")));
        }
        let t: Vec<&str> = l.split_whitespace().collect();
        let want = if field == Field::Real { 3 } else { 4 };
        if t.len() != want {
            return Err(parse_err(line, format!("expected {want} fields, found {}", t.len())));
        }
        let index = |s: &str| -> Result<usize> {
            let i: usize = s.parse().map_err(|_| parse_err(line, format!("bad index '{s}'")))?;
            if i == 0 || i > rows {
                return Err(Error::Dimension(format!("index {i} at line {line} outside 1..={rows}")));
            }
            Ok(i - 1)
        };
        let number = |s: &str| -> Result<f64> { s.parse().map_err(|_| parse_err(line, format!("bad number '{s}'"))) };
        let (r, c) = (index(t[0])?, index(t[1])?);
        let value = match field {
            Field::Real => Complex64::new(number(t[2])?, 0.0),
            Field::Complex => Complex64::new(number(t[2])?, number(t[3])?),
        };
        if !seen.insert((r, c)) {
            return Err(parse_err(line, format!("duplicate entry ({}, {})", r + 1, c + 1)));
        }
        triplets.push((r, c, value));
    }
    if triplets.len() != nnz {
        return Err(parse_err(text.lines().count(), format!("declared {nnz} entries, found {}", triplets.len())));
    }
    SparseHermitianMatrix::from_triplets(rows, triplets, storage)
}

/// Writes the lower triangle in `real symmetric` or `complex hermitian` form.
pub fn to_matrix_market(a: &SparseHermitianMatrix) -> String {
    let real = a.is_real();
    let lower: Vec<_> = a.entries().iter().filter(|e| e.row >= e.col).collect();
    let mut out = String::new();
    let kind = if real { "real symmetric" } else { "complex hermitian" };
    let _ = writeln!(out, "%%MatrixMarket matrix coordinate {kind}");
    let _ = writeln!(out, "{} {} {}", a.dim(), a.dim(), lower.len());
    for e in lower {
        if real {
            let _ = writeln!(out, "{} {} {}", e.row + 1, e.col + 1, e.value.re);
        } else {
            let _ = writeln!(out, "{} {} {} {}", e.row + 1, e.col + 1, e.value.re, e.value.im);
        }
    }
    out
}
