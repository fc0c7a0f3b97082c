//! Plain-text matrix dumps.
//!
//! ```text
//! dims: 2 2
//! 0 0 3.7500000000000000e-1 0.0000000000000000e0
//! 0 1 0.0000000000000000e0 0.0000000000000000e0
//! ...
//! ```
//!
//! One line per entry (zeros included), `row col re im`, 0-based indices,
//! 17 significant digits so every `f64` round-trips exactly. The parser
//! also accepts sparse files: entries that are not listed are zero.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::TensorOperator;

pub fn write_matrix(op: &TensorOperator) -> String {
    let n = op.side();
    let mut out = String::with_capacity(64 * n * n + 32);
    out.push_str("dims:");
    for d in op.dims() {
        write!(out, " {d}").unwrap();
    }
    out.push('\n');
    for r in 0..n {
        for c in 0..n {
            let z = op.get(r, c);
            writeln!(out, "{r} {c} {:.16e} {:.16e}", z.re, z.im).unwrap();
        }
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<TensorOperator> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line_no, header) = lines.next().ok_or_else(|| Error::Parse {
        line: 1,
        message: "missing `dims:` header".into(),
    })?;
    let dims_text = header.strip_prefix("dims:").ok_or_else(|| Error::Parse {
        line: line_no,
        message: format!("expected `dims:` header, found {header:?}"),
    })?;
    let dims = dims_text
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Error::Parse {
            line: line_no,
            message: format!("bad dimension: {e}"),
        })?;
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::Parse {
            line: line_no,
            message: format!("dims must be positive integers, got {dims:?}"),
        });
    }
    let side: usize = dims.iter().product();
    let mut data = vec![Complex64::new(0.0, 0.0); side * side];
    let mut seen = vec![false; side * side];

    for (line, text) in lines {
        let err = |message: String| Error::Parse { line, message };
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(err(format!(
                "expected `row col re im`, found {} field(s)",
                fields.len()
            )));
        }
        let row: usize = fields[0]
            .parse()
            .map_err(|e| err(format!("bad row: {e}")))?;
        let col: usize = fields[1]
            .parse()
            .map_err(|e| err(format!("bad col: {e}")))?;
        let re: f64 = fields[2]
            .parse()
            .map_err(|e| err(format!("bad real part: {e}")))?;
        let im: f64 = fields[3]
            .parse()
            .map_err(|e| err(format!("bad imaginary part: {e}")))?;
        if row >= side || col >= side {
            return Err(err(format!(
                "index ({row}, {col}) outside a {side}x{side} matrix"
            )));
        }
        if !re.is_finite() || !im.is_finite() {
            return Err(err("non-finite entry".into()));
        }
        let k = row * side + col;
        if seen[k] {
            return Err(err(format!("duplicate entry ({row}, {col})")));
        }
        seen[k] = true;
        data[k] = Complex64::new(re, im);
    }
    TensorOperator::new(dims, data)
}
