//! Plain-text matrix dump.
//!
//! ```text
//! 2 2
//! 1.0000000000000000e0+0.0000000000000000e0i 0.0000000000000000e0-1.0000000000000000e0i
//! 0.0000000000000000e0+1.0000000000000000e0i 1.0000000000000000e0+0.0000000000000000e0i
//! ```
//!
//! First line `rows cols`, then one row per line with entries `re+imi` (or
//! `re-imi`) separated by single spaces, 17 significant digits each.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::matrix::DenseMatrix;
use crate::error::{Error, Result};

/// Upper bound on `rows * cols` accepted by the parser.
pub const MAX_TEXT_ENTRIES: usize = 1 << 22;

fn push_entry(out: &mut String, z: Complex64) {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    write!(out, "{:.16e}{}{:.16e}i", z.re, sign, z.im.abs()).expect("write to String");
}

pub fn format_matrix(m: &DenseMatrix) -> String {
    let mut out = String::with_capacity(m.rows() * m.cols() * 48 + 16);
    writeln!(out, "{} {}", m.rows(), m.cols()).expect("write to String");
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if j > 0 {
                out.push(' ');
            }
            push_entry(&mut out, m[(i, j)]);
        }
        out.push('\n');
    }
    out
}

fn parse_real(s: &str, line: usize) -> Result<f64> {
    let v: f64 = s
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid number `{s}`")))?;
    if !v.is_finite() {
        return Err(Error::parse(line, format!("non-finite number `{s}`")));
    }
    Ok(v)
}

/// Parses one `re+imi` token.
pub fn parse_complex(token: &str, line: usize) -> Result<Complex64> {
    let body = token
        .strip_suffix('i')
        .ok_or_else(|| Error::parse(line, format!("entry `{token}` must end in `i`")))?;
    let bytes = body.as_bytes();
    // the imaginary part starts at the last sign that is neither leading nor an exponent sign
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'))
        .ok_or_else(|| Error::parse(line, format!("entry `{token}` has no imaginary part")))?;
    let re = parse_real(&body[..split], line)?;
    let im = parse_real(&body[split..], line)?;
    Ok(Complex64::new(re, im))
}

pub fn parse_matrix(text: &str) -> Result<DenseMatrix> {
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l));
    let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let dims: Vec<&str> = header.split(' ').collect();
    if dims.len() != 2 {
        return Err(Error::parse(1, "header must be `rows cols`"));
    }
    let parse_dim = |s: &str| -> Result<usize> {
        s.parse::<usize>()
            .ok()
            .filter(|&v| v > 0)
            .ok_or_else(|| Error::parse(1, format!("invalid dimension `{s}`")))
    };
    let rows = parse_dim(dims[0])?;
    let cols = parse_dim(dims[1])?;
    match rows.checked_mul(cols) {
        Some(total) if total <= MAX_TEXT_ENTRIES => {}
        _ => {
            return Err(Error::parse(
                1,
                format!("{rows}x{cols} exceeds the size limit"),
            ))
        }
    }

    let mut data = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let (lineno, line) = lines
            .next()
            .ok_or_else(|| Error::parse(r + 2, format!("expected {rows} rows, found {r}")))?;
        let mut count = 0;
        for token in line.split(' ') {
            if count == cols {
                return Err(Error::parse(lineno, format!("more than {cols} entries")));
            }
            data.push(parse_complex(token, lineno)?);
            count += 1;
        }
        if count != cols {
            return Err(Error::parse(
                lineno,
                format!("expected {cols} entries, found {count}"),
            ));
        }
    }
    for (lineno, line) in lines {
        if !line.is_empty() {
            return Err(Error::parse(lineno, "trailing content after last row"));
        }
    }
    DenseMatrix::new(rows, cols, data)
}
