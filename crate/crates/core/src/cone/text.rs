//! Matrix text format.
//!
//! ```text
//! 3 complex
//! 2.0 1.0+0.5i 0.0
//! 1.0-0.5i 2.0 0.0
//! 0.0 0.0 1.0
//! ```
//!
//! Floats are written with the shortest representation that parses back to
//! the same bits, so printed values round-trip exactly. Blank lines and lines
//! starting with `#` are ignored.

use std::fmt::Write as _;

use nalgebra::{Complex, DMatrix};

use super::{ConeError, FieldTag};

/// A parsed matrix over whichever field its header names.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyMatrix {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex<f64>>),
}

impl AnyMatrix {
    pub fn field(&self) -> FieldTag {
        match self {
            AnyMatrix::Real(_) => FieldTag::Real,
            AnyMatrix::Complex(_) => FieldTag::Complex,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            AnyMatrix::Real(m) => m.nrows(),
            AnyMatrix::Complex(m) => m.nrows(),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            AnyMatrix::Real(m) => write_real(m),
            AnyMatrix::Complex(m) => write_complex(m),
        }
    }
}

fn float(x: f64) -> String {
    format!("{x:?}")
}

fn complex_entry(z: Complex<f64>) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", float(z.re), sign, float(z.im.abs()))
}

fn write_rows<T>(m: &DMatrix<T>, header: &str, entry: impl Fn(&T) -> String) -> String {
    let mut out = format!("{} {header}\n", m.nrows());
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|c| entry(&m[(r, c)])).collect();
        writeln!(out, "{}", row.join(" ")).expect("string write");
    }
    out
}

pub fn write_real(m: &DMatrix<f64>) -> String {
    write_rows(m, "real", |x| float(*x))
}

pub fn write_complex(m: &DMatrix<Complex<f64>>) -> String {
    write_rows(m, "complex", |z| complex_entry(*z))
}

fn parse_float(s: &str, line: usize) -> Result<f64, ConeError> {
    let v: f64 = s.parse().map_err(|_| ConeError::Parse { line, msg: format!("bad number \"{s}\"") })?;
    if !v.is_finite() {
        return Err(ConeError::Parse { line, msg: format!("non-finite value \"{s}\"") });
    }
    Ok(v)
}

/// Parses `a`, `a+bi`, `a-bi` or `bi`.
fn parse_complex(tok: &str, line: usize) -> Result<Complex<f64>, ConeError> {
    let Some(body) = tok.strip_suffix('i') else {
        return Ok(Complex::new(parse_float(tok, line)?, 0.0));
    };
    let bytes = body.as_bytes();
    // the split is the last sign that is neither leading nor part of an exponent
    let split = (1..bytes.len()).rev().find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re = parse_float(&body[..k], line)?;
            let im_text = &body[k..];
            let im = if im_text == "+" || im_text == "-" { parse_float(&format!("{im_text}1"), line)? } else { parse_float(im_text, line)? };
            Ok(Complex::new(re, im))
        }
        None => {
            let im = if body.is_empty() || body == "+" || body == "-" { parse_float(&format!("{body}1"), line)? } else { parse_float(body, line)? };
            Ok(Complex::new(0.0, im))
        }
    }
}

pub fn parse_matrix(text: &str) -> Result<AnyMatrix, ConeError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(ConeError::Parse { line: 0, msg: "empty input".into() })?;
    let mut parts = header.split_whitespace();
    let n: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| ConeError::Parse { line: hline, msg: format!("header must be \"n real|complex\", got \"{header}\"") })?;
    let field: FieldTag = parts
        .next()
        .ok_or_else(|| ConeError::Parse { line: hline, msg: "header is missing the field (real | complex)".into() })?
        .parse()
        .map_err(|msg| ConeError::Parse { line: hline, msg })?;
    if parts.next().is_some() {
        return Err(ConeError::Parse { line: hline, msg: "trailing tokens in header".into() });
    }
    if n == 0 {
        return Err(ConeError::Parse { line: hline, msg: "n must be positive".into() });
    }
    let mut entries: Vec<Complex<f64>> = Vec::with_capacity(n * n);
    let mut rows = 0;
    for (line, l) in lines {
        if rows == n {
            return Err(ConeError::Parse { line, msg: format!("more than {n} rows") });
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != n {
            return Err(ConeError::Parse { line, msg: format!("expected {n} entries, found {}", toks.len()) });
        }
        for t in toks {
            let z = match field {
                FieldTag::Real => Complex::new(parse_float(t, line)?, 0.0),
                FieldTag::Complex => parse_complex(t, line)?,
            };
            entries.push(z);
        }
        rows += 1;
    }
    if rows != n {
        return Err(ConeError::Parse { line: 0, msg: format!("expected {n} rows, found {rows}") });
    }
    Ok(match field {
        FieldTag::Real => AnyMatrix::Real(DMatrix::from_row_iterator(n, n, entries.iter().map(|z| z.re))),
        FieldTag::Complex => AnyMatrix::Complex(DMatrix::from_row_iterator(n, n, entries)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_tokens() {
        let cases = [
            ("1.5", Complex::new(1.5, 0.0)),
            ("1.0+2.0i", Complex::new(1.0, 2.0)),
            ("-1.0-2.0i", Complex::new(-1.0, -2.0)),
            ("1e-5-2.5e+3i", Complex::new(1e-5, -2.5e3)),
            ("-3i", Complex::new(0.0, -3.0)),
            ("i", Complex::new(0.0, 1.0)),
            ("2-i", Complex::new(2.0, -1.0)),
        ];
        for (t, z) in cases {
            assert_eq!(parse_complex(t, 1).unwrap(), z, "{t}");
        }
        assert!(parse_complex("1+2j", 1).is_err());
        assert!(parse_complex("nan", 1).is_err());
    }

    #[test]
    fn negative_zero_imaginary_round_trips() {
        let z = Complex::new(1.0, -0.0);
        let back = parse_complex(&complex_entry(z), 1).unwrap();
        assert!(back.im.is_sign_negative() && back.im == 0.0);
    }

    #[test]
    fn round_trip_bits() {
        let m = DMatrix::from_fn(3, 3, |r, c| Complex::new((r as f64 + 0.1).sqrt() / 7.0, -(c as f64) * 1e-17));
        let text = write_complex(&m);
        match parse_matrix(&text).unwrap() {
            AnyMatrix::Complex(back) => {
                for (a, b) in m.iter().zip(back.iter()) {
                    assert_eq!(a.re.to_bits(), b.re.to_bits());
                    assert_eq!(a.im.to_bits(), b.im.to_bits());
                }
            }
            AnyMatrix::Real(_) => panic!("wrong field"),
        }
    }

    #[test]
    fn errors_carry_lines() {
        assert!(matches!(parse_matrix("2 real\n1 0\n0"), Err(ConeError::Parse { line: 3, .. })));
        assert!(matches!(parse_matrix("2 quaternion\n"), Err(ConeError::Parse { line: 1, .. })));
        assert!(matches!(parse_matrix("2 real\n1 0\n"), Err(ConeError::Parse { .. })));
        assert!(matches!(parse_matrix("1 real\ninf\n"), Err(ConeError::Parse { .. })));
    }
}
