//! Plain-text row files.
//!
//! Exponent rows:
//!
//! ```text
//! # n=4 l=2
//! 1,0,0,0
//! ```
//!
//! Complex rows (used for duals, whose entries are not roots of unity) carry
//! `2n` decimals per line, real and imaginary parts interleaved:
//!
//! ```text
//! # n=2 complex
//! 0,0,1.4142135623730951,0
//! ```

use std::fmt::Write as _;

use num_complex::Complex64;
use thiserror::Error;

use crate::circulant::{ExponentRow, RowError};

#[derive(Debug, Error, PartialEq)]
pub enum FormatError {
    #[error("missing header line `# n=<n> l=<l>`")]
    MissingHeader,
    #[error("malformed header: {0}")]
    BadHeader(String),
    #[error("line {line}: {msg}")]
    BadLine { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Row { line: usize, source: RowError },
}

#[derive(Debug, Clone, PartialEq)]
pub enum RowFile {
    Exponent {
        n: usize,
        l: usize,
        rows: Vec<ExponentRow>,
    },
    Complex {
        n: usize,
        rows: Vec<Vec<Complex64>>,
    },
}

enum Header {
    Exponent { n: usize, l: usize },
    Complex { n: usize },
}

fn parse_header(line: &str) -> Result<Header, FormatError> {
    let bad = || FormatError::BadHeader(line.to_string());
    let body = line.strip_prefix('#').ok_or_else(bad)?;
    let mut n = None;
    let mut l = None;
    let mut complex = false;
    for tok in body.split_whitespace() {
        if let Some(v) = tok.strip_prefix("n=") {
            n = Some(v.parse::<usize>().map_err(|_| bad())?);
        } else if let Some(v) = tok.strip_prefix("l=") {
            l = Some(v.parse::<usize>().map_err(|_| bad())?);
        } else if tok == "complex" {
            complex = true;
        } else {
            return Err(bad());
        }
    }
    let n = n.filter(|&n| n > 0).ok_or_else(bad)?;
    match (complex, l) {
        (false, Some(l)) if l > 0 => Ok(Header::Exponent { n, l }),
        (true, None) => Ok(Header::Complex { n }),
        _ => Err(bad()),
    }
}

pub fn parse(text: &str) -> Result<RowFile, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, s)| (i + 1, s.trim()))
        .filter(|(_, s)| !s.is_empty());
    let (_, first) = lines.next().ok_or(FormatError::MissingHeader)?;
    if !first.starts_with('#') {
        return Err(FormatError::MissingHeader);
    }
    match parse_header(first)? {
        Header::Exponent { n, l } => {
            let mut rows = Vec::new();
            for (line, s) in lines {
                let vals: Vec<usize> = s
                    .split(',')
                    .map(|t| t.trim().parse::<usize>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| FormatError::BadLine {
                        line,
                        msg: e.to_string(),
                    })?;
                if vals.len() != n {
                    return Err(FormatError::BadLine {
                        line,
                        msg: format!("expected {n} exponents, got {}", vals.len()),
                    });
                }
                rows.push(
                    ExponentRow::new(l, vals)
                        .map_err(|source| FormatError::Row { line, source })?,
                );
            }
            Ok(RowFile::Exponent { n, l, rows })
        }
        Header::Complex { n } => {
            let mut rows = Vec::new();
            for (line, s) in lines {
                let vals: Vec<f64> = s
                    .split(',')
                    .map(|t| t.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| FormatError::BadLine {
                        line,
                        msg: e.to_string(),
                    })?;
                if vals.len() != 2 * n {
                    return Err(FormatError::BadLine {
                        line,
                        msg: format!("expected {} decimals, got {}", 2 * n, vals.len()),
                    });
                }
                rows.push(vals.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect());
            }
            Ok(RowFile::Complex { n, rows })
        }
    }
}

pub fn format_exponent_rows(n: usize, l: usize, rows: &[ExponentRow]) -> String {
    let mut out = format!("# n={n} l={l}\n");
    for r in rows {
        let line: Vec<String> = r.exponents().iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Uses the shortest decimal that parses back to the same `f64`.
pub fn format_complex_rows(n: usize, rows: &[Vec<Complex64>]) -> String {
    let mut out = format!("# n={n} complex\n");
    for r in rows {
        let mut first = true;
        for z in r {
            for part in [z.re, z.im] {
                if !first {
                    out.push(',');
                }
                first = false;
                // Normalize -0 so equal values print identically.
                let part = if part == 0.0 { 0.0 } else { part };
                write!(out, "{part}").expect("writing to a String");
            }
        }
        out.push('\n');
    }
    out
}

pub fn format(file: &RowFile) -> String {
    match file {
        RowFile::Exponent { n, l, rows } => format_exponent_rows(*n, *l, rows),
        RowFile::Complex { n, rows } => format_complex_rows(*n, rows),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_round_trip() {
        let text = "# n=4 l=2\n1,0,0,0\n0,1,1,1\n";
        let f = parse(text).unwrap();
        match &f {
            RowFile::Exponent { n, l, rows } => {
                assert_eq!((*n, *l, rows.len()), (4, 2, 2));
                assert_eq!(rows[0].exponents(), &[1, 0, 0, 0]);
            }
            _ => panic!("wrong kind"),
        }
        assert_eq!(format(&f), text);
    }

    #[test]
    fn complex_round_trip() {
        let text = "# n=2 complex\n0,0,1.4142135623730951,-0.5\n";
        let f = parse(text).unwrap();
        assert_eq!(format(&f), text);
    }

    #[test]
    fn errors() {
        assert_eq!(parse(""), Err(FormatError::MissingHeader));
        assert_eq!(parse("1,0\n"), Err(FormatError::MissingHeader));
        assert!(matches!(
            parse("# n=2\n0,1\n"),
            Err(FormatError::BadHeader(_))
        ));
        assert!(matches!(
            parse("# n=2 l=3 x=1\n"),
            Err(FormatError::BadHeader(_))
        ));
        assert!(matches!(
            parse("# n=3 l=2\n0,1\n"),
            Err(FormatError::BadLine { line: 2, .. })
        ));
        assert!(matches!(
            parse("# n=2 l=2\n0,2\n"),
            Err(FormatError::Row { line: 2, .. })
        ));
        assert!(matches!(
            parse("# n=2 l=2\n0,a\n"),
            Err(FormatError::BadLine { line: 2, .. })
        ));
    }
}
