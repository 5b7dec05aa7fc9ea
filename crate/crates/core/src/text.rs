//! Plain-text matrix format.
//!
//! One row per line, whitespace-separated entries, `inf` for `+∞`, and `#`
//! starting a comment line. Blank lines are ignored.

use std::fmt::Write as _;
use std::path::Path;

use crate::delay::{Delay, DelayMatrix};
use crate::error::{QiError, Result};
use crate::pattern::BinaryPattern;

/// A parsed matrix file.
#[derive(Debug, Clone, PartialEq)]
pub enum Matrix {
    Binary(BinaryPattern),
    Delay(DelayMatrix),
}

impl Matrix {
    pub fn shape(&self) -> (usize, usize) {
        match self {
            Matrix::Binary(b) => b.shape(),
            Matrix::Delay(d) => d.shape(),
        }
    }

    /// Views the matrix as delays; a binary file is read literally (0 and 1).
    pub fn into_delay(self) -> DelayMatrix {
        match self {
            Matrix::Delay(d) => d,
            Matrix::Binary(b) => {
                let entries = b
                    .entries()
                    .iter()
                    .map(|&x| Delay::Finite(if x { 1.0 } else { 0.0 }))
                    .collect();
                DelayMatrix::new(b.rows(), b.cols(), entries).expect("shape preserved")
            }
        }
    }

    pub fn into_binary(self) -> Result<BinaryPattern> {
        match self {
            Matrix::Binary(b) => Ok(b),
            Matrix::Delay(_) => Err(QiError::UnsupportedInput(
                "expected a 0/1 pattern, found delay entries".into(),
            )),
        }
    }
}

/// Parses matrix text. Files containing only `0`/`1` tokens are binary
/// patterns unless `as_delay` is set.
pub fn parse_matrix(text: &str, as_delay: bool) -> Result<Matrix> {
    let mut rows: Vec<Vec<Delay>> = Vec::new();
    let mut binary = true;
    let mut width = None;
    for (ln, line) in text.lines().enumerate() {
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        for (col, token) in tokens_with_columns(line) {
            let err = |message: String| QiError::Parse { line: ln + 1, column: col, message };
            let value = if token.eq_ignore_ascii_case("inf") {
                binary = false;
                Delay::Infinite
            } else {
                let v: f64 = token
                    .parse()
                    .map_err(|_| err(format!("not a number: {token:?}")))?;
                if !v.is_finite() {
                    return Err(err(format!("use `inf` for infinite entries, got {token:?}")));
                }
                if v < 0.0 {
                    return Err(err(format!("negative entry {token}")));
                }
                if token != "0" && token != "1" {
                    binary = false;
                }
                Delay::Finite(v)
            };
            row.push(value);
        }
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(QiError::Parse {
                    line: ln + 1,
                    column: 1,
                    message: format!("ragged row: expected {w} entries, found {}", row.len()),
                })
            }
            _ => {}
        }
        rows.push(row);
    }
    let cols = width.ok_or(QiError::Parse {
        line: 1,
        column: 1,
        message: "no matrix rows".into(),
    })?;
    let r = rows.len();
    let entries: Vec<Delay> = rows.into_iter().flatten().collect();
    if binary && !as_delay {
        let bits = entries.iter().map(|d| *d == Delay::Finite(1.0)).collect();
        Ok(Matrix::Binary(BinaryPattern::new(r, cols, bits)?))
    } else {
        Ok(Matrix::Delay(DelayMatrix::new(r, cols, entries)?))
    }
}

pub fn parse_matrix_file(path: impl AsRef<Path>, as_delay: bool) -> Result<Matrix> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| QiError::Parse {
        line: 0,
        column: 0,
        message: format!("{}: {e}", path.display()),
    })?;
    parse_matrix(&text, as_delay)
}

fn tokens_with_columns(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut rest = line;
    let mut offset = 0;
    std::iter::from_fn(move || {
        let start = rest.find(|c: char| !c.is_whitespace())?;
        let tail = &rest[start..];
        let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
        let token = &tail[..len];
        let column = line[..offset + start].chars().count() + 1;
        offset += start + len;
        rest = &tail[len..];
        Some((column, token))
    })
}

pub fn format_pattern(p: &BinaryPattern) -> String {
    p.to_string()
}

pub fn format_delays(d: &DelayMatrix) -> String {
    let mut out = String::new();
    for row in d.to_rows() {
        let line: Vec<String> = row.iter().map(Delay::to_string).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

pub fn format_matrix(m: &Matrix) -> String {
    match m {
        Matrix::Binary(b) => format_pattern(b),
        Matrix::Delay(d) => format_delays(d),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_is_binary() {
        let m = parse_matrix("1 0\n0 1\n", false).unwrap();
        assert_eq!(m, Matrix::Binary(BinaryPattern::identity(2)));
        assert!(matches!(parse_matrix("1 0\n0 1\n", true).unwrap(), Matrix::Delay(_)));
    }

    #[test]
    fn propagation_delays() {
        let m = parse_matrix("9 0 8 4\n0 7 8 7\n3 5 7 1\n5 5 3 1\n", false).unwrap();
        let want = DelayMatrix::from_rows(&[
            [9.0, 0.0, 8.0, 4.0],
            [0.0, 7.0, 8.0, 7.0],
            [3.0, 5.0, 7.0, 1.0],
            [5.0, 5.0, 3.0, 1.0],
        ])
        .unwrap();
        assert_eq!(m, Matrix::Delay(want));
    }

    #[test]
    fn infinity_token() {
        let Matrix::Delay(d) = parse_matrix("# comment\n0 inf\n\n2 0\n", false).unwrap() else {
            panic!("expected delays");
        };
        assert_eq!(d.get(0, 1), Delay::Infinite);
        assert_eq!(d.get(1, 0), Delay::Finite(2.0));
    }

    #[test]
    fn parse_errors_carry_position() {
        assert_eq!(
            parse_matrix("1 0\n0 1 1\n", false),
            Err(QiError::Parse {
                line: 2,
                column: 1,
                message: "ragged row: expected 2 entries, found 3".into()
            })
        );
        match parse_matrix("0  -3\n", false) {
            Err(QiError::Parse { line: 1, column: 4, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_matrix("0 x\n", false) {
            Err(QiError::Parse { line: 1, column: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(parse_matrix("# only a comment\n", false).is_err());
        assert!(parse_matrix("NaN 1\n", false).is_err());
    }

    proptest! {
        #[test]
        fn delay_text_round_trip(rows in 1usize..5, cols in 1usize..5, seed in proptest::collection::vec(0u32..40, 16)) {
            let entries: Vec<Delay> = (0..rows * cols)
                .map(|i| match seed[i] {
                    0 => Delay::Infinite,
                    v => Delay::Finite(f64::from(v) / 4.0),
                })
                .collect();
            let m = Matrix::Delay(DelayMatrix::new(rows, cols, entries).unwrap());
            let back = parse_matrix(&format_matrix(&m), true).unwrap();
            prop_assert_eq!(back, m);
        }

        #[test]
        fn pattern_text_round_trip(rows in 1usize..6, cols in 1usize..6, bits: u64) {
            let m = Matrix::Binary(BinaryPattern::from_bits(rows, cols, bits).unwrap());
            prop_assert_eq!(parse_matrix(&format_matrix(&m), false).unwrap(), m);
        }
    }
}
