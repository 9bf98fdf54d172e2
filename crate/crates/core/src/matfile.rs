//! Text format for dense complex matrices.
//!
//! ```text
//! dim 2
//! (1,0) (0,0)
//! (0,0) (0,-1)
//! ```
//!
//! The `dim <n>` header is followed by `n` rows of `n` whitespace-separated
//! `(<re>,<im>)` tokens. Numbers are decimal with optional exponent; no
//! spaces inside a token. `#` starts a comment and blank lines are ignored.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numkit::ComplexMatrix;

fn err(line: usize, token: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        token: token.to_string(),
        message: message.into(),
    }
}

/// Writes `m` with 17 significant digits per component.
pub fn emit_matrix(m: &ComplexMatrix) -> String {
    let n = m.dim();
    let mut out = format!("dim {n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n)
            .map(|j| format!("({:.16e},{:.16e})", m[(i, j)].re, m[(i, j)].im))
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

fn parse_entry(line: usize, tok: &str) -> Result<Complex64> {
    let inner = tok
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| err(line, tok, "expected `(<re>,<im>)`"))?;
    let (re, im) = inner
        .split_once(',')
        .ok_or_else(|| err(line, tok, "expected `(<re>,<im>)`"))?;
    let num = |s: &str| match s.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(err(line, tok, format!("`{s}` is not a finite number"))),
    };
    Ok(Complex64::new(num(re)?, num(im)?))
}

/// Parses the format above into a square matrix.
pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let mut dim: Option<usize> = None;
    let mut entries: Vec<Complex64> = Vec::new();
    let mut rows = 0;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = content.split_whitespace().collect();
        if words.is_empty() {
            continue;
        }
        let Some(n) = dim else {
            if words[0] != "dim" || words.len() != 2 {
                return Err(err(line, words[0], "expected `dim <n>` header"));
            }
            let n: usize = words[1]
                .parse()
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| err(line, words[1], "expected a positive dimension"))?;
            dim = Some(n);
            continue;
        };
        if rows == n {
            return Err(err(line, words[0], format!("more than {n} rows")));
        }
        if words.len() != n {
            let tok = words.get(n).or(words.last()).copied().unwrap_or("");
            return Err(err(
                line,
                tok,
                format!("row has {} entries, expected {n}", words.len()),
            ));
        }
        for w in words {
            entries.push(parse_entry(line, w)?);
        }
        rows += 1;
    }
    let n = dim.ok_or_else(|| err(last_line.max(1), "", "missing `dim <n>` header"))?;
    if rows != n {
        return Err(err(
            last_line.max(1),
            "",
            format!("found {rows} rows, expected {n}"),
        ));
    }
    ComplexMatrix::from_row_major(n, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::haar_unitary;

    #[test]
    fn round_trip_is_exact() {
        let u = haar_unitary(8, 3);
        let text = emit_matrix(&u);
        assert_eq!(parse_matrix(&text).unwrap(), u);
        assert!(text.starts_with("dim 8\n"));
        assert_eq!(text.lines().count(), 9);
    }

    #[test]
    fn accepts_plain_and_exponent_numbers() {
        let m = parse_matrix("# z\ndim 2\n(1,0) (0,0)\n\n(0,0) (0,-1.0e0)  # row\n").unwrap();
        assert_eq!(m[(1, 1)], Complex64::new(0.0, -1.0));
    }

    #[test]
    fn diagnostics() {
        let cases = [
            ("dim 2\n(1,0) (0,0)\n", 2),
            ("dim 2\n(1,0)\n(0,0) (1,0)\n", 2),
            ("dim 2\n(1,0) (0,0)\n(0,0) (1;0)\n", 3),
            ("dim 2\n(1,0) (0,0)\n(0,0) (x,0)\n", 3),
            ("size 2\n", 1),
            ("dim 0\n", 1),
            ("dim 1\n(1,0)\n(1,0)\n", 3),
            ("", 1),
        ];
        for (text, want) in cases {
            match parse_matrix(text) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, want, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }
}
