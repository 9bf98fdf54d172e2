//! Line-oriented circuit text format.
//!
//! ```text
//! qubits 3
//! gphase -7.8539816339744828e-1
//! ry 1 1.5707963267948966e0
//! cx 1 2
//! h 3
//! ```
//!
//! `#` starts a comment; blank lines are ignored. The `qubits` header comes
//! first, an optional `gphase` line may follow it, then one gate per line.
//! Angles are written with 17 significant digits so parsing recovers the
//! exact `f64`.

use std::fmt::Write as _;

use super::{Circuit, Gate};
use crate::error::{Error, Result};

fn angle(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn emit_text(c: &Circuit) -> String {
    let mut out = format!("qubits {}\n", c.n_qubits());
    if c.global_phase != 0.0 {
        let _ = writeln!(out, "gphase {}", angle(c.global_phase));
    }
    for g in c.gates() {
        let _ = match *g {
            Gate::Ry { q, theta } => writeln!(out, "ry {q} {}", angle(theta)),
            Gate::Rz { q, theta } => writeln!(out, "rz {q} {}", angle(theta)),
            Gate::Ph { q, theta } => writeln!(out, "ph {q} {}", angle(theta)),
            Gate::H { q } => writeln!(out, "h {q}"),
            Gate::Cx { control, target } => writeln!(out, "cx {control} {target}"),
        };
    }
    out
}

fn err(line: usize, token: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        token: token.to_string(),
        message: message.into(),
    }
}

fn expect_args(line: usize, words: &[&str], n: usize) -> Result<()> {
    if words.len() != n + 1 {
        let token = words.get(n + 1).or(words.last()).copied().unwrap_or("");
        return Err(err(
            line,
            token,
            format!(
                "`{}` takes {n} argument(s), found {}",
                words[0],
                words.len() - 1
            ),
        ));
    }
    Ok(())
}

fn qubit(line: usize, tok: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| err(line, tok, "expected a qubit index"))
}

fn real(line: usize, tok: &str) -> Result<f64> {
    match tok.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(err(line, tok, "expected a finite angle")),
    }
}

pub fn parse_text(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    let mut saw_gate = false;
    let mut saw_phase = false;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = content.split_whitespace().collect();
        let Some(&head) = words.first() else {
            continue;
        };
        let Some(c) = circuit.as_mut() else {
            if head != "qubits" {
                return Err(err(line, head, "expected `qubits <n>` header"));
            }
            expect_args(line, &words, 1)?;
            let n = qubit(line, words[1])?;
            if n == 0 {
                return Err(err(line, words[1], "register needs at least one qubit"));
            }
            circuit = Some(Circuit::new(n));
            continue;
        };
        let gate = match head {
            "qubits" => return Err(err(line, head, "duplicate `qubits` header")),
            "gphase" => {
                if saw_gate || saw_phase {
                    return Err(err(line, head, "`gphase` must directly follow the header"));
                }
                expect_args(line, &words, 1)?;
                c.global_phase = real(line, words[1])?;
                saw_phase = true;
                continue;
            }
            "ry" | "rz" | "ph" => {
                expect_args(line, &words, 2)?;
                let q = qubit(line, words[1])?;
                let theta = real(line, words[2])?;
                match head {
                    "ry" => Gate::Ry { q, theta },
                    "rz" => Gate::Rz { q, theta },
                    _ => Gate::Ph { q, theta },
                }
            }
            "h" => {
                expect_args(line, &words, 1)?;
                Gate::H {
                    q: qubit(line, words[1])?,
                }
            }
            "cx" => {
                expect_args(line, &words, 2)?;
                Gate::Cx {
                    control: qubit(line, words[1])?,
                    target: qubit(line, words[2])?,
                }
            }
            other => return Err(err(line, other, "unknown gate")),
        };
        c.push(gate)
            .map_err(|e| err(line, content.trim(), e.to_string()))?;
        saw_gate = true;
    }
    circuit.ok_or_else(|| err(last_line.max(1), "", "missing `qubits <n>` header"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn empty_register_is_header_only() {
        assert_eq!(emit_text(&Circuit::new(3)), "qubits 3\n");
    }

    #[test]
    fn round_trip_is_exact() {
        let mut c = Circuit::new(3);
        c.global_phase = -PI / 4.0;
        for g in [
            Gate::Ry {
                q: 1,
                theta: 0.1 + 0.2,
            },
            Gate::Rz {
                q: 2,
                theta: -1e-300,
            },
            Gate::Ph { q: 3, theta: PI },
            Gate::H { q: 2 },
            Gate::Cx {
                control: 3,
                target: 1,
            },
            Gate::Rz { q: 1, theta: -0.0 },
        ] {
            c.push(g).unwrap();
        }
        let text = emit_text(&c);
        let back = parse_text(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(emit_text(&back), text);
    }

    #[test]
    fn comments_and_blank_lines() {
        let c = parse_text("# header\n\nqubits 2 # two\n  cx 1 2  \n# end\n").unwrap();
        assert_eq!(
            c.gates(),
            &[Gate::Cx {
                control: 1,
                target: 2
            }]
        );
        assert_eq!(c.global_phase, 0.0);
    }

    #[test]
    fn diagnostics_name_line_and_token() {
        let cases = [
            ("qubits 3\ncx 1 1\n", 2),
            ("qubits 3\nry 1 abc\n", 2),
            ("qubits 3\nrx 1 0.1\n", 2),
            ("ry 1 0.1\n", 1),
            ("qubits 2\nh 3\n", 2),
            ("qubits 2\nh 1\ngphase 0.1\n", 3),
            ("qubits 2\nry 1\n", 2),
            ("qubits 2\nrz 1 inf\n", 2),
            ("", 1),
        ];
        for (text, want) in cases {
            match parse_text(text) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, want, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
        match parse_text("qubits 3\nry 1 abc\n") {
            Err(Error::Parse { token, .. }) => assert_eq!(token, "abc"),
            other => panic!("{other:?}"),
        }
    }
}
