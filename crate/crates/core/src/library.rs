//! Named unitaries used as synthesis inputs.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numkit::{haar_unitary, ComplexMatrix};

/// Names accepted by [`named_gate`] for three qubits, besides `random:<seed>`.
pub const THREE_QUBIT_GATES: [&str; 4] = ["toffoli", "fredkin", "ccz", "qft3"];
/// Names accepted by [`named_gate`] for two qubits, besides `random:<seed>`.
pub const TWO_QUBIT_GATES: [&str; 4] = ["cnot", "cz", "swap", "qft2"];

fn permutation(dim: usize, f: impl Fn(usize) -> usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |i, j| if f(j) == i { 1.0.into() } else { 0.0.into() })
}

fn diagonal(dim: usize, f: impl Fn(usize) -> f64) -> ComplexMatrix {
    let d: Vec<Complex64> = (0..dim).map(|k| f(k).into()).collect();
    ComplexMatrix::from_diagonal(&d)
}

/// Quantum Fourier transform on `n` qubits: `F_jk = w^{jk} / sqrt(2^n)`.
pub fn qft(n: usize) -> ComplexMatrix {
    let dim = 1usize << n;
    let norm = (dim as f64).sqrt().recip();
    ComplexMatrix::from_fn(dim, |j, k| {
        Complex64::from_polar(norm, 2.0 * PI * ((j * k) % dim) as f64 / dim as f64)
    })
}

/// Looks up a named gate on `n_qubits` (2 or 3) qubits. `random:<seed>`
/// draws a Haar unitary with that seed.
pub fn named_gate(name: &str, n_qubits: usize) -> Result<ComplexMatrix> {
    if let Some(seed) = name.strip_prefix("random:") {
        let seed: u64 = seed
            .parse()
            .map_err(|_| Error::UnknownGate(name.to_string()))?;
        return match n_qubits {
            2 | 3 => Ok(haar_unitary(1 << n_qubits, seed)),
            _ => Err(Error::UnknownGate(name.to_string())),
        };
    }
    let m = match (n_qubits, name) {
        // Controls on qubits 1, 2; target qubit 3 (least significant bit).
        (3, "toffoli") => permutation(8, |j| if j >> 1 == 0b11 { j ^ 1 } else { j }),
        // Control qubit 1 swaps qubits 2 and 3.
        (3, "fredkin") => permutation(8, |j| match j {
            0b101 => 0b110,
            0b110 => 0b101,
            other => other,
        }),
        (3, "ccz") => diagonal(8, |k| if k == 0b111 { -1.0 } else { 1.0 }),
        (3, "qft3") => qft(3),
        (2, "cnot") => permutation(4, |j| if j >> 1 == 1 { j ^ 1 } else { j }),
        (2, "cz") => diagonal(4, |k| if k == 3 { -1.0 } else { 1.0 }),
        (2, "swap") => permutation(4, |j| ((j & 1) << 1) | (j >> 1)),
        (2, "qft2") => qft(2),
        _ => return Err(Error::UnknownGate(name.to_string())),
    };
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{cnot4, simulate, Circuit, Gate};
    use crate::numkit::is_unitary;

    #[test]
    fn all_names_resolve_to_unitaries() {
        for n in THREE_QUBIT_GATES {
            assert!(is_unitary(&named_gate(n, 3).unwrap(), 1e-12), "{n}");
        }
        for n in TWO_QUBIT_GATES {
            assert!(is_unitary(&named_gate(n, 2).unwrap(), 1e-12), "{n}");
        }
        assert_eq!(named_gate("random:5", 3).unwrap(), haar_unitary(8, 5));
        assert!(named_gate("random:x", 3).is_err());
        assert!(named_gate("toffoli", 2).is_err());
        assert!(named_gate("nope", 3).is_err());
    }

    #[test]
    fn toffoli_and_fredkin_act_on_basis_states() {
        let t = named_gate("toffoli", 3).unwrap();
        assert_eq!(t[(0b111, 0b110)], 1.0.into());
        assert_eq!(t[(0b101, 0b101)], 1.0.into());
        let f = named_gate("fredkin", 3).unwrap();
        assert_eq!(f[(0b110, 0b101)], 1.0.into());
        assert_eq!(f[(0b011, 0b011)], 1.0.into());
        assert_eq!(named_gate("cnot", 2).unwrap(), cnot4(true));
        // Fredkin = CX(3->2) Toffoli(1,2 -> 3) CX(3->2).
        let mut c = Circuit::new(3);
        c.push(Gate::Cx {
            control: 3,
            target: 2,
        })
        .unwrap();
        let outer = simulate(&c);
        let built = &(&outer * &t) * &outer;
        assert!(built.sub(&f).frobenius_norm() == 0.0);
    }

    #[test]
    fn qft_first_row_and_column_are_flat() {
        let q = qft(3);
        let s = 8f64.sqrt().recip();
        for k in 0..8 {
            assert!((q[(0, k)] - Complex64::from(s)).norm() < 1e-15);
            assert!((q[(k, 0)] - Complex64::from(s)).norm() < 1e-15);
        }
        assert!((q[(1, 1)] - Complex64::from_polar(s, PI / 4.0)).norm() < 1e-15);
    }
}
