//! The `N(a,b,c)` and `M(a,b,c,d)` cores, their CNOT circuits, trimmed
//! forms with edge gates split off for absorption, and the smaller building
//! blocks the circuits are assembled from.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::circuit::{cnot4, hadamard, rz, simulate, Circuit, Gate};
use crate::error::{Error, Result};
use crate::numkit::ComplexMatrix;
use crate::pauli::{exp_commuting_sum, PauliTerm};

fn exp_terms(terms: &[(f64, &str)]) -> ComplexMatrix {
    let terms: Vec<PauliTerm> = terms
        .iter()
        .map(|&(c, w)| PauliTerm::parse(c, w).expect("literal word"))
        .collect();
    exp_commuting_sum(3, &terms).expect("terms commute")
}

/// `exp(i(a XXZ + b YYZ + c ZZZ))`.
pub fn n_core(a: f64, b: f64, c: f64) -> ComplexMatrix {
    exp_terms(&[(a, "XXZ"), (b, "YYZ"), (c, "ZZZ")])
}

/// `exp(i(a XXX + b YYX + c ZZX + d IIX))`.
pub fn m_core(a: f64, b: f64, c: f64, d: f64) -> ComplexMatrix {
    exp_terms(&[(a, "XXX"), (b, "YYX"), (c, "ZZX"), (d, "IIX")])
}

fn ry(q: usize, theta: f64) -> Gate {
    Gate::Ry { q, theta }
}

fn rzg(q: usize, theta: f64) -> Gate {
    Gate::Rz { q, theta }
}

fn cx(control: usize, target: usize) -> Gate {
    Gate::Cx { control, target }
}

fn h(q: usize) -> Gate {
    Gate::H { q }
}

fn build(gates: Vec<Gate>) -> Circuit {
    Circuit::from_gates(3, gates, 0.0).expect("fixed template")
}

fn n_gates(a: f64, b: f64, c: f64) -> Vec<Gate> {
    vec![
        rzg(2, -FRAC_PI_2),
        h(3),
        cx(2, 1),
        cx(2, 3),
        ry(2, 2.0 * a),
        cx(1, 2),
        ry(2, -2.0 * b),
        cx(1, 2),
        cx(2, 3),
        rzg(2, FRAC_PI_2),
        h(3),
        cx(2, 1),
        cx(1, 3),
        cx(2, 3),
        rzg(3, 2.0 * c),
        cx(2, 3),
        cx(1, 3),
    ]
}

fn m_gates(a: f64, b: f64, c: f64, d: f64) -> Vec<Gate> {
    vec![
        cx(3, 1),
        cx(1, 2),
        cx(3, 2),
        rzg(3, -FRAC_PI_2),
        ry(3, 2.0 * a),
        cx(2, 3),
        ry(3, -2.0 * b),
        cx(2, 3),
        rzg(3, FRAC_PI_2),
        cx(3, 1),
        cx(1, 2),
        h(3),
        cx(2, 1),
        cx(1, 3),
        rzg(3, 2.0 * c),
        cx(1, 3),
        rzg(3, 2.0 * d),
        cx(2, 1),
        h(3),
    ]
}

/// Untrimmed 10-CNOT circuit equal to [`n_core`] with no phase offset.
///
/// The first ten gates realize the `XXZ + YYZ` part (conjugated into a
/// two-rotation multiplexor); the last seven realize `ZZZ` with a parity
/// ladder. The `CX(2 -> 3)` before `RZ(2c)` completes the parity
/// `q1 ^ q2 ^ q3`; without it the circuit is not `N`.
pub fn n_circuit(a: f64, b: f64, c: f64) -> Circuit {
    build(n_gates(a, b, c))
}

/// Untrimmed 11-CNOT circuit equal to [`m_core`] with no phase offset.
pub fn m_circuit(a: f64, b: f64, c: f64, d: f64) -> Circuit {
    build(m_gates(a, b, c, d))
}

/// Template with its edge gates removed for absorption by neighbours:
/// `(right_fold_a (x) right_fold_b) . simulate(circuit) . (left_fold_a (x) left_fold_b)`
/// is exactly the untrimmed template. The `a` folds act on qubits 1, 2 and
/// the `b` folds on qubit 3.
#[derive(Debug, Clone)]
pub struct TrimmedTemplate {
    pub circuit: Circuit,
    pub left_fold_a: ComplexMatrix,
    pub left_fold_b: ComplexMatrix,
    pub right_fold_a: ComplexMatrix,
    pub right_fold_b: ComplexMatrix,
}

impl TrimmedTemplate {
    pub fn unitary(&self) -> ComplexMatrix {
        let left = self.left_fold_a.kron(&self.left_fold_b);
        let right = self.right_fold_a.kron(&self.right_fold_b);
        &(&right * &simulate(&self.circuit)) * &left
    }
}

/// Positions in [`n_circuit`] that are split off: the three leading gates
/// and the `RZ(pi/2)` on qubit 2, which commutes to the right edge because
/// qubit 2 is only ever a CNOT control after it.
pub const N_LEADING: usize = 3;
pub const N_COMMUTED: usize = 9;

/// Positions in [`m_circuit`] that are split off: the `RZ(-pi/2)` on qubit
/// 3, which commutes to the left edge past three CNOTs where qubit 3 is a
/// control or idle, and the three trailing gates.
pub const M_COMMUTED: usize = 3;
pub const M_TRAILING: usize = 3;

/// [`n_circuit`] with 9 CNOTs and 5 one-qubit gates.
pub fn trimmed_n(a: f64, b: f64, c: f64) -> TrimmedTemplate {
    let gates: Vec<Gate> = n_gates(a, b, c)
        .into_iter()
        .enumerate()
        .filter(|&(k, _)| k >= N_LEADING && k != N_COMMUTED)
        .map(|(_, g)| g)
        .collect();
    let i2 = ComplexMatrix::identity(2);
    TrimmedTemplate {
        circuit: build(gates),
        left_fold_a: &cnot4(false) * &i2.kron(&rz(-FRAC_PI_2)),
        left_fold_b: hadamard(),
        right_fold_a: i2.kron(&rz(FRAC_PI_2)),
        right_fold_b: i2,
    }
}

/// [`m_circuit`] with 10 CNOTs and 6 one-qubit gates.
pub fn trimmed_m(a: f64, b: f64, c: f64, d: f64) -> TrimmedTemplate {
    let all = m_gates(a, b, c, d);
    let keep = all.len() - M_TRAILING;
    let gates: Vec<Gate> = all
        .into_iter()
        .enumerate()
        .filter(|&(k, _)| k != M_COMMUTED && k < keep)
        .map(|(_, g)| g)
        .collect();
    TrimmedTemplate {
        circuit: build(gates),
        left_fold_a: ComplexMatrix::identity(4),
        left_fold_b: rz(-FRAC_PI_2),
        right_fold_a: cnot4(false),
        right_fold_b: &hadamard() * &rz(2.0 * d),
    }
}

/// Named building blocks of the two core circuits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TemplateName {
    /// Multiplexed X rotation on qubit 3 controlled by qubit 1, `(a, b)`.
    P,
    /// `exp(i(a XXZ + b YYZ))`.
    N1,
    /// `exp(i c ZZZ)`.
    N2,
    /// `exp(i(a XXX + b YYX))`.
    M1,
    /// `exp(i c ZZX)`.
    M2,
    /// `I4 (x) exp(i d X)`.
    M3,
}

impl TemplateName {
    pub const ALL: [TemplateName; 6] = [
        TemplateName::P,
        TemplateName::N1,
        TemplateName::N2,
        TemplateName::M1,
        TemplateName::M2,
        TemplateName::M3,
    ];

    pub fn arity(self) -> usize {
        match self {
            TemplateName::P | TemplateName::N1 | TemplateName::M1 => 2,
            TemplateName::N2 | TemplateName::M2 | TemplateName::M3 => 1,
        }
    }
}

impl FromStr for TemplateName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "P" => Ok(TemplateName::P),
            "N1" => Ok(TemplateName::N1),
            "N2" => Ok(TemplateName::N2),
            "M1" => Ok(TemplateName::M1),
            "M2" => Ok(TemplateName::M2),
            "M3" => Ok(TemplateName::M3),
            other => Err(Error::UnknownTemplate(other.to_string())),
        }
    }
}

impl fmt::Display for TemplateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TemplateName::P => "P",
            TemplateName::N1 => "N1",
            TemplateName::N2 => "N2",
            TemplateName::M1 => "M1",
            TemplateName::M2 => "M2",
            TemplateName::M3 => "M3",
        };
        f.write_str(s)
    }
}

fn check_arity(name: TemplateName, params: &[f64]) -> Result<()> {
    if params.len() != name.arity() {
        return Err(Error::Arity {
            name: name.to_string(),
            expected: name.arity(),
            found: params.len(),
        });
    }
    Ok(())
}

/// Gate sequence of a named building block.
pub fn template(name: TemplateName, params: &[f64]) -> Result<Circuit> {
    check_arity(name, params)?;
    let p = params;
    let gates = match name {
        TemplateName::P => vec![
            rzg(3, -FRAC_PI_2),
            ry(3, 2.0 * p[0]),
            cx(1, 3),
            ry(3, -2.0 * p[1]),
            cx(1, 3),
            rzg(3, FRAC_PI_2),
        ],
        TemplateName::N1 => vec![
            cx(2, 1),
            rzg(2, -FRAC_PI_2),
            h(3),
            cx(2, 3),
            ry(2, 2.0 * p[0]),
            cx(1, 2),
            ry(2, -2.0 * p[1]),
            cx(1, 2),
            cx(2, 3),
            rzg(2, FRAC_PI_2),
            h(3),
            cx(2, 1),
        ],
        TemplateName::N2 => vec![cx(1, 3), cx(2, 3), rzg(3, 2.0 * p[0]), cx(2, 3), cx(1, 3)],
        TemplateName::M1 => vec![
            cx(3, 1),
            cx(1, 2),
            cx(3, 2),
            rzg(3, -FRAC_PI_2),
            ry(3, 2.0 * p[0]),
            cx(2, 3),
            ry(3, -2.0 * p[1]),
            cx(2, 3),
            rzg(3, FRAC_PI_2),
            cx(3, 1),
            cx(1, 2),
        ],
        TemplateName::M2 => vec![
            cx(2, 1),
            h(3),
            cx(1, 3),
            rzg(3, 2.0 * p[0]),
            cx(1, 3),
            h(3),
            cx(2, 1),
        ],
        TemplateName::M3 => vec![rzg(3, -FRAC_PI_2), ry(3, 2.0 * p[0]), rzg(3, FRAC_PI_2)],
    };
    Ok(build(gates))
}

/// Closed-form matrix each named template realizes (up to global phase).
pub fn template_oracle(name: TemplateName, params: &[f64]) -> Result<ComplexMatrix> {
    check_arity(name, params)?;
    let p = params;
    Ok(match name {
        TemplateName::P => {
            let x = |t: f64| {
                ComplexMatrix::mat2(
                    t.cos().into(),
                    Complex64::new(0.0, t.sin()),
                    Complex64::new(0.0, t.sin()),
                    t.cos().into(),
                )
            };
            let (p1, p2) = (x(p[0] - p[1]), x(p[0] + p[1]));
            let i2 = ComplexMatrix::identity(2);
            i2.kron(&p1).direct_sum(&i2.kron(&p2))
        }
        TemplateName::N1 => exp_terms(&[(p[0], "XXZ"), (p[1], "YYZ")]),
        TemplateName::N2 => exp_terms(&[(p[0], "ZZZ")]),
        TemplateName::M1 => exp_terms(&[(p[0], "XXX"), (p[1], "YYX")]),
        TemplateName::M2 => exp_terms(&[(p[0], "ZZX")]),
        TemplateName::M3 => {
            let d = p[0];
            let q = ComplexMatrix::mat2(
                d.cos().into(),
                Complex64::new(0.0, d.sin()),
                Complex64::new(0.0, d.sin()),
                d.cos().into(),
            );
            ComplexMatrix::identity(4).kron(&q)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{counts, gates_commute};
    use crate::numkit::{distance_up_to_phase, is_unitary, rng_from_seed};
    use rand::Rng;
    use std::f64::consts::PI;

    fn dist(c: &Circuit, m: &ComplexMatrix) -> f64 {
        distance_up_to_phase(&simulate(c), m).unwrap()
    }

    #[test]
    fn core_examples() {
        assert!(
            n_core(0.0, 0.0, 0.0)
                .sub(&ComplexMatrix::identity(8))
                .frobenius_norm()
                < 1e-15
        );
        assert!(
            m_core(0.0, 0.0, 0.0, 0.0)
                .sub(&ComplexMatrix::identity(8))
                .frobenius_norm()
                < 1e-15
        );
        let n = n_core(0.0, 0.0, 0.4);
        for k in 0..8usize {
            let parity = (k.count_ones() % 2) as f64;
            let expect = Complex64::from_polar(1.0, 0.4 * (1.0 - 2.0 * parity));
            assert!((n[(k, k)] - expect).norm() < 1e-14);
        }
        let m = m_core(0.0, 0.0, 0.0, 0.3);
        let oracle = template_oracle(TemplateName::M3, &[0.3]).unwrap();
        assert!(m.sub(&oracle).frobenius_norm() < 1e-14);
        let m = m_core(0.3, -0.2, 0.9, 1.4);
        assert!(is_unitary(&m, 1e-12));
        assert!(m.sub(&m.transpose()).frobenius_norm() < 1e-12);
    }

    #[test]
    fn full_templates_match_cores_exactly() {
        let mut rng = rng_from_seed(31);
        for _ in 0..200 {
            let p: Vec<f64> = (0..4).map(|_| rng.random_range(-PI..PI)).collect();
            let n = simulate(&n_circuit(p[0], p[1], p[2]));
            assert!(n.sub(&n_core(p[0], p[1], p[2])).frobenius_norm() <= 1e-12);
            let m = simulate(&m_circuit(p[0], p[1], p[2], p[3]));
            assert!(m.sub(&m_core(p[0], p[1], p[2], p[3])).frobenius_norm() <= 1e-12);
        }
        assert_eq!(counts(&n_circuit(0.1, 0.2, 0.3)).cnot, 10);
        assert_eq!(counts(&m_circuit(0.1, 0.2, 0.3, 0.4)).cnot, 11);
    }

    #[test]
    fn trimmed_counts_and_folds() {
        let mut rng = rng_from_seed(32);
        for _ in 0..200 {
            let p: Vec<f64> = (0..4).map(|_| rng.random_range(-PI..PI)).collect();
            let tn = trimmed_n(p[0], p[1], p[2]);
            let cn = counts(&tn.circuit);
            assert_eq!((cn.one_qubit, cn.cnot), (5, 9));
            let full = simulate(&n_circuit(p[0], p[1], p[2]));
            assert!(tn.unitary().sub(&full).frobenius_norm() <= 1e-12);

            let tm = trimmed_m(p[0], p[1], p[2], p[3]);
            let cm = counts(&tm.circuit);
            assert_eq!((cm.one_qubit, cm.cnot), (6, 10));
            let full = simulate(&m_circuit(p[0], p[1], p[2], p[3]));
            assert!(tm.unitary().sub(&full).frobenius_norm() <= 1e-12);
        }
    }

    #[test]
    fn trimming_moves_are_structurally_legal() {
        let n = n_gates(0.1, 0.2, 0.3);
        for g in &n[N_COMMUTED + 1..] {
            assert!(gates_commute(&n[N_COMMUTED], g), "{} vs {g}", n[N_COMMUTED]);
        }
        let m = m_gates(0.1, 0.2, 0.3, 0.4);
        for g in &m[..M_COMMUTED] {
            assert!(gates_commute(&m[M_COMMUTED], g), "{} vs {g}", m[M_COMMUTED]);
        }
        // The removed trailing block of m_circuit reorders RZ(2d) past the
        // disjoint CNOT only.
        let tail = &m[m.len() - M_TRAILING..];
        assert!(gates_commute(&tail[0], &tail[1]));
    }

    #[test]
    fn named_templates_match_oracles() {
        let mut rng = rng_from_seed(33);
        for name in TemplateName::ALL {
            for _ in 0..200 {
                let p: Vec<f64> = (0..name.arity())
                    .map(|_| rng.random_range(-PI..PI))
                    .collect();
                let c = template(name, &p).unwrap();
                let d = dist(&c, &template_oracle(name, &p).unwrap());
                assert!(d <= 1e-10, "{name} {p:?}: {d:e}");
            }
        }
        let n2 = template(TemplateName::N2, &[0.7]).unwrap();
        let cn = counts(&n2);
        assert_eq!((cn.cnot, cn.one_qubit), (4, 1));
    }

    #[test]
    fn p_with_equal_angles_is_identity_on_q1_zero() {
        let u = simulate(&template(TemplateName::P, &[0.6, 0.6]).unwrap());
        let block = u.block(0, 0, 4);
        assert!(block.sub(&ComplexMatrix::identity(4)).frobenius_norm() < 1e-14);
    }

    #[test]
    fn template_errors() {
        assert!(matches!(
            "Q".parse::<TemplateName>(),
            Err(Error::UnknownTemplate(_))
        ));
        assert!(matches!(
            template(TemplateName::P, &[0.1]),
            Err(Error::Arity {
                expected: 2,
                found: 1,
                ..
            })
        ));
        assert!(template_oracle(TemplateName::M3, &[]).is_err());
    }
}
