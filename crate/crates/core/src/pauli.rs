//! Pauli strings, exponentials of commuting Pauli sums, and the two-qubit
//! magic basis.

use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use nalgebra::{DMatrix, Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numkit::{jacobi_hermitian_eigen, ComplexMatrix};

const COMMUTE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> ComplexMatrix {
        let o = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::I => ComplexMatrix::identity(2),
            Pauli::X => ComplexMatrix::mat2(o, one, one, o),
            Pauli::Y => ComplexMatrix::mat2(o, -i, i, o),
            Pauli::Z => ComplexMatrix::mat2(one, o, o, -one),
        }
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Word over `{I, X, Y, Z}`; position `k` acts on qubit `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString(Vec<Pauli>);

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Result<Self> {
        if !(1..=3).contains(&letters.len()) {
            let word: String = letters.iter().map(|p| p.letter()).collect();
            return Err(Error::InvalidPauli(word));
        }
        Ok(Self(letters))
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.0
    }

    pub fn n_qubits(&self) -> usize {
        self.0.len()
    }

    /// Two Pauli strings commute iff they anticommute on an even number of
    /// positions.
    pub fn commutes_with(&self, other: &Self) -> bool {
        let clashes = self
            .0
            .iter()
            .zip(&other.0)
            .filter(|(a, b)| **a != Pauli::I && **b != Pauli::I && a != b)
            .count();
        clashes % 2 == 0
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| match c {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                _ => Err(Error::InvalidPauli(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() || letters.len() > 3 {
            return Err(Error::InvalidPauli(s.to_string()));
        }
        Ok(Self(letters))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{}", p.letter())?;
        }
        Ok(())
    }
}

/// Real multiple of a Pauli string.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub coefficient: f64,
    pub string: PauliString,
}

impl PauliTerm {
    pub fn new(coefficient: f64, string: PauliString) -> Self {
        Self {
            coefficient,
            string,
        }
    }

    /// Convenience constructor from a literal word such as `"XXZ"`.
    pub fn parse(coefficient: f64, word: &str) -> Result<Self> {
        Ok(Self::new(coefficient, word.parse()?))
    }
}

/// Kronecker product of the letters, qubit 1 most significant.
pub fn pauli_matrix(s: &PauliString) -> ComplexMatrix {
    s.0.iter()
        .skip(1)
        .fold(s.0[0].matrix(), |acc, p| acc.kron(&p.matrix()))
}

/// `exp(i * sum_k c_k P_k)` for pairwise commuting Pauli terms on
/// `n_qubits` qubits.
///
/// The sum is Hermitian, so the exponential is taken through its
/// eigendecomposition. Commutation is checked numerically on the matrices.
pub fn exp_commuting_sum(n_qubits: usize, terms: &[PauliTerm]) -> Result<ComplexMatrix> {
    let dim = 1usize << n_qubits;
    for t in terms {
        if t.string.n_qubits() != n_qubits {
            return Err(Error::DimensionMismatch {
                expected: n_qubits,
                found: t.string.n_qubits(),
            });
        }
        if !t.coefficient.is_finite() {
            return Err(Error::NonFinite);
        }
    }
    let mats: Vec<ComplexMatrix> = terms.iter().map(|t| pauli_matrix(&t.string)).collect();
    for i in 0..mats.len() {
        for j in (i + 1)..mats.len() {
            let comm = (&mats[i] * &mats[j]).sub(&(&mats[j] * &mats[i]));
            if comm.frobenius_norm() > COMMUTE_TOL {
                return Err(Error::NonCommuting(
                    terms[i].string.to_string(),
                    terms[j].string.to_string(),
                ));
            }
        }
    }
    if terms.is_empty() {
        return Ok(ComplexMatrix::identity(dim));
    }
    let mut h = ComplexMatrix::zeros(dim);
    for (t, m) in terms.iter().zip(&mats) {
        h = h.add(&m.scale(t.coefficient.into()));
    }
    let (vals, v) = jacobi_hermitian_eigen(h.as_dmatrix());
    let phases = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        dim,
        vals.iter().map(|&l| Complex64::from_polar(1.0, l)),
    ));
    Ok(ComplexMatrix::from_dmatrix(&v * phases * v.adjoint()).expect("finite exponential"))
}

/// The Bell-phase basis in which `XX`, `YY`, `ZZ` are simultaneously real
/// diagonal and local `SU(2) x SU(2)` becomes `SO(4)`.
pub fn magic_basis() -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    let r = Complex64::new(s, 0.0);
    let i = Complex64::new(0.0, s);
    ComplexMatrix::from_rows(&[
        vec![r, z, z, i],
        vec![z, i, r, z],
        vec![z, i, -r, z],
        vec![r, z, z, -i],
    ])
    .expect("constant matrix")
}

// Column k holds the magic-basis diagonal of XX, YY, ZZ, II respectively.
static EIGEN_PATTERN: LazyLock<(Matrix4<f64>, Matrix4<f64>)> = LazyLock::new(|| {
    let mb = magic_basis();
    let mbh = mb.adjoint();
    let mut pattern = Matrix4::zeros();
    for (k, word) in ["XX", "YY", "ZZ", "II"].iter().enumerate() {
        let p = pauli_matrix(&word.parse().expect("literal"));
        let d = &(&mbh * &p) * &mb;
        for row in 0..4 {
            pattern[(row, k)] = d[(row, row)].re;
        }
    }
    let inverse = pattern.try_inverse().expect("magic pattern is invertible");
    (pattern, inverse)
});

/// Eigenphases `(l_1..l_4)` of `a XX + b YY + c ZZ + d II` in magic-basis
/// order.
pub fn eigenphases_from_coeffs(coeffs: [f64; 4]) -> [f64; 4] {
    let v = EIGEN_PATTERN.0 * Vector4::from(coeffs);
    [v[0], v[1], v[2], v[3]]
}

/// Inverse of [`eigenphases_from_coeffs`]: the `(a, b, c, d)` with
/// `M_B^dag (a XX + b YY + c ZZ + d II) M_B = diag(phases)`.
pub fn coeffs_from_eigenphases(phases: [f64; 4]) -> [f64; 4] {
    let v = EIGEN_PATTERN.1 * Vector4::from(phases);
    [v[0], v[1], v[2], v[3]]
}
