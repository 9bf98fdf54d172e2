use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense square complex matrix.
///
/// Entries are always finite. Indexing is `(row, col)`. For multi-qubit
/// operators the basis index uses qubit 1 as the most significant bit.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    /// Builds a `dim x dim` matrix from row-major entries.
    pub fn from_row_major(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::NotSquare { rows: 0, cols: 0 });
        }
        if entries.len() != dim * dim {
            return Err(Error::BadLength {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Self::from_dmatrix(DMatrix::from_row_slice(dim, dim, &entries))
    }

    /// Builds a matrix from nested rows; rejects ragged or non-square input.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        for r in rows {
            if r.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: r.len(),
                });
            }
        }
        Self::from_row_major(n, rows.concat())
    }

    /// Wraps an nalgebra matrix after checking shape and finiteness.
    pub fn from_dmatrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(m))
    }

    // Internal constructor for results of arithmetic on valid matrices.
    pub(crate) fn wrap(m: DMatrix<Complex64>) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        Self(m)
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self(DMatrix::from_fn(dim, dim, f))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, |i, j| {
            if i == j {
                diag[i]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// 2x2 matrix from entries `[[a, b], [c, d]]`.
    pub fn mat2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self(DMatrix::from_row_slice(2, 2, &[a, b, c, d]))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.0
    }

    /// Row-major copy of the entries.
    pub fn to_row_major(&self) -> Vec<Complex64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self(&self.0 * s)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    /// Kronecker product with `self` as the more significant factor.
    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn determinant(&self) -> Complex64 {
        self.0.clone().determinant()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Square sub-block of size `size` starting at `(row, col)`.
    pub fn block(&self, row: usize, col: usize, size: usize) -> Self {
        Self(self.0.view((row, col), (size, size)).into_owned())
    }

    /// Block-diagonal matrix `diag(self, other)`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (n, m) = (self.dim(), other.dim());
        let mut out = DMatrix::zeros(n + m, n + m);
        out.view_mut((0, 0), (n, n)).copy_from(&self.0);
        out.view_mut((n, n), (m, m)).copy_from(&other.0);
        Self(out)
    }

    /// Assembles a matrix from four equally sized blocks.
    pub fn from_blocks(b11: &Self, b12: &Self, b21: &Self, b22: &Self) -> Self {
        let m = b11.dim();
        let mut out = DMatrix::zeros(2 * m, 2 * m);
        out.view_mut((0, 0), (m, m)).copy_from(&b11.0);
        out.view_mut((0, m), (m, m)).copy_from(&b12.0);
        out.view_mut((m, 0), (m, m)).copy_from(&b21.0);
        out.view_mut((m, m), (m, m)).copy_from(&b22.0);
        Self(out)
    }

    /// Applies a basis permutation: `out[perm[i], perm[j]] = self[i, j]`.
    pub fn permute_basis(&self, perm: &[usize]) -> Self {
        let n = self.dim();
        let mut out = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(perm[i], perm[j])] = self.0[(i, j)];
            }
        }
        Self(out)
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        self.0.column(j).iter().copied().collect()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.0[idx]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut Complex64 {
        &mut self.0[idx]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "matrix product dimension mismatch");
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self * &rhs
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim(), self.dim())?;
        for i in 0..self.dim() {
            write!(f, "  ")?;
            for j in 0..self.dim() {
                let z = self.0[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// `true` iff `||m^dag m - I||_F <= tol`.
pub fn is_unitary(m: &ComplexMatrix, tol: f64) -> bool {
    unitarity_deviation(m) <= tol
}

/// `||m^dag m - I||_F`.
pub fn unitarity_deviation(m: &ComplexMatrix) -> f64 {
    let n = m.dim();
    (&m.adjoint() * m)
        .sub(&ComplexMatrix::identity(n))
        .frobenius_norm()
}

pub(crate) fn require_unitary(m: &ComplexMatrix, tol: f64) -> Result<()> {
    let deviation = unitarity_deviation(m);
    if deviation <= tol {
        Ok(())
    } else {
        Err(Error::NotUnitary { deviation })
    }
}

/// Minimum over real `phi` of `||u - e^{i phi} v||_F`.
///
/// The optimal phase is `arg tr(v^dag u)`; the residual is then evaluated
/// entrywise, which keeps full precision near zero (the closed form
/// `sqrt(2n - 2|tr(u^dag v)|)` bottoms out around `sqrt(n * eps)`).
pub fn distance_up_to_phase(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    let overlap: Complex64 = u.0.iter().zip(v.0.iter()).map(|(a, b)| b.conj() * a).sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let sq: f64 =
        u.0.iter()
            .zip(v.0.iter())
            .map(|(a, b)| (a - phase * b).norm_sqr())
            .sum();
    Ok(sq.sqrt())
}
