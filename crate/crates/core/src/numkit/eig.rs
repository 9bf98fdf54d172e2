use std::f64::consts::PI;

use nalgebra::linalg::Schur;
use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Normality threshold for [`eig_normal`].
pub const NORMALITY_TOL: f64 = 1e-8;

const TIE_TOL: f64 = 1e-12;

/// Eigendecomposition `M = V diag(values) V^dag` of a normal matrix.
#[derive(Debug, Clone)]
pub struct EigResult {
    pub values: Vec<Complex64>,
    /// Unitary matrix whose columns are the eigenvectors.
    pub vectors: ComplexMatrix,
}

/// Eigendecomposition of a normal matrix through the complex Schur form.
///
/// For normal input the triangular Schur factor is diagonal, so the Schur
/// vectors are a unitary eigenbasis even for repeated eigenvalues.
/// Eigenvalues come back sorted by phase angle in `[-pi, pi)`, then by
/// magnitude; ties keep their Schur order.
pub fn eig_normal(m: &ComplexMatrix) -> Result<EigResult> {
    let mh = m.adjoint();
    let deviation = (&mh * m).sub(&(m * &mh)).frobenius_norm();
    if deviation > NORMALITY_TOL {
        return Err(Error::NotNormal { deviation });
    }
    let n = m.dim();
    let schur = Schur::try_new(m.as_dmatrix().clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("Schur iteration did not converge".into()))?;
    let (q, t) = schur.unpack();
    let raw: Vec<Complex64> = (0..n).map(|k| t[(k, k)]).collect();

    let order = sorted_order(&raw);
    let values = order.iter().map(|&k| raw[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, j| q[(i, order[j])]);
    Ok(EigResult { values, vectors })
}

fn phase_key(z: Complex64) -> f64 {
    let a = z.arg();
    if a >= PI {
        a - 2.0 * PI
    } else {
        a
    }
}

// Stable insertion sort; the tolerance-aware comparison is not a total
// order, so the std sorts are avoided.
fn sorted_order(values: &[Complex64]) -> Vec<usize> {
    let before = |a: Complex64, b: Complex64| {
        let (pa, pb) = (phase_key(a), phase_key(b));
        if (pa - pb).abs() > TIE_TOL {
            return pa < pb;
        }
        let (ma, mb) = (a.norm(), b.norm());
        (ma - mb).abs() > TIE_TOL && ma < mb
    };
    let mut order: Vec<usize> = Vec::with_capacity(values.len());
    for k in 0..values.len() {
        let pos = order
            .iter()
            .position(|&j| before(values[k], values[j]))
            .unwrap_or(order.len());
        order.insert(pos, k);
    }
    order
}
