use nalgebra::DMatrix;
use num_complex::Complex64;

use super::jacobi;
use super::matrix::{require_unitary, ComplexMatrix};
use crate::error::{Error, Result};

/// Unitarity tolerance applied to CSD input.
pub const CSD_INPUT_TOL: f64 = 1e-8;

/// Cosine-sine decomposition of a `2m x 2m` unitary:
///
/// ```text
/// U = diag(l1, l2) . [[C, S], [-S, C]] . diag(r1, r2)
/// ```
///
/// with `C = diag(cos theta)`, `S = diag(sin theta)`, angles in `[0, pi/2]`
/// sorted ascending.
#[derive(Debug, Clone)]
pub struct CsdResult {
    pub l1: ComplexMatrix,
    pub l2: ComplexMatrix,
    pub thetas: Vec<f64>,
    pub r1: ComplexMatrix,
    pub r2: ComplexMatrix,
}

impl CsdResult {
    /// The `2m x 2m` middle factor `[[C, S], [-S, C]]`.
    pub fn core(&self) -> ComplexMatrix {
        let cs: Vec<Complex64> = self.thetas.iter().map(|t| t.cos().into()).collect();
        let sn: Vec<Complex64> = self.thetas.iter().map(|t| t.sin().into()).collect();
        let c = ComplexMatrix::from_diagonal(&cs);
        let s = ComplexMatrix::from_diagonal(&sn);
        ComplexMatrix::from_blocks(&c, &s, &s.scale((-1.0).into()), &c)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let left = self.l1.direct_sum(&self.l2);
        let right = self.r1.direct_sum(&self.r2);
        &(&left * &self.core()) * &right
    }
}

/// Cosine-sine decomposition with `m x m` blocks.
///
/// The top-left block is factored by SVD, `u11 = l1 C r1`. The lower-left
/// block then satisfies `-u21 r1^dag = l2 S` with orthogonal columns, so `l2`
/// is read off by a QR factorization that visits columns in order of
/// decreasing sine. Large-sine columns fix their directions first and the
/// small-sine ones (including exact zeros, where the direction is free) are
/// orthonormalized jointly against them. `r2` is the least-squares solution
/// of `[l1 S; l2 C] r2 = [u12; u22]`, whose coefficient matrix has
/// orthonormal columns.
pub fn csd(u: &ComplexMatrix, m: usize) -> Result<CsdResult> {
    let n = u.dim();
    if !n.is_multiple_of(2) {
        return Err(Error::OddDimension(n));
    }
    if 2 * m != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: 2 * m,
        });
    }
    require_unitary(u, CSD_INPUT_TOL)?;

    let u11 = u.block(0, 0, m);
    let u12 = u.block(0, m, m);
    let u21 = u.block(m, 0, m);
    let u22 = u.block(m, m, m);

    let svd = jacobi::svd(u11.as_dmatrix());
    let mut l1 = svd.u;
    let mut r1 = svd.v.adjoint();
    let mut cos: Vec<f64> = svd.sigma.iter().map(|&c| c.min(1.0)).collect();

    refine_small_angles(&u21, &mut l1, &mut r1, &mut cos);

    // Columns of x are l2 scaled by the sines.
    let x = -(u21.as_dmatrix() * r1.adjoint());
    let sin: Vec<f64> = (0..m).map(|j| x.column(j).norm()).collect();
    let thetas: Vec<f64> = (0..m).map(|j| sin[j].atan2(cos[j])).collect();

    // Descending sine order for the QR sweep.
    let mut qr_order: Vec<usize> = (0..m).collect();
    qr_order.sort_by(|&a, &b| sin[b].total_cmp(&sin[a]));
    let permuted = DMatrix::from_fn(m, m, |i, j| x[(i, qr_order[j])]);
    let qr = permuted.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut l2 = DMatrix::zeros(m, m);
    for (k, &col) in qr_order.iter().enumerate() {
        let d = r[(k, k)];
        let ph = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..m {
            l2[(i, col)] = q[(i, k)] * ph;
        }
    }

    let c_diag = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        m,
        thetas.iter().map(|t| Complex64::from(t.cos())),
    ));
    let s_diag = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        m,
        thetas.iter().map(|t| Complex64::from(t.sin())),
    ));
    let r2_raw =
        &s_diag * l1.adjoint() * u12.as_dmatrix() + &c_diag * l2.adjoint() * u22.as_dmatrix();
    let r2 = nearest_isometry(r2_raw);

    let mut out = CsdResult {
        l1: ComplexMatrix::wrap(l1),
        l2: ComplexMatrix::wrap(l2),
        thetas,
        r1: ComplexMatrix::wrap(r1),
        r2: ComplexMatrix::wrap(r2),
    };
    sort_ascending(&mut out);
    Ok(out)
}

// Cosines near 1 are indistinguishable in double precision (1 - s^2/2), so
// the SVD of u11 leaves the small-angle singular vectors mixed. On that
// subspace the sines are the singular values of u21 r1_J^dag, which an SVD
// resolves to absolute precision; rotate l1_J and r1_J into that basis.
fn refine_small_angles(
    u21: &ComplexMatrix,
    l1: &mut DMatrix<Complex64>,
    r1: &mut DMatrix<Complex64>,
    cos: &mut [f64],
) {
    let m = cos.len();
    let small: Vec<usize> = (0..m)
        .filter(|&j| cos[j] > std::f64::consts::FRAC_1_SQRT_2)
        .collect();
    if small.is_empty() {
        return;
    }
    let k = small.len();
    let r1_j = DMatrix::from_fn(k, m, |i, j| r1[(small[i], j)]);
    let y = u21.as_dmatrix() * r1_j.adjoint();
    let vr = jacobi::svd(&y).v;

    let new_r1_j = vr.adjoint() * &r1_j;
    // l1_J C_J Vr has orthogonal columns of norm cos'_j >= 1/sqrt(2).
    let l1_j = DMatrix::from_fn(m, k, |i, j| l1[(i, small[j])] * cos[small[j]]);
    let z = l1_j * &vr;
    let norms: Vec<f64> = (0..k).map(|j| z.column(j).norm()).collect();
    let q = nearest_isometry(DMatrix::from_fn(m, k, |i, j| z[(i, j)] / norms[j]));
    for (jj, &j) in small.iter().enumerate() {
        for i in 0..m {
            l1[(i, j)] = q[(i, jj)];
            r1[(j, i)] = new_r1_j[(jj, i)];
        }
        cos[j] = norms[jj].min(1.0);
    }
}

// Nearest matrix with orthonormal columns (polar factor).
fn nearest_isometry(m: DMatrix<Complex64>) -> DMatrix<Complex64> {
    let svd = jacobi::svd(&m);
    svd.u * svd.v.adjoint()
}

// SVD order is descending in cosine; recomputed angles can swap within a
// cluster, so restore a strict ascending order with a joint permutation.
fn sort_ascending(res: &mut CsdResult) {
    let m = res.thetas.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| res.thetas[a].total_cmp(&res.thetas[b]));
    if order.iter().enumerate().all(|(k, &j)| k == j) {
        return;
    }
    let cols = |mat: &ComplexMatrix| ComplexMatrix::from_fn(m, |i, j| mat[(i, order[j])]);
    let rows = |mat: &ComplexMatrix| ComplexMatrix::from_fn(m, |i, j| mat[(order[i], j)]);
    res.l1 = cols(&res.l1);
    res.l2 = cols(&res.l2);
    res.r1 = rows(&res.r1);
    res.r2 = rows(&res.r2);
    res.thetas = order.iter().map(|&j| res.thetas[j]).collect();
}
