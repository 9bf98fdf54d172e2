//! Jacobi-rotation kernels for small dense complex matrices.
//!
//! Both routines sweep plane rotations until every pair of columns (or
//! off-diagonal entry) is negligible. They are slow for large inputs but
//! accurate to working precision, which matters more here than speed.

use nalgebra::DMatrix;
use num_complex::Complex64;

const MAX_SWEEPS: usize = 100;

/// Thin SVD `a = u . diag(sigma) . v^dag` of an `m x n` matrix with `m >= n`,
/// computed by one-sided (Hestenes) Jacobi.
///
/// Singular values are sorted descending. `u` is `m x n` with orthonormal
/// columns (completed arbitrarily where `sigma` vanishes); `v` is `n x n`
/// unitary.
pub(crate) struct Svd {
    pub u: DMatrix<Complex64>,
    pub sigma: Vec<f64>,
    pub v: DMatrix<Complex64>,
}

pub(crate) fn svd(a: &DMatrix<Complex64>) -> Svd {
    let (m, n) = a.shape();
    assert!(m >= n, "svd expects a tall or square matrix");
    let mut w = a.clone();
    let mut v = DMatrix::<Complex64>::identity(n, n);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dotc(&w.column(q));
                let g = gamma.norm();
                if g <= f64::EPSILON * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                let (c, s, ph) = rotation(alpha, beta, gamma);
                rotate_columns(&mut w, p, q, c, s, ph);
                rotate_columns(&mut v, p, q, c, s, ph);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sigma: Vec<f64> = (0..n).map(|j| w.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]));
    let w = DMatrix::from_fn(m, n, |i, j| w[(i, order[j])]);
    let v = DMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    sigma = order.iter().map(|&j| sigma[j]).collect();

    let scale = sigma.first().copied().unwrap_or(0.0);
    let mut u = DMatrix::zeros(m, n);
    let mut filled = Vec::new();
    for (j, &s) in sigma.iter().enumerate() {
        if s > f64::EPSILON * scale * (n as f64) && s > 0.0 {
            let col = w.column(j) / Complex64::from(s);
            u.set_column(j, &col);
            filled.push(j);
        }
    }
    complete_orthonormal(&mut u, &filled);
    Svd { u, sigma, v }
}

/// Eigendecomposition `h = v . diag(lambda) . v^dag` of a Hermitian matrix by
/// cyclic two-sided Jacobi. Eigenvalues are returned ascending.
pub(crate) fn hermitian_eigen(h: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let n = h.nrows();
    let mut a = (h + h.adjoint()) * Complex64::from(0.5);
    let mut v = DMatrix::<Complex64>::identity(n, n);
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum();
        let diag: f64 = (0..n).map(|i| a[(i, i)].norm_sqr()).sum();
        if off <= (f64::EPSILON * f64::EPSILON) * diag.max(f64::MIN_POSITIVE) || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.norm() == 0.0 {
                    continue;
                }
                // Gram-style rotation on the 2x2 block [[app, apq], [conj, aqq]].
                let (c, s, ph) = rotation(a[(p, p)].re, a[(q, q)].re, apq);
                rotate_columns(&mut a, p, q, c, s, ph);
                rotate_rows(&mut a, p, q, c, s, ph);
                rotate_columns(&mut v, p, q, c, s, ph);
            }
        }
    }
    let vals: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
    let v = DMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    (order.iter().map(|&j| vals[j]).collect(), v)
}

// Rotation that zeroes the (p, q) entry of the Hermitian 2x2 block
// [[alpha, gamma], [conj(gamma), beta]]: returns (c, s, e^{i arg gamma}).
fn rotation(alpha: f64, beta: f64, gamma: Complex64) -> (f64, f64, Complex64) {
    let g = gamma.norm();
    let ph = gamma / g;
    let zeta = (beta - alpha) / (2.0 * g);
    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, c * t, ph)
}

// Columns p, q <- [x_p, x_q] . J with J = [[c, s], [-s e^{-i ph}, c e^{-i ph}]].
fn rotate_columns(x: &mut DMatrix<Complex64>, p: usize, q: usize, c: f64, s: f64, ph: Complex64) {
    let phc = ph.conj();
    for i in 0..x.nrows() {
        let xp = x[(i, p)];
        let xq = x[(i, q)] * phc;
        x[(i, p)] = xp * c - xq * s;
        x[(i, q)] = xp * s + xq * c;
    }
}

// Rows p, q <- J^dag . [x_p; x_q], the left half of a similarity transform.
fn rotate_rows(x: &mut DMatrix<Complex64>, p: usize, q: usize, c: f64, s: f64, ph: Complex64) {
    for j in 0..x.ncols() {
        let xp = x[(p, j)];
        let xq = x[(q, j)] * ph;
        x[(p, j)] = xp * c - xq * s;
        x[(q, j)] = xp * s + xq * c;
    }
}

// Fills the columns of `u` not listed in `filled` with an orthonormal
// completion drawn from the standard basis (modified Gram-Schmidt, twice).
fn complete_orthonormal(u: &mut DMatrix<Complex64>, filled: &[usize]) {
    let (m, n) = u.shape();
    let mut basis: Vec<usize> = filled.to_vec();
    let mut candidate = 0;
    for j in 0..n {
        if filled.contains(&j) {
            continue;
        }
        loop {
            assert!(
                candidate < m,
                "orthonormal completion ran out of candidates"
            );
            let mut col = nalgebra::DVector::<Complex64>::zeros(m);
            col[candidate] = Complex64::from(1.0);
            candidate += 1;
            for _ in 0..2 {
                for &k in &basis {
                    let proj = u.column(k).dotc(&col);
                    col -= u.column(k) * proj;
                }
            }
            let norm = col.norm();
            if norm > 0.5 {
                u.set_column(j, &(col / Complex64::from(norm)));
                basis.push(j);
                break;
            }
        }
    }
}
