//! Khaneja-Glaser factorization of a three-qubit unitary.

use num_complex::Complex64;

use super::templates::{m_core, n_core};
use crate::error::Result;
use crate::numkit::{csd, eig_normal, require_unitary, ComplexMatrix};
use crate::pauli::{coeffs_from_eigenphases, magic_basis};

/// Unitarity tolerance for [`kg_decompose`] input.
pub const KG_INPUT_TOL: f64 = 1e-8;

/// `u = e^{i phase} (a4 (x) b4) N(u2) (a3 (x) b3) M(v) (a2 (x) b2) N(u1) (a1 (x) b1)`.
///
/// The `a` factors act on qubits 1, 2 and the `b` factors on qubit 3;
/// `(a1, b1)` acts first in time.
#[derive(Debug, Clone)]
pub struct KgFactors {
    pub a1: ComplexMatrix,
    pub a2: ComplexMatrix,
    pub a3: ComplexMatrix,
    pub a4: ComplexMatrix,
    pub b1: ComplexMatrix,
    pub b2: ComplexMatrix,
    pub b3: ComplexMatrix,
    pub b4: ComplexMatrix,
    pub u1_params: [f64; 3],
    pub u2_params: [f64; 3],
    pub v_params: [f64; 4],
    pub phase: f64,
}

/// Evaluates the factor product with the Pauli-exponential cores.
pub fn reconstruct(f: &KgFactors) -> ComplexMatrix {
    let [a, b, c] = f.u1_params;
    let u1 = n_core(a, b, c);
    let [a, b, c] = f.u2_params;
    let u2 = n_core(a, b, c);
    let [a, b, c, d] = f.v_params;
    let v = m_core(a, b, c, d);
    let seq = [
        f.a1.kron(&f.b1),
        u1,
        f.a2.kron(&f.b2),
        v,
        f.a3.kron(&f.b3),
        u2,
        f.a4.kron(&f.b4),
    ];
    seq.iter()
        .fold(ComplexMatrix::identity(8), |acc, m| m * &acc)
        .scale(Complex64::from_polar(1.0, f.phase))
}

// Basis index q1 q2 q3 -> q3 q1 q2, putting qubit 3 in charge of the 4x4
// blocks.
fn q3_major(u: &ComplexMatrix) -> ComplexMatrix {
    let perm: Vec<usize> = (0..8).map(|i| ((i & 1) << 2) | (i >> 1)).collect();
    u.permute_basis(&perm)
}

/// First level: `u_perm = diag(f1, f2) . exp(i X (x) Theta) . diag(g1, g2)` in
/// q3-major order, with `Theta` expressed in the magic basis.
#[derive(Debug, Clone)]
pub(crate) struct LevelOne {
    pub f: (ComplexMatrix, ComplexMatrix),
    pub g: (ComplexMatrix, ComplexMatrix),
    pub v_params: [f64; 4],
}

pub(crate) fn level_one(u: &ComplexMatrix) -> Result<LevelOne> {
    let up = q3_major(u);
    let cs = csd(&up, 4)?;
    // [[C, S], [-S, C]] = diag(I, iI) [[C, iS], [iS, C]] diag(I, -iI), and
    // the middle factor is exp(i X (x) Theta) = (I (x) M_B^dag) M (I (x) M_B).
    let mb = magic_basis();
    let mbh = mb.adjoint();
    let i = Complex64::new(0.0, 1.0);
    let f1 = &cs.l1 * &mbh;
    let f2 = (&cs.l2 * &mbh).scale(i);
    let g1 = &mb * &cs.r1;
    let g2 = (&mb * &cs.r2).scale(-i);
    let t = &cs.thetas;
    let v_params = coeffs_from_eigenphases([t[0], t[1], t[2], t[3]]);
    Ok(LevelOne {
        f: (f1, f2),
        g: (g1, g2),
        v_params,
    })
}

// diag(f1, f2) in q3-major order equals
// (later (x) I) . exp(i mu Z_3) . N(params) . (earlier (x) I).
struct Demux {
    earlier: ComplexMatrix,
    b: ComplexMatrix,
    params: [f64; 3],
    later: ComplexMatrix,
}

// f1 f2^dag = V e^{i phi} V^dag; with D = e^{i phi / 2} and W = D^dag V^dag f1,
// f1 = V D W and f2 = V D^dag W, so diag(f1, f2) = V exp(i Z (x) Delta) W with
// Delta = phi / 2. Its trace part is a Z rotation on qubit 3; the traceless
// part is an N core after conjugation by the magic basis.
fn demultiplex(f1: &ComplexMatrix, f2: &ComplexMatrix) -> Result<Demux> {
    let eig = eig_normal(&(f1 * &f2.adjoint()))?;
    let v = eig.vectors;
    let delta: Vec<f64> = eig.values.iter().map(|z| z.arg() / 2.0).collect();
    let d_adj: Vec<Complex64> = delta
        .iter()
        .map(|&t| Complex64::from_polar(1.0, -t))
        .collect();
    let w = &(&ComplexMatrix::from_diagonal(&d_adj) * &v.adjoint()) * f1;
    let mu = delta.iter().sum::<f64>() / 4.0;
    let [a, b, c, _] =
        coeffs_from_eigenphases([delta[0] - mu, delta[1] - mu, delta[2] - mu, delta[3] - mu]);
    let mb = magic_basis();
    Ok(Demux {
        earlier: &mb * &w,
        b: ComplexMatrix::from_diagonal(&[
            Complex64::from_polar(1.0, mu),
            Complex64::from_polar(1.0, -mu),
        ]),
        params: [a, b, c],
        later: &v * &mb.adjoint(),
    })
}

/// Factorizes an 8x8 unitary into the seven-layer form of [`KgFactors`].
///
/// A cosine-sine decomposition with qubit 3 selecting the blocks yields the
/// `M` core between two block-diagonal (qubit-3-multiplexed) factors; each
/// of those is demultiplexed into two-qubit factors around an `N` core.
pub fn kg_decompose(u: &ComplexMatrix) -> Result<KgFactors> {
    if u.dim() != 8 {
        return Err(crate::Error::DimensionMismatch {
            expected: 8,
            found: u.dim(),
        });
    }
    require_unitary(u, KG_INPUT_TOL)?;
    let phase = u.determinant().arg() / 8.0;
    let u0 = u.scale(Complex64::from_polar(1.0, -phase));
    let lvl = level_one(&u0)?;
    let early = demultiplex(&lvl.g.0, &lvl.g.1)?;
    let late = demultiplex(&lvl.f.0, &lvl.f.1)?;
    let i2 = ComplexMatrix::identity(2);
    Ok(KgFactors {
        a1: early.earlier,
        b1: early.b,
        u1_params: early.params,
        a2: early.later,
        b2: i2.clone(),
        v_params: lvl.v_params,
        a3: late.earlier,
        b3: late.b,
        u2_params: late.params,
        a4: late.later,
        b4: i2,
        phase,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::{distance_up_to_phase, haar_unitary};

    fn check(u: &ComplexMatrix, tol: f64) -> KgFactors {
        let f = kg_decompose(u).unwrap();
        let e = reconstruct(&f).sub(u).frobenius_norm();
        assert!(e <= tol, "reconstruction {e:e}");
        f
    }

    #[test]
    fn identity() {
        check(&ComplexMatrix::identity(8), 1e-10);
    }

    #[test]
    fn local_products() {
        for seed in 0..20 {
            let u = haar_unitary(2, seed)
                .kron(&haar_unitary(2, seed + 100))
                .kron(&haar_unitary(2, seed + 200));
            check(&u, 1e-9);
        }
    }

    #[test]
    fn haar_samples() {
        for seed in 0..100 {
            check(&haar_unitary(8, seed), 1e-8);
        }
    }

    #[test]
    fn level_one_sides_are_block_diagonal() {
        for seed in 0..50 {
            let u = haar_unitary(8, seed);
            let lvl = level_one(&u).unwrap();
            let up = q3_major(&u);
            let [a, b, c, d] = lvl.v_params;
            let m = q3_major(&m_core(a, b, c, d));
            let g = lvl.g.0.direct_sum(&lvl.g.1);
            // f = up . g^dag . m^dag must come out block-diagonal.
            let f = &(&up * &g.adjoint()) * &m.adjoint();
            let off = f.block(0, 4, 4).frobenius_norm() + f.block(4, 0, 4).frobenius_norm();
            assert!(off <= 1e-10, "{off:e}");
            let expect = lvl.f.0.direct_sum(&lvl.f.1);
            assert!(f.sub(&expect).frobenius_norm() <= 1e-10);
        }
    }

    #[test]
    fn sensitive_to_factor_perturbation() {
        let u = haar_unitary(8, 3);
        let mut f = kg_decompose(&u).unwrap();
        let x = crate::pauli::Pauli::X.matrix();
        f.b3 = &x * &f.b3;
        assert!(distance_up_to_phase(&reconstruct(&f), &u).unwrap() > 0.1);
    }

    #[test]
    fn all_identity_factors() {
        let i4 = ComplexMatrix::identity(4);
        let i2 = ComplexMatrix::identity(2);
        let f = KgFactors {
            a1: i4.clone(),
            a2: i4.clone(),
            a3: i4.clone(),
            a4: i4,
            b1: i2.clone(),
            b2: i2.clone(),
            b3: i2.clone(),
            b4: i2,
            u1_params: [0.0; 3],
            u2_params: [0.0; 3],
            v_params: [0.0; 4],
            phase: 0.0,
        };
        assert_eq!(reconstruct(&f), ComplexMatrix::identity(8));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(kg_decompose(&ComplexMatrix::identity(4)).is_err());
        assert!(kg_decompose(&ComplexMatrix::identity(8).scale(1.5.into())).is_err());
    }
}
