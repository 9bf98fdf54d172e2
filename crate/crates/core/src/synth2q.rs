//! Two-qubit Cartan (KAK) decomposition and its 3-CNOT realization.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::circuit::{rz, Circuit, Gate};
use crate::error::{Error, Result};
use crate::numkit::{distance_up_to_phase, require_unitary, ComplexMatrix};
use crate::pauli::{coeffs_from_eigenphases, magic_basis, Pauli};
use crate::synth1q::{zyz, NEGLIGIBLE_ANGLE};

/// Unitarity tolerance for [`kak`] input.
pub const KAK_INPUT_TOL: f64 = 1e-8;

/// One-qubit and two-qubit factors this close to identity (up to phase)
/// emit no gates.
pub const IDENTITY_TOL: f64 = 1e-12;

// Mixing weights for the real and imaginary parts of u'^T u'. Irrational
// values avoid accidental eigenvalue collisions; later entries are retries.
const MIXING_WEIGHTS: [f64; 5] = [
    0.618_033_988_749_895,
    1.324_717_957_244_746,
    0.211_324_865_405_187,
    std::f64::consts::E,
    0.414_213_562_373_095,
];

/// `u = e^{i phase} (left_a (x) left_b) exp(i(a XX + b YY + c ZZ)) (right_a (x) right_b)`,
/// with `pi/4 >= a >= b >= |c|`.
#[derive(Debug, Clone)]
pub struct KakFactors {
    pub left_a: ComplexMatrix,
    pub left_b: ComplexMatrix,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub right_a: ComplexMatrix,
    pub right_b: ComplexMatrix,
    pub phase: f64,
}

impl KakFactors {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let left = self.left_a.kron(&self.left_b);
        let right = self.right_a.kron(&self.right_b);
        (&(&left * &canonical_core(self.a, self.b, self.c)) * &right)
            .scale(Complex64::from_polar(1.0, self.phase))
    }
}

/// `exp(i(a XX + b YY + c ZZ))`, built from its magic-basis diagonal.
pub fn canonical_core(a: f64, b: f64, c: f64) -> ComplexMatrix {
    let phases = crate::pauli::eigenphases_from_coeffs([a, b, c, 0.0]);
    let d: Vec<Complex64> = phases
        .iter()
        .map(|&p| Complex64::from_polar(1.0, p))
        .collect();
    let mb = magic_basis();
    &(&mb * &ComplexMatrix::from_diagonal(&d)) * &mb.adjoint()
}

fn pauli2(p: Pauli) -> ComplexMatrix {
    p.matrix()
}

// exp(i pi/4 P) for a one-qubit Pauli P.
fn quarter_turn(p: Pauli) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::identity(2)
        .scale(s.into())
        .add(&p.matrix().scale(Complex64::new(0.0, s)))
}

fn real_part(m: &ComplexMatrix) -> Matrix4<f64> {
    Matrix4::from_fn(|i, j| m[(i, j)].re)
}

fn imag_part(m: &ComplexMatrix) -> Matrix4<f64> {
    Matrix4::from_fn(|i, j| m[(i, j)].im)
}

fn complexify(m: &Matrix4<f64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(4, |i, j| m[(i, j)].into())
}

// Real orthogonal Q (det +1) with Q^T s Q diagonal for a complex symmetric
// unitary s. Re(s) and Im(s) are commuting real symmetric matrices, so a
// generic combination of them has the joint eigenbasis.
fn real_diagonalizer(s: &ComplexMatrix) -> Matrix4<f64> {
    let (re, im) = (real_part(s), imag_part(s));
    let mut best: Option<(f64, Matrix4<f64>)> = None;
    for w in MIXING_WEIGHTS {
        let eig = SymmetricEigen::new(re + im * w);
        let q = eig.eigenvectors;
        let d = q.transpose() * re * q;
        let e = q.transpose() * im * q;
        let off: f64 = (0..4)
            .flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| d[(i, j)].powi(2) + e[(i, j)].powi(2))
            .sum::<f64>()
            .sqrt();
        if best.as_ref().is_none_or(|(b, _)| off < *b) {
            best = Some((off, q));
        }
        if off <= 1e-13 {
            break;
        }
    }
    let mut q = best.expect("at least one weight").1;
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}

// Splits k = x (x) y for a 4x4 matrix that is (numerically) a tensor product,
// using the largest 2x2 block as the reference for y.
pub(crate) fn tensor_factor(k: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let blocks: Vec<ComplexMatrix> = (0..4)
        .map(|t| k.block(2 * (t / 2), 2 * (t % 2), 2))
        .collect();
    let (best, _) = blocks
        .iter()
        .enumerate()
        .map(|(t, b)| (t, b.frobenius_norm()))
        .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    let scale = blocks[best].determinant().sqrt();
    let y = blocks[best].scale(scale.inv());
    let yh = y.adjoint();
    let x = ComplexMatrix::from_fn(2, |i, j| (&yh * &blocks[2 * i + j]).trace() / 2.0);
    (x, y)
}

/// KAK decomposition of a 4x4 unitary.
///
/// The determinant phase is removed, then in the magic basis the matrix is
/// `O1 D O2` with `O1, O2` real orthogonal. `O2` diagonalizes `u'^T u'`,
/// `D` is its square root with half-angles in `(-pi/2, pi/2]`, and `O1`
/// follows. The diagonal phases give `(a, b, c, d)`; the result is then
/// moved into the Weyl chamber by shifts of `pi/2` and local Clifford
/// conjugations folded into the local factors.
pub fn kak(u: &ComplexMatrix) -> Result<KakFactors> {
    if u.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: u.dim(),
        });
    }
    require_unitary(u, KAK_INPUT_TOL)?;
    let det_phase = u.determinant().arg() / 4.0;
    let u0 = u.scale(Complex64::from_polar(1.0, -det_phase));
    let mb = magic_basis();
    let mbh = mb.adjoint();
    let up = &(&mbh * &u0) * &mb;

    let s = &up.transpose() * &up;
    let q = real_diagonalizer(&s);
    let qc = complexify(&q);
    let diag_s = &(&qc.transpose() * &s) * &qc;
    let mut half: Vec<f64> = (0..4).map(|k| diag_s[(k, k)].arg() / 2.0).collect();
    let d_inv: Vec<Complex64> = half
        .iter()
        .map(|&t| Complex64::from_polar(1.0, -t))
        .collect();
    let o1c = &(&up * &qc) * &ComplexMatrix::from_diagonal(&d_inv);
    let mut o1 = real_part(&o1c);
    if o1.determinant() < 0.0 {
        o1.column_mut(0).neg_mut();
        half[0] += std::f64::consts::PI;
    }
    let o2 = q.transpose();

    let k1 = &(&mb * &complexify(&o1)) * &mbh;
    let k2 = &(&mb * &complexify(&o2)) * &mbh;
    let [a, b, c, d] = coeffs_from_eigenphases([half[0], half[1], half[2], half[3]]);

    let mut st = Canonicalizer {
        k1,
        k2,
        p: [a, b, c],
        phase: det_phase + d,
    };
    st.canonicalize();
    let (left_a, left_b) = tensor_factor(&st.k1);
    let (right_a, right_b) = tensor_factor(&st.k2);
    Ok(KakFactors {
        left_a,
        left_b,
        a: st.p[0],
        b: st.p[1],
        c: st.p[2],
        right_a,
        right_b,
        phase: st.phase,
    })
}

// u = e^{i phase} k1 exp(i(p0 XX + p1 YY + p2 ZZ)) k2, maintained while the
// parameters are moved into the chamber.
struct Canonicalizer {
    k1: ComplexMatrix,
    k2: ComplexMatrix,
    p: [f64; 3],
    phase: f64,
}

const BOUNDARY_TOL: f64 = 1e-12;

const AXES: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

impl Canonicalizer {
    // exp(i p PP) = exp(i (p - pi/2) PP) . i PP.
    fn shift(&mut self, axis: usize, turns: f64) {
        if turns == 0.0 {
            return;
        }
        self.p[axis] -= turns * FRAC_PI_2;
        let pp = pauli2(AXES[axis]).kron(&pauli2(AXES[axis]));
        if (turns as i64).rem_euclid(2) == 1 {
            self.k2 = &pp * &self.k2;
        }
        self.phase += turns * FRAC_PI_2;
    }

    // Conjugation by R (x) R with R = exp(i pi/4 P_third) exchanges the
    // other two axes' terms.
    fn swap(&mut self, i: usize, j: usize) {
        let third = 3 - i - j;
        let r = quarter_turn(AXES[third]);
        let rr = r.kron(&r);
        self.k1 = &self.k1 * &rr.adjoint();
        self.k2 = &rr * &self.k2;
        self.p.swap(i, j);
    }

    // Conjugation by P (x) I negates the two terms whose axes differ from P.
    fn negate_pair(&mut self, keep: usize) {
        let p = pauli2(AXES[keep]).kron(&ComplexMatrix::identity(2));
        self.k1 = &self.k1 * &p;
        self.k2 = &p * &self.k2;
        for (k, v) in self.p.iter_mut().enumerate() {
            if k != keep {
                *v = -*v;
            }
        }
    }

    fn canonicalize(&mut self) {
        for axis in 0..3 {
            // Into (-pi/4, pi/4].
            let mut turns = (self.p[axis] / FRAC_PI_2).round();
            if self.p[axis] - turns * FRAC_PI_2 <= -FRAC_PI_4 {
                turns -= 1.0;
            }
            self.shift(axis, turns);
        }
        // Descending absolute values.
        for (i, j) in [(0, 1), (1, 2), (0, 1)] {
            if self.p[i].abs() < self.p[j].abs() {
                self.swap(i, j);
            }
        }
        if self.p[0] < 0.0 && self.p[1] < 0.0 {
            self.negate_pair(2);
        } else if self.p[0] < 0.0 {
            self.negate_pair(1);
        } else if self.p[1] < 0.0 {
            self.negate_pair(0);
        }
        // On the a = pi/4 face, (pi/4, b, c) and (pi/4, b, -c) are the same
        // class; prefer c >= 0.
        if (self.p[0] - FRAC_PI_4).abs() <= BOUNDARY_TOL && self.p[2] < 0.0 {
            self.shift(0, 1.0);
            self.negate_pair(1);
        }
    }
}

/// Three-CNOT circuit for `exp(i(a XX + b YY + c ZZ))`.
///
/// `circuit` holds the parameter-dependent part; the fixed basis changes at
/// its edges are returned as one-qubit matrices so callers can merge them
/// into neighbouring factors. The exact identity is
/// `(post.0 (x) post.1) . simulate(circuit) . (pre.0 (x) pre.1) = exp(i(...))`.
#[derive(Debug, Clone)]
pub struct CoreCircuit {
    pub circuit: Circuit,
    pub pre: (ComplexMatrix, ComplexMatrix),
    pub post: (ComplexMatrix, ComplexMatrix),
}

impl CoreCircuit {
    pub fn unitary(&self) -> ComplexMatrix {
        let pre = self.pre.0.kron(&self.pre.1);
        let post = self.post.0.kron(&self.post.1);
        &(&post * &crate::circuit::simulate(&self.circuit)) * &pre
    }
}

// Affine angle maps solved offline against the Pauli-exponential oracle and
// frozen; the property tests below re-validate them.
pub fn core2q_circuit(a: f64, b: f64, c: f64) -> CoreCircuit {
    let gates = vec![
        Gate::Cx {
            control: 2,
            target: 1,
        },
        Gate::Rz {
            q: 1,
            theta: 2.0 * c + FRAC_PI_2,
        },
        Gate::Ry {
            q: 2,
            theta: -2.0 * a - FRAC_PI_2,
        },
        Gate::Cx {
            control: 1,
            target: 2,
        },
        Gate::Ry {
            q: 2,
            theta: 2.0 * b + FRAC_PI_2,
        },
        Gate::Cx {
            control: 2,
            target: 1,
        },
    ];
    let circuit = Circuit::from_gates(2, gates, -FRAC_PI_4).expect("fixed template");
    CoreCircuit {
        circuit,
        pre: (ComplexMatrix::identity(2), rz(FRAC_PI_2)),
        post: (rz(-FRAC_PI_2), ComplexMatrix::identity(2)),
    }
}

// Appends the ZYZ gates of `m` on `wire`, returning the phase it carries.
fn emit_local(out: &mut Vec<Gate>, m: &ComplexMatrix, wire: usize) -> Result<f64> {
    let z = zyz(m)?;
    out.extend(z.gates(wire));
    Ok(z.phase)
}

/// Circuit for a 4x4 unitary acting on `wires` (first wire most
/// significant) of an `n_qubits` register: at most 3 CNOTs and 15 rotations.
///
/// The core's edge rotations are merged into the KAK local factors before
/// each local is expanded as ZYZ, so every local costs at most three
/// rotations. Inputs within [`IDENTITY_TOL`] of identity (up to phase) give
/// an empty circuit, and a negligible core emits only the two locals.
pub fn synth_u4(u: &ComplexMatrix, wires: (usize, usize), n_qubits: usize) -> Result<Circuit> {
    let (w1, w2) = wires;
    if w1 == w2 || w1 == 0 || w2 == 0 || w1 > n_qubits || w2 > n_qubits {
        return Err(Error::InvalidGate(format!(
            "wires ({w1}, {w2}) invalid for a {n_qubits}-qubit register"
        )));
    }
    if u.dim() == 4 && distance_up_to_phase(u, &ComplexMatrix::identity(4))? <= IDENTITY_TOL {
        return Circuit::from_gates(n_qubits, Vec::new(), u.trace().arg());
    }
    let f = kak(u)?;
    let mut gates = Vec::new();
    let mut phase = f.phase;
    if [f.a, f.b, f.c].iter().all(|p| p.abs() <= NEGLIGIBLE_ANGLE) {
        phase += emit_local(&mut gates, &(&f.left_a * &f.right_a), w1)?;
        phase += emit_local(&mut gates, &(&f.left_b * &f.right_b), w2)?;
        return Circuit::from_gates(n_qubits, gates, phase);
    }
    let core = core2q_circuit(f.a, f.b, f.c);
    phase += emit_local(&mut gates, &(&core.pre.0 * &f.right_a), w1)?;
    phase += emit_local(&mut gates, &(&core.pre.1 * &f.right_b), w2)?;
    let mapped = core.circuit.remap(n_qubits, &[w1, w2])?;
    gates.extend_from_slice(mapped.gates());
    phase += mapped.global_phase;
    phase += emit_local(&mut gates, &(&f.left_a * &core.post.0), w1)?;
    phase += emit_local(&mut gates, &(&f.left_b * &core.post.1), w2)?;
    Circuit::from_gates(n_qubits, gates, phase)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{cnot4, counts, embed_two, simulate};
    use crate::numkit::{haar_unitary, rng_from_seed};
    use crate::pauli::{exp_commuting_sum, PauliTerm};
    use rand::Rng;

    fn oracle(a: f64, b: f64, c: f64) -> ComplexMatrix {
        exp_commuting_sum(
            2,
            &[
                PauliTerm::parse(a, "XX").unwrap(),
                PauliTerm::parse(b, "YY").unwrap(),
                PauliTerm::parse(c, "ZZ").unwrap(),
            ],
        )
        .unwrap()
    }

    fn in_chamber(f: &KakFactors) -> bool {
        let eps = 1e-12;
        FRAC_PI_4 + eps >= f.a && f.a + eps >= f.b && f.b + eps >= f.c.abs()
    }

    fn swap4() -> ComplexMatrix {
        &(&cnot4(true) * &cnot4(false)) * &cnot4(true)
    }

    #[test]
    fn canonical_core_matches_oracle() {
        let mut rng = rng_from_seed(1);
        for _ in 0..100 {
            let (a, b, c) = (
                rng.random_range(-3.0..3.0),
                rng.random_range(-3.0..3.0),
                rng.random_range(-3.0..3.0),
            );
            assert!(
                canonical_core(a, b, c)
                    .sub(&oracle(a, b, c))
                    .frobenius_norm()
                    < 1e-13
            );
        }
    }

    #[test]
    fn local_input_has_zero_core() {
        let u = haar_unitary(2, 1).kron(&haar_unitary(2, 2));
        let f = kak(&u).unwrap();
        assert!(f.a.abs() < 1e-9 && f.b.abs() < 1e-9 && f.c.abs() < 1e-9);
        assert!(f.reconstruct().sub(&u).frobenius_norm() < 1e-10);
        let id = kak(&ComplexMatrix::identity(4)).unwrap();
        assert!(
            id.reconstruct()
                .sub(&ComplexMatrix::identity(4))
                .frobenius_norm()
                < 1e-12
        );
    }

    #[test]
    fn cnot_and_swap_classes() {
        let f = kak(&cnot4(true)).unwrap();
        assert!((f.a - FRAC_PI_4).abs() < 1e-10 && f.b.abs() < 1e-10 && f.c.abs() < 1e-10);
        assert!(f.reconstruct().sub(&cnot4(true)).frobenius_norm() < 1e-10);
        let s = kak(&swap4()).unwrap();
        for p in [s.a, s.b, s.c] {
            assert!((p - FRAC_PI_4).abs() < 1e-10, "{p}");
        }
        assert!(s.reconstruct().sub(&swap4()).frobenius_norm() < 1e-10);
    }

    #[test]
    fn haar_reconstruction_in_chamber() {
        for seed in 0..1000 {
            let u = haar_unitary(4, seed);
            let f = kak(&u).unwrap();
            let e = f.reconstruct().sub(&u).frobenius_norm();
            assert!(e <= 1e-9, "seed {seed}: {e:e}");
            assert!(in_chamber(&f), "seed {seed}: {} {} {}", f.a, f.b, f.c);
        }
    }

    #[test]
    fn structured_cores_with_degenerate_spectra() {
        let mut rng = rng_from_seed(11);
        let special = [
            (0.0, 0.0, 0.0),
            (FRAC_PI_4, 0.0, 0.0),
            (FRAC_PI_4, FRAC_PI_4, 0.0),
            (0.3, 0.3, 0.3),
            (0.3, 0.3, -0.3),
            (0.5, 0.2, 0.2),
            (FRAC_PI_4, 0.1, -0.1),
            (1e-10, 0.0, 0.0),
        ];
        for (k, &(a, b, c)) in special.iter().enumerate() {
            for t in 0..20 {
                let seed = (k * 100 + t) as u64;
                let l = haar_unitary(2, seed).kron(&haar_unitary(2, seed + 5000));
                let r = haar_unitary(2, seed + 10000).kron(&haar_unitary(2, seed + 15000));
                let u = &(&l * &oracle(a, b, c)) * &r;
                let f = kak(&u).unwrap();
                assert!(
                    f.reconstruct().sub(&u).frobenius_norm() <= 1e-9,
                    "{a} {b} {c}"
                );
                assert!(in_chamber(&f));
            }
        }
        // Random parameters outside the chamber map back in.
        for _ in 0..200 {
            let (a, b, c) = (
                rng.random_range(-4.0..4.0),
                rng.random_range(-4.0..4.0),
                rng.random_range(-4.0..4.0),
            );
            let u = oracle(a, b, c);
            let f = kak(&u).unwrap();
            assert!(f.reconstruct().sub(&u).frobenius_norm() <= 1e-9);
            assert!(in_chamber(&f));
        }
    }

    #[test]
    fn canonical_parameters_are_local_invariants() {
        for seed in 0..200 {
            let u = haar_unitary(4, seed);
            let g = haar_unitary(2, seed + 1).kron(&haar_unitary(2, seed + 2));
            let h = haar_unitary(2, seed + 3).kron(&haar_unitary(2, seed + 4));
            let f = kak(&u).unwrap();
            let f2 = kak(&(&(&g * &u) * &h)).unwrap();
            for (x, y) in [(f.a, f2.a), (f.b, f2.b), (f.c, f2.c)] {
                assert!((x - y).abs() <= 1e-8, "seed {seed}");
            }
        }
    }

    #[test]
    fn core_template_matches_oracle() {
        let mut rng = rng_from_seed(21);
        let zero = core2q_circuit(0.0, 0.0, 0.0);
        assert!(
            zero.unitary()
                .sub(&ComplexMatrix::identity(4))
                .frobenius_norm()
                < 1e-14
        );
        for _ in 0..1000 {
            let (a, b, c) = (
                rng.random_range(-4.0..4.0),
                rng.random_range(-4.0..4.0),
                rng.random_range(-4.0..4.0),
            );
            let core = core2q_circuit(a, b, c);
            assert!(core.unitary().sub(&oracle(a, b, c)).frobenius_norm() <= 1e-10);
            let n = counts(&core.circuit);
            assert_eq!(n.cnot, 3);
            assert!(core
                .circuit
                .gates()
                .iter()
                .all(|g| matches!(g, Gate::Cx { .. } | Gate::Ry { .. } | Gate::Rz { .. })));
        }
    }

    #[test]
    fn synth_u4_bounds() {
        for seed in 0..100 {
            let u = haar_unitary(4, seed);
            let c = synth_u4(&u, (1, 2), 2).unwrap();
            let n = counts(&c);
            assert_eq!(n.cnot, 3);
            assert!(n.one_qubit <= 15);
            assert!(distance_up_to_phase(&simulate(&c), &u).unwrap() <= 1e-9);
            assert!(simulate(&c).sub(&u).frobenius_norm() <= 1e-9);
        }
    }

    #[test]
    fn synth_u4_special_inputs() {
        let id = synth_u4(&ComplexMatrix::identity(4), (1, 2), 3).unwrap();
        assert_eq!(counts(&id).one_qubit, 0);
        assert_eq!(counts(&id).cnot, 0);
        let c = synth_u4(&cnot4(true), (1, 2), 3).unwrap();
        assert!(counts(&c).cnot <= 3);
        let target = embed_two(&cnot4(true), (1, 2), 3);
        assert!(distance_up_to_phase(&simulate(&c), &target).unwrap() <= 1e-10);
        let local = haar_unitary(2, 7).kron(&haar_unitary(2, 8));
        let lc = synth_u4(&local, (3, 1), 3).unwrap();
        assert_eq!(counts(&lc).cnot, 0);
        let target = embed_two(&local, (3, 1), 3);
        assert!(simulate(&lc).sub(&target).frobenius_norm() <= 1e-10);
        let u = haar_unitary(4, 99);
        let wc = synth_u4(&u, (3, 2), 3).unwrap();
        assert!(
            simulate(&wc)
                .sub(&embed_two(&u, (3, 2), 3))
                .frobenius_norm()
                <= 1e-9
        );
        assert!(synth_u4(&u, (2, 2), 3).is_err());
    }
}
