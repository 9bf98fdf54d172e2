use num_complex::Complex64;

use super::{Circuit, Gate};
use crate::numkit::ComplexMatrix;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `RY(theta) = exp(i theta Y / 2) = [[cos, sin], [-sin, cos]]` of `theta/2`.
pub fn ry(theta: f64) -> ComplexMatrix {
    let (s, co) = (theta / 2.0).sin_cos();
    ComplexMatrix::mat2(c(co, 0.0), c(s, 0.0), c(-s, 0.0), c(co, 0.0))
}

/// `RZ(theta) = exp(i theta Z / 2) = diag(e^{i theta/2}, e^{-i theta/2})`.
pub fn rz(theta: f64) -> ComplexMatrix {
    let h = theta / 2.0;
    ComplexMatrix::mat2(
        Complex64::from_polar(1.0, h),
        c(0.0, 0.0),
        c(0.0, 0.0),
        Complex64::from_polar(1.0, -h),
    )
}

/// `PH(theta) = diag(1, e^{i theta})`.
pub fn ph(theta: f64) -> ComplexMatrix {
    ComplexMatrix::mat2(
        c(1.0, 0.0),
        c(0.0, 0.0),
        c(0.0, 0.0),
        Complex64::from_polar(1.0, theta),
    )
}

/// `PH(pi) . RY(pi/2)`, which is exactly the Hadamard matrix.
pub fn hadamard() -> ComplexMatrix {
    &ph(std::f64::consts::PI) * &ry(std::f64::consts::FRAC_PI_2)
}

/// CNOT on two qubits, as a 4x4 matrix with the first qubit most significant.
/// `control_first` selects between control on the first or second qubit.
pub fn cnot4(control_first: bool) -> ComplexMatrix {
    let perm: [usize; 4] = if control_first {
        [0, 1, 3, 2]
    } else {
        [0, 3, 2, 1]
    };
    ComplexMatrix::from_fn(4, |i, j| {
        if perm[j] == i {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    })
}

/// Matrix of a one-qubit gate; `None` for CNOT.
pub fn gate_matrix(g: &Gate) -> Option<ComplexMatrix> {
    match *g {
        Gate::Ry { theta, .. } => Some(ry(theta)),
        Gate::Rz { theta, .. } => Some(rz(theta)),
        Gate::Ph { theta, .. } => Some(ph(theta)),
        Gate::H { .. } => Some(hadamard()),
        Gate::Cx { .. } => None,
    }
}

fn bit(q: usize, n: usize) -> usize {
    1 << (n - q)
}

// Rows (i, i | b) <- m . rows for every i with bit b clear.
fn apply_one(state: &mut ComplexMatrix, m: &ComplexMatrix, q: usize, n: usize) {
    let b = bit(q, n);
    let dim = state.dim();
    let (m00, m01, m10, m11) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    for i in (0..dim).filter(|i| i & b == 0) {
        for col in 0..dim {
            let x0 = state[(i, col)];
            let x1 = state[(i | b, col)];
            state[(i, col)] = m00 * x0 + m01 * x1;
            state[(i | b, col)] = m10 * x0 + m11 * x1;
        }
    }
}

fn apply_cx(state: &mut ComplexMatrix, control: usize, target: usize, n: usize) {
    let (cb, tb) = (bit(control, n), bit(target, n));
    let dim = state.dim();
    for i in (0..dim).filter(|i| i & cb != 0 && i & tb == 0) {
        for col in 0..dim {
            let tmp = state[(i, col)];
            state[(i, col)] = state[(i | tb, col)];
            state[(i | tb, col)] = tmp;
        }
    }
}

fn apply_two(state: &mut ComplexMatrix, m: &ComplexMatrix, wa: usize, wb: usize, n: usize) {
    let (ba, bb) = (bit(wa, n), bit(wb, n));
    let dim = state.dim();
    for i in (0..dim).filter(|i| i & (ba | bb) == 0) {
        let rows = [i, i | bb, i | ba, i | ba | bb];
        for col in 0..dim {
            let x: Vec<Complex64> = rows.iter().map(|&r| state[(r, col)]).collect();
            for (k, &r) in rows.iter().enumerate() {
                state[(r, col)] = (0..4).map(|l| m[(k, l)] * x[l]).sum();
            }
        }
    }
}

/// `e^{i global_phase} G_k ... G_1` with each gate embedded in the register.
pub fn simulate(circuit: &Circuit) -> ComplexMatrix {
    let n = circuit.n_qubits();
    let mut state = ComplexMatrix::identity(1 << n);
    for g in circuit.gates() {
        match *g {
            Gate::Cx { control, target } => apply_cx(&mut state, control, target, n),
            Gate::Ry { q, .. } | Gate::Rz { q, .. } | Gate::Ph { q, .. } | Gate::H { q } => {
                let m = gate_matrix(g).expect("one-qubit gate");
                apply_one(&mut state, &m, q, n);
            }
        }
    }
    state.scale(Complex64::from_polar(1.0, circuit.global_phase))
}

/// A 2x2 matrix acting on qubit `q` of an `n`-qubit register.
pub fn embed_one(m: &ComplexMatrix, q: usize, n: usize) -> ComplexMatrix {
    assert_eq!(m.dim(), 2);
    assert!((1..=n).contains(&q));
    let mut out = ComplexMatrix::identity(1 << n);
    apply_one(&mut out, m, q, n);
    out
}

/// A 4x4 matrix acting on qubits `(wa, wb)` of an `n`-qubit register, with
/// `wa` the more significant factor of the 4x4 index.
pub fn embed_two(m: &ComplexMatrix, wires: (usize, usize), n: usize) -> ComplexMatrix {
    assert_eq!(m.dim(), 4);
    let (wa, wb) = wires;
    assert!(wa != wb && (1..=n).contains(&wa) && (1..=n).contains(&wb));
    let mut out = ComplexMatrix::identity(1 << n);
    apply_two(&mut out, m, wa, wb, n);
    out
}
