use std::f64::consts::PI;

use proptest::prelude::*;
use triqc::circuit::{adjoint, emit_text, expand_macros, parse_text, simulate, Circuit, Gate};
use triqc::matfile::{emit_matrix, parse_matrix};
use triqc::numkit::{distance_up_to_phase, haar_unitary, ComplexMatrix};
use triqc::synth1q::zyz;
use triqc::synth2q::kak;
use triqc::Complex64;

fn gate(n: usize) -> impl Strategy<Value = Gate> {
    let q = 1..=n;
    let angle = -10.0..10.0f64;
    prop_oneof![
        (q.clone(), angle.clone()).prop_map(|(q, theta)| Gate::Ry { q, theta }),
        (q.clone(), angle.clone()).prop_map(|(q, theta)| Gate::Rz { q, theta }),
        (q.clone(), angle).prop_map(|(q, theta)| Gate::Ph { q, theta }),
        q.clone().prop_map(|q| Gate::H { q }),
        (q.clone(), q)
            .prop_filter("distinct wires", |(c, t)| c != t)
            .prop_map(|(control, target)| Gate::Cx { control, target }),
    ]
}

fn circuit() -> impl Strategy<Value = Circuit> {
    (2usize..=3)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(gate(n), 0..24), -PI..PI))
        .prop_map(|(n, gates, phase)| Circuit::from_gates(n, gates, phase).unwrap())
}

fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
    a.sub(b).frobenius_norm() <= tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_round_trip_is_exact(c in circuit()) {
        let text = emit_text(&c);
        let back = parse_text(&text).unwrap();
        prop_assert_eq!(back.gates(), c.gates());
        prop_assert_eq!(back.global_phase, c.global_phase);
        prop_assert_eq!(emit_text(&back), text);
    }

    #[test]
    fn later_gates_multiply_on_the_left(a in circuit(), b in circuit()) {
        prop_assume!(a.n_qubits() == b.n_qubits());
        let mut ab = a.clone();
        ab.append(&b).unwrap();
        prop_assert!(close(&simulate(&ab), &(&simulate(&b) * &simulate(&a)), 1e-12));
    }

    #[test]
    fn adjoint_inverts(c in circuit()) {
        let prod = &simulate(&adjoint(&c)) * &simulate(&c);
        prop_assert!(close(&prod, &ComplexMatrix::identity(1 << c.n_qubits()), 1e-12));
    }

    #[test]
    fn macro_expansion_keeps_the_unitary(c in circuit()) {
        let e = expand_macros(&c);
        let no_macros = e.gates().iter().all(|g| !matches!(g, Gate::H { .. }));
        prop_assert!(no_macros);
        prop_assert!(close(&simulate(&e), &simulate(&c), 1e-12));
    }

    #[test]
    fn distance_ignores_global_phase(seed in any::<u64>(), phi in -PI..PI) {
        let u = haar_unitary(8, seed);
        let v = u.scale(Complex64::from_polar(1.0, phi));
        prop_assert!(distance_up_to_phase(&u, &v).unwrap() <= 1e-12);
    }

    #[test]
    fn zyz_reconstructs(seed in any::<u64>()) {
        let u = haar_unitary(2, seed);
        let z = zyz(&u).unwrap();
        prop_assert!(close(&z.matrix(), &u, 1e-12));
        let mut c = Circuit::new(1);
        for g in z.gates(1) {
            c.push(g).unwrap();
        }
        prop_assert!(c.gates().len() <= 3);
        prop_assert!(distance_up_to_phase(&simulate(&c), &u).unwrap() <= 1e-12);
    }

    #[test]
    fn kak_lands_in_the_chamber(seed in any::<u64>()) {
        let f = kak(&haar_unitary(4, seed)).unwrap();
        let t = 1e-12;
        prop_assert!(PI / 4.0 + t >= f.a && f.a + t >= f.b && f.b + t >= f.c.abs());
    }

    #[test]
    fn matrix_file_round_trip_is_exact(seed in any::<u64>(), n in 1usize..=3) {
        let u = haar_unitary(1 << n, seed);
        prop_assert_eq!(parse_matrix(&emit_matrix(&u)).unwrap(), u);
    }
}
