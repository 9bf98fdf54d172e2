//! Three-qubit synthesis: factor with [`kg_decompose`], trim the `N` and
//! `M` core circuits, merge their edge gates into the neighbouring local
//! factors, and expand every local factor into gates.

mod kg;
mod templates;

use std::time::Instant;

use crate::circuit::{simulate, Circuit};
use crate::error::Result;
use crate::numkit::{distance_up_to_phase, ComplexMatrix};
use crate::synth1q::{zyz, NEGLIGIBLE_ANGLE};
use crate::synth2q::synth_u4;

pub use kg::{kg_decompose, reconstruct, KgFactors, KG_INPUT_TOL};
pub use templates::{
    m_circuit, m_core, n_circuit, n_core, template, template_oracle, trimmed_m, trimmed_n,
    TemplateName, TrimmedTemplate,
};

/// Upper bound on one-qubit gates for any three-qubit synthesis.
pub const MAX_ONE_QUBIT: usize = 98;
/// Upper bound on CNOTs for any three-qubit synthesis.
pub const MAX_CNOT: usize = 40;

/// Knobs for [`synthesize_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthOptions {
    /// End-to-end distance budget reported against.
    pub tol: f64,
    /// Per-stage residual budget.
    pub stage_tol: f64,
    /// Compute per-stage residuals (costs extra simulation).
    pub verbose: bool,
}

impl Default for SynthOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            stage_tol: 1e-10,
            verbose: false,
        }
    }
}

/// Reconstruction residuals of each synthesis stage, filled in verbose mode.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StageResiduals {
    /// `||reconstruct(kg_decompose(u)) - u||_F`.
    pub factorization: f64,
    /// Per emitted local layer: distance between the synthesized two- and
    /// one-qubit circuits and their target factors.
    pub locals: Vec<f64>,
    /// Largest of `locals`.
    pub worst_local: f64,
}

impl StageResiduals {
    pub fn within(&self, stage_tol: f64) -> bool {
        self.factorization <= stage_tol && self.worst_local <= stage_tol
    }
}

#[derive(Debug, Clone)]
pub struct Synthesis {
    pub circuit: Circuit,
    /// Distance up to phase between the circuit and the input.
    pub distance: f64,
    pub residuals: Option<StageResiduals>,
    pub elapsed_ms: f64,
}

impl Synthesis {
    pub fn within(&self, tol: f64) -> bool {
        let c = crate::circuit::counts(&self.circuit);
        self.distance <= tol && c.one_qubit <= MAX_ONE_QUBIT && c.cnot <= MAX_CNOT
    }
}

#[derive(Debug, Clone)]
enum Layer {
    Local { a: ComplexMatrix, b: ComplexMatrix },
    N([f64; 3]),
    M([f64; 4]),
}

impl Layer {
    fn negligible(&self) -> bool {
        match self {
            Layer::Local { .. } => false,
            Layer::N(p) => p.iter().all(|x| x.abs() <= NEGLIGIBLE_ANGLE),
            Layer::M(p) => p.iter().all(|x| x.abs() <= NEGLIGIBLE_ANGLE),
        }
    }
}

// Removes cores that are the identity and multiplies the locals that become
// adjacent, so the list alternates Local, core, Local, ..., Local.
fn drop_trivial_cores(layers: Vec<Layer>) -> Vec<Layer> {
    let mut out: Vec<Layer> = Vec::new();
    for layer in layers {
        if layer.negligible() {
            continue;
        }
        match (out.last_mut(), layer) {
            (Some(Layer::Local { a, b }), Layer::Local { a: na, b: nb }) => {
                *a = &na * a;
                *b = &nb * b;
            }
            (_, layer) => out.push(layer),
        }
    }
    out
}

fn trimmed(layer: &Layer) -> Option<TrimmedTemplate> {
    match *layer {
        Layer::Local { .. } => None,
        Layer::N([a, b, c]) => Some(trimmed_n(a, b, c)),
        Layer::M([a, b, c, d]) => Some(trimmed_m(a, b, c, d)),
    }
}

/// Circuit over `{RY, RZ, PH, CNOT}` for an 8x8 unitary.
pub fn synthesize(u: &ComplexMatrix) -> Result<Circuit> {
    Ok(synthesize_with(u, &SynthOptions::default())?.circuit)
}

/// [`synthesize`] with distance reporting and optional per-stage residuals.
///
/// The seven layers `(A1,B1) N (A2,B2) M (A3,B3) N (A4,B4)` come from the
/// factorization. Identity cores are dropped; every other core is replaced
/// by its trimmed circuit and the fold matrices are multiplied into the
/// local layers on either side. Each local layer then becomes a two-qubit
/// synthesis on wires 1, 2 and a ZYZ sequence on wire 3.
pub fn synthesize_with(u: &ComplexMatrix, opts: &SynthOptions) -> Result<Synthesis> {
    let start = Instant::now();
    let f = kg_decompose(u)?;
    let layers = vec![
        Layer::Local {
            a: f.a1.clone(),
            b: f.b1.clone(),
        },
        Layer::N(f.u1_params),
        Layer::Local {
            a: f.a2.clone(),
            b: f.b2.clone(),
        },
        Layer::M(f.v_params),
        Layer::Local {
            a: f.a3.clone(),
            b: f.b3.clone(),
        },
        Layer::N(f.u2_params),
        Layer::Local {
            a: f.a4.clone(),
            b: f.b4.clone(),
        },
    ];
    let mut layers = drop_trivial_cores(layers);
    let trims: Vec<Option<TrimmedTemplate>> = layers.iter().map(trimmed).collect();
    for (k, t) in trims.iter().enumerate() {
        let Some(t) = t else { continue };
        if let Layer::Local { a, b } = &mut layers[k - 1] {
            *a = &t.left_fold_a * a;
            *b = &t.left_fold_b * b;
        }
        if let Layer::Local { a, b } = &mut layers[k + 1] {
            *a = &*a * &t.right_fold_a;
            *b = &*b * &t.right_fold_b;
        }
    }

    let mut circuit = Circuit::new(3);
    circuit.global_phase = f.phase;
    let mut locals = Vec::new();
    for (layer, trim) in layers.iter().zip(&trims) {
        match (layer, trim) {
            (Layer::Local { a, b }, _) => {
                let mut part = synth_u4(a, (1, 2), 3)?;
                let z = zyz(b)?;
                for g in z.gates(3) {
                    part.push(g)?;
                }
                part.global_phase += z.phase;
                if opts.verbose {
                    let target = a.kron(b);
                    locals.push(distance_up_to_phase(&simulate(&part), &target)?);
                }
                circuit.append(&part)?;
            }
            (_, Some(t)) => circuit.append(&t.circuit)?,
            _ => unreachable!("cores always carry a trimmed template"),
        }
    }

    let distance = distance_up_to_phase(&simulate(&circuit), u)?;
    let residuals = opts.verbose.then(|| StageResiduals {
        factorization: reconstruct(&f).sub(u).frobenius_norm(),
        worst_local: locals.iter().copied().fold(0.0, f64::max),
        locals,
    });
    Ok(Synthesis {
        circuit,
        distance,
        residuals,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::counts;
    use crate::numkit::haar_unitary;

    fn check(u: &ComplexMatrix) -> Circuit {
        let s = synthesize_with(
            u,
            &SynthOptions {
                verbose: true,
                ..Default::default()
            },
        )
        .unwrap();
        let c = counts(&s.circuit);
        assert!(s.distance <= 1e-8, "distance {:e}", s.distance);
        assert!(c.cnot <= MAX_CNOT && c.one_qubit <= MAX_ONE_QUBIT, "{c:?}");
        let r = s.residuals.unwrap();
        assert!(r.within(SynthOptions::default().stage_tol), "{r:?}");
        s.circuit
    }

    #[test]
    fn identity_emits_nothing() {
        let c = check(&ComplexMatrix::identity(8));
        assert_eq!(counts(&c).cnot, 0);
        assert_eq!(counts(&c).one_qubit, 0);
    }

    #[test]
    fn haar_inputs_meet_bounds() {
        for seed in 0..30 {
            let c = check(&haar_unitary(8, seed));
            let n = counts(&c);
            assert_eq!(n.cnot, MAX_CNOT);
            assert!(n.one_qubit <= 88);
        }
    }

    #[test]
    fn structured_inputs() {
        let local = haar_unitary(2, 1)
            .kron(&haar_unitary(2, 2))
            .kron(&haar_unitary(2, 3));
        check(&local);
        let two = haar_unitary(4, 4).kron(&haar_unitary(2, 5));
        check(&two);
        let other = haar_unitary(2, 6).kron(&haar_unitary(4, 7));
        check(&other);
        check(&n_core(0.3, -0.2, 0.9));
        check(&m_core(0.3, -0.2, 0.9, 0.1));
        check(&m_core(0.0, 0.0, 0.0, 0.4));
    }
}
