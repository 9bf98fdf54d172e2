//! Gate-level IR over `{RY, RZ, PH, CNOT}` plus the `H` macro.
//!
//! Qubits are 1-based; qubit 1 is the most significant basis-index bit.
//! Gate list order is time order, so the circuit's matrix is the reversed
//! product of the gate matrices.

mod sim;
mod text;

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use crate::error::{Error, Result};

pub use sim::{cnot4, embed_one, embed_two, gate_matrix, hadamard, ph, ry, rz, simulate};
pub use text::{emit_text, parse_text};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    /// `exp(i theta Y / 2)`.
    Ry {
        q: usize,
        theta: f64,
    },
    /// `exp(i theta Z / 2)`.
    Rz {
        q: usize,
        theta: f64,
    },
    /// `diag(1, e^{i theta})`.
    Ph {
        q: usize,
        theta: f64,
    },
    /// Macro for `PH(pi) . RY(pi/2)`.
    H {
        q: usize,
    },
    Cx {
        control: usize,
        target: usize,
    },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Ry { q, .. } | Gate::Rz { q, .. } | Gate::Ph { q, .. } | Gate::H { q } => vec![q],
            Gate::Cx { control, target } => vec![control, target],
        }
    }

    pub fn is_one_qubit(&self) -> bool {
        !matches!(self, Gate::Cx { .. })
    }

    pub fn adjoint(&self) -> Gate {
        match *self {
            Gate::Ry { q, theta } => Gate::Ry { q, theta: -theta },
            Gate::Rz { q, theta } => Gate::Rz { q, theta: -theta },
            Gate::Ph { q, theta } => Gate::Ph { q, theta: -theta },
            g @ (Gate::H { .. } | Gate::Cx { .. }) => g,
        }
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        for q in self.qubits() {
            if q == 0 || q > n_qubits {
                return Err(Error::InvalidGate(format!(
                    "{self} uses qubit {q} outside 1..={n_qubits}"
                )));
            }
        }
        match *self {
            Gate::Cx { control, target } if control == target => Err(Error::InvalidGate(format!(
                "{self} has control equal to target"
            ))),
            Gate::Ry { theta, .. } | Gate::Rz { theta, .. } | Gate::Ph { theta, .. }
                if !theta.is_finite() =>
            {
                Err(Error::InvalidGate(format!("{self} has a non-finite angle")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::Ry { q, theta } => write!(f, "ry {q} {theta}"),
            Gate::Rz { q, theta } => write!(f, "rz {q} {theta}"),
            Gate::Ph { q, theta } => write!(f, "ph {q} {theta}"),
            Gate::H { q } => write!(f, "h {q}"),
            Gate::Cx { control, target } => write!(f, "cx {control} {target}"),
        }
    }
}

/// Gate tallies after macro expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GateCounts {
    pub cnot: usize,
    /// RY + RZ + PH after each `H` becomes two gates.
    pub one_qubit: usize,
    /// Number of `H` macros before expansion.
    pub macros_h: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    /// Radians; the circuit's matrix carries an overall `e^{i global_phase}`.
    pub global_phase: f64,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        assert!(n_qubits >= 1, "a circuit needs at least one qubit");
        Self {
            n_qubits,
            gates: Vec::new(),
            global_phase: 0.0,
        }
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate>, global_phase: f64) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidGate(
                "circuit needs at least one qubit".into(),
            ));
        }
        for g in &gates {
            g.validate(n_qubits)?;
        }
        if !global_phase.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            n_qubits,
            gates,
            global_phase,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends `other` after `self` in time; phases add.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        self.gates.extend_from_slice(&other.gates);
        self.global_phase += other.global_phase;
        Ok(())
    }

    /// Same gates on a larger register, with qubit `k` sent to `map[k - 1]`.
    pub fn remap(&self, n_qubits: usize, map: &[usize]) -> Result<Circuit> {
        if map.len() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: map.len(),
            });
        }
        let m = |q: usize| map[q - 1];
        let gates = self
            .gates
            .iter()
            .map(|g| match *g {
                Gate::Ry { q, theta } => Gate::Ry { q: m(q), theta },
                Gate::Rz { q, theta } => Gate::Rz { q: m(q), theta },
                Gate::Ph { q, theta } => Gate::Ph { q: m(q), theta },
                Gate::H { q } => Gate::H { q: m(q) },
                Gate::Cx { control, target } => Gate::Cx {
                    control: m(control),
                    target: m(target),
                },
            })
            .collect();
        Circuit::from_gates(n_qubits, gates, self.global_phase)
    }

    pub fn counts(&self) -> GateCounts {
        let mut c = GateCounts::default();
        for g in &self.gates {
            match g {
                Gate::Cx { .. } => c.cnot += 1,
                Gate::H { .. } => {
                    c.macros_h += 1;
                    c.one_qubit += 2;
                }
                _ => c.one_qubit += 1,
            }
        }
        c
    }
}

/// Replaces every `H` by `RY(pi/2)` then `PH(pi)` on the same qubit.
pub fn expand_macros(c: &Circuit) -> Circuit {
    let mut gates = Vec::with_capacity(c.gates.len());
    for g in &c.gates {
        match *g {
            Gate::H { q } => {
                gates.push(Gate::Ry {
                    q,
                    theta: FRAC_PI_2,
                });
                gates.push(Gate::Ph { q, theta: PI });
            }
            other => gates.push(other),
        }
    }
    Circuit {
        n_qubits: c.n_qubits,
        gates,
        global_phase: c.global_phase,
    }
}

/// Tallies computed on the macro-expanded circuit.
pub fn counts(c: &Circuit) -> GateCounts {
    let mut out = expand_macros(c).counts();
    out.macros_h = c
        .gates
        .iter()
        .filter(|g| matches!(g, Gate::H { .. }))
        .count();
    out
}

/// Inverse circuit: reversed order, negated angles and phase.
pub fn adjoint(c: &Circuit) -> Circuit {
    Circuit {
        n_qubits: c.n_qubits,
        gates: c.gates.iter().rev().map(Gate::adjoint).collect(),
        global_phase: -c.global_phase,
    }
}

/// Structural commutation test: gates on disjoint qubits, gates diagonal in
/// the computational basis on a shared qubit, or a diagonal gate on a CNOT's
/// control. Returns `false` whenever commutation is not evident from the
/// structure alone.
pub fn gates_commute(a: &Gate, b: &Gate) -> bool {
    let (qa, qb) = (a.qubits(), b.qubits());
    if qa.iter().all(|q| !qb.contains(q)) {
        return true;
    }
    let diagonal_on = |g: &Gate| match *g {
        Gate::Rz { q, .. } | Gate::Ph { q, .. } => Some(q),
        _ => None,
    };
    match (a, b) {
        (Gate::Cx { control, target }, other) | (other, Gate::Cx { control, target }) => {
            if let (
                Gate::Cx {
                    control: c2,
                    target: t2,
                },
                Gate::Cx { .. },
            ) = (other, a)
            {
                // Two CNOTs commute when neither's control is the other's target.
                return c2 != target && control != t2;
            }
            diagonal_on(other) == Some(*control) && !other.qubits().contains(target)
        }
        _ => diagonal_on(a).is_some() && diagonal_on(b).is_some(),
    }
}
