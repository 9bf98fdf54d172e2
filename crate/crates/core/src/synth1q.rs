//! ZYZ Euler decomposition of one-qubit unitaries.

use std::f64::consts::PI;

use crate::circuit::Gate;
use crate::error::Result;
use crate::numkit::{require_unitary, ComplexMatrix};

/// Unitarity tolerance for [`zyz`] input.
pub const ZYZ_INPUT_TOL: f64 = 1e-8;

/// Rotations with `|theta|` at or below this are not emitted.
pub const NEGLIGIBLE_ANGLE: f64 = 1e-12;

// Below this magnitude an off-diagonal (or diagonal) entry is treated as
// zero and the Euler gauge is fixed with theta3 = 0.
const GAUGE_TOL: f64 = 1e-13;

/// `u = e^{i phase} RZ(theta1) RY(theta2) RZ(theta3)` as a matrix product, so
/// `RZ(theta3)` acts first in time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZyzAngles {
    pub phase: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
}

impl ZyzAngles {
    pub fn matrix(&self) -> ComplexMatrix {
        use crate::circuit::{ry, rz};
        (&(&rz(self.theta1) * &ry(self.theta2)) * &rz(self.theta3))
            .scale(num_complex::Complex64::from_polar(1.0, self.phase))
    }

    /// Gates on qubit `q` in time order, skipping negligible rotations.
    /// The caller owns `phase`.
    pub fn gates(&self, q: usize) -> Vec<Gate> {
        let mut out = Vec::with_capacity(3);
        if self.theta3.abs() > NEGLIGIBLE_ANGLE {
            out.push(Gate::Rz {
                q,
                theta: self.theta3,
            });
        }
        if self.theta2.abs() > NEGLIGIBLE_ANGLE {
            out.push(Gate::Ry {
                q,
                theta: self.theta2,
            });
        }
        if self.theta1.abs() > NEGLIGIBLE_ANGLE {
            out.push(Gate::Rz {
                q,
                theta: self.theta1,
            });
        }
        out
    }
}

// Maps an RZ angle into (-pi, pi]; each 2 pi shift negates the matrix.
fn wrap_rz(theta: f64, phase: &mut f64) -> f64 {
    let mut t = theta;
    while t > PI {
        t -= 2.0 * PI;
        *phase += PI;
    }
    while t <= -PI {
        t += 2.0 * PI;
        *phase += PI;
    }
    t
}

/// ZYZ angles of a 2x2 unitary with `theta2` in `[0, pi]` and the outer
/// angles in `(-pi, pi]`.
///
/// After dividing out `sqrt(det u)` the matrix is
/// `[[c e^{i(t1+t3)/2}, s e^{i(t1-t3)/2}], [-s e^{-i(t1-t3)/2}, c e^{-i(t1+t3)/2}]]`
/// with `c, s` the cosine and sine of `t2/2`, so `t2` comes from the entry
/// magnitudes and `t1 +- t3` from the phases of the first row. When either
/// entry of the first row vanishes only one combination is defined; then
/// `theta3 = 0` and `theta1` takes the whole angle.
pub fn zyz(u: &ComplexMatrix) -> Result<ZyzAngles> {
    if u.dim() != 2 {
        return Err(crate::Error::DimensionMismatch {
            expected: 2,
            found: u.dim(),
        });
    }
    require_unitary(u, ZYZ_INPUT_TOL)?;
    let mut phase = u.determinant().arg() / 2.0;
    let v = u.scale(num_complex::Complex64::from_polar(1.0, -phase));
    let (v00, v01) = (v[(0, 0)], v[(0, 1)]);
    let theta2 = 2.0 * v01.norm().atan2(v00.norm());
    let (theta1, theta3) = if v01.norm() <= GAUGE_TOL {
        (2.0 * v00.arg(), 0.0)
    } else if v00.norm() <= GAUGE_TOL {
        (2.0 * v01.arg(), 0.0)
    } else {
        (v00.arg() + v01.arg(), v00.arg() - v01.arg())
    };
    let theta1 = wrap_rz(theta1, &mut phase);
    let theta3 = wrap_rz(theta3, &mut phase);
    Ok(ZyzAngles {
        phase,
        theta1,
        theta2,
        theta3,
    })
}
