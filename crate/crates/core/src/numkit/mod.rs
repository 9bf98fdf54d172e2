//! Dense complex linear algebra used by the synthesizers.

mod csd;
mod eig;
mod haar;
mod jacobi;
mod matrix;

pub use csd::{csd, CsdResult, CSD_INPUT_TOL};
pub use eig::{eig_normal, EigResult, NORMALITY_TOL};
pub use haar::{haar_unitary, haar_unitary_with, rng_from_seed};
pub use matrix::{distance_up_to_phase, is_unitary, unitarity_deviation, ComplexMatrix};

pub(crate) use jacobi::hermitian_eigen as jacobi_hermitian_eigen;
pub(crate) use matrix::require_unitary;
