use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use rand_xoshiro::Xoshiro256PlusPlus;

use super::matrix::ComplexMatrix;

/// Seeded generator used for every random draw in the crate.
///
/// xoshiro256++ (a 64-bit shift-register generator) seeded through
/// SplitMix64 from a single `u64`.
pub fn rng_from_seed(seed: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

/// Haar-distributed `dim x dim` unitary, deterministic in `seed`.
pub fn haar_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    haar_unitary_with(dim, &mut rng_from_seed(seed))
}

/// Haar sample drawn from a caller-supplied generator.
///
/// QR-orthonormalizes a complex Ginibre matrix and divides the phases of
/// the triangular factor's diagonal out of `Q`; without that correction the
/// distribution is not Haar.
pub fn haar_unitary_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    assert!(dim >= 1, "haar_unitary needs dim >= 1");
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    });
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= ph;
        }
    }
    ComplexMatrix::wrap(q)
}
