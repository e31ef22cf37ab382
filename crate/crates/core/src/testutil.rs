//! Shared helpers for unit tests.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hermitian::HermitianMatrix;

/// Entries uniform in the unit square, diagonal real.
pub fn random_hermitian(n: usize, seed: u64) -> HermitianMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
        for j in (i + 1)..n {
            let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    HermitianMatrix::new(m, 1e-12).unwrap()
}

pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

pub fn max_abs_real(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.abs()))
}

/// Composite Simpson rule over `[0, t]` with `panels` (even) panels of a
/// matrix-valued function sampled on the uniform grid by stepping a
/// propagator computed independently with `nalgebra`'s matrix exponential.
pub fn simpson_time_average<F>(h: &HermitianMatrix, t: f64, panels: usize, mut f: F) -> DMatrix<Complex64>
where
    F: FnMut(&DMatrix<Complex64>) -> DMatrix<Complex64>,
{
    assert!(panels % 2 == 0);
    let n = h.n();
    let step = t / panels as f64;
    let generator = h.matrix() * Complex64::new(0.0, -step);
    let u_step = generator.exp();
    let mut u = DMatrix::<Complex64>::identity(n, n);
    let mut acc = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..=panels {
        let w = if i == 0 || i == panels {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += f(&u) * Complex64::new(w, 0.0);
        u = &u_step * u;
    }
    acc * Complex64::new(step / 3.0 / t, 0.0)
}
