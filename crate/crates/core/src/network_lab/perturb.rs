use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;

/// Multiplies every nonzero off-diagonal pair `H_ij`, `H_ji` by `e^{±iθ}` with
/// `θ ~ N(0, σ²)` drawn per pair in row-major order. Moduli and the diagonal
/// are kept.
pub fn randomize_phases(h: &HermitianMatrix, sigma: f64, seed: u64) -> Result<HermitianMatrix> {
    if !sigma.is_finite() || sigma < 0.0 {
        return Err(Error::NegativeSigma(sigma));
    }
    if sigma == 0.0 {
        return Ok(h.clone());
    }
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::InvalidSpec(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = h.matrix().clone();
    let n = h.n();
    for i in 0..n {
        for j in (i + 1)..n {
            let z = m[(i, j)];
            if z == Complex64::new(0.0, 0.0) {
                continue;
            }
            let theta: f64 = normal.sample(&mut rng);
            let w = Complex64::from_polar(z.norm(), z.arg() + theta);
            m[(i, j)] = w;
            m[(j, i)] = w.conj();
        }
    }
    Ok(HermitianMatrix::from_exact(m))
}

/// Adds a seeded random Hermitian matrix whose entries have modulus at most
/// `epsilon`: real diagonal uniform in `[-ε, ε]`, off-diagonal with uniform
/// modulus in `[0, ε]` and uniform phase.
pub fn perturb(h: &HermitianMatrix, epsilon: f64, seed: u64) -> Result<HermitianMatrix> {
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(Error::NegativeEpsilon(epsilon));
    }
    if epsilon == 0.0 {
        return Ok(h.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = h.matrix().clone();
    let n = h.n();
    for i in 0..n {
        m[(i, i)].re += rng.random_range(-epsilon..=epsilon);
        for j in (i + 1)..n {
            let r = rng.random_range(0.0..=epsilon);
            let phase = rng.random_range(0.0..std::f64::consts::TAU);
            let z = Complex64::from_polar(r, phase);
            m[(i, j)] += z;
            m[(j, i)] += z.conj();
        }
    }
    Ok(HermitianMatrix::from_exact(m))
}
