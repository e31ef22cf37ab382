//! Closed-form continuous-time quantum walk quantities built on a spectral
//! decomposition: propagators, transfer matrices, evolved densities, and
//! their uniform time averages over `[0, t]`.
//!
//! Time averages use the kernel
//! `φ(Δ, t) = (1/t) ∫₀ᵗ e^{-iΔt'} dt' = e^{-iΔt/2} sinc(Δt/2)`
//! applied to every pair of eigenspaces, so no quadrature is involved.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermitian::{HermitianMatrix, SpectralDecomposition};

/// Averaging window: `[0, t]` for finite `t`, or the `t → ∞` limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Horizon {
    Finite(f64),
    Infinite,
}

impl Horizon {
    pub fn validate(self) -> Result<Self> {
        if let Horizon::Finite(t) = self {
            if t.is_nan() || t <= 0.0 {
                return Err(Error::NonPositiveTime(t));
            }
            if !t.is_finite() {
                return Err(Error::NonFiniteTime(t));
            }
        }
        Ok(self)
    }
}

/// Uniform time average of `e^{-iΔt'}` over `[0, t]`.
pub fn phi(delta: f64, t: f64) -> Complex64 {
    let half = 0.5 * delta * t;
    let sinc = if half.abs() < 1e-4 {
        let x2 = half * half;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        half.sin() / half
    };
    Complex64::from_polar(sinc, -half)
}

/// Time-average weight of an oscillation at frequency `delta`. In the
/// infinite limit only frequencies within `resonance_tol` of zero survive.
pub(crate) fn average_weight(delta: f64, horizon: Horizon, resonance_tol: f64) -> Complex64 {
    match horizon {
        Horizon::Finite(t) => phi(delta, t),
        Horizon::Infinite => {
            if delta.abs() <= resonance_tol {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }
    }
}

/// `K_jk = avg e^{-i(E_j - E_k)t}` over the eigenspaces of `d`.
pub(crate) fn pair_kernel(d: &SpectralDecomposition, horizon: Horizon) -> DMatrix<Complex64> {
    let e = d.eigenvalues();
    let m = e.len();
    DMatrix::from_fn(m, m, |j, k| {
        if j == k {
            Complex64::new(1.0, 0.0)
        } else {
            match horizon {
                Horizon::Finite(t) => phi(e[j] - e[k], t),
                // Distinct eigenspaces never resonate by construction.
                Horizon::Infinite => Complex64::new(0.0, 0.0),
            }
        }
    })
}

/// What a [`TransferMatrix`] was evaluated for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransferKind {
    /// `R(t)` at a single time.
    Instant(f64),
    /// Uniform time average over a horizon.
    Average(Horizon),
    /// Quadratic-order expansion of the average for `t‖H‖ ≪ 1`.
    ShortTime(f64),
}

/// Node-to-node transport probabilities; `entries[(a, b)]` is the
/// probability of going from `b` to `a`.
#[derive(Debug, Clone)]
pub struct TransferMatrix {
    pub kind: TransferKind,
    pub entries: DMatrix<f64>,
}

impl TransferMatrix {
    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    /// `(R + Rᵀ)/2`.
    pub fn symmetrized(&self) -> DMatrix<f64> {
        (&self.entries + self.entries.transpose()) * 0.5
    }

    /// Largest deviation of any row or column sum from one.
    pub fn stochasticity_defect(&self) -> f64 {
        let n = self.n();
        let mut worst = 0.0f64;
        for i in 0..n {
            worst = worst.max((self.entries.row(i).sum() - 1.0).abs());
            worst = worst.max((self.entries.column(i).sum() - 1.0).abs());
        }
        worst
    }
}

/// `U(t) = Σ_k e^{-iE_k t} Λ_k`.
pub fn propagator(d: &SpectralDecomposition, t: f64) -> DMatrix<Complex64> {
    let n = d.n();
    let mut u = DMatrix::zeros(n, n);
    for (e, p) in d.eigenvalues().iter().zip(d.projectors()) {
        u += p * Complex64::from_polar(1.0, -e * t);
    }
    u
}

/// `R_ab(t) = |U(t)_ab|²`.
pub fn transfer_matrix(d: &SpectralDecomposition, t: f64) -> Result<TransferMatrix> {
    if !t.is_finite() {
        return Err(Error::NonFiniteTime(t));
    }
    let u = propagator(d, t);
    Ok(TransferMatrix {
        kind: TransferKind::Instant(t),
        entries: u.map(|z| z.norm_sqr()),
    })
}

/// `R̄_ab = Re Σ_jk K_jk (Λ_j)_ab conj((Λ_k)_ab)`, which in the infinite limit
/// is the mixing matrix `Σ_k |(Λ_k)_ab|²`.
pub fn avg_transfer_matrix(d: &SpectralDecomposition, horizon: Horizon) -> Result<TransferMatrix> {
    let horizon = horizon.validate()?;
    let n = d.n();
    let proj = d.projectors();
    let mut entries = DMatrix::<f64>::zeros(n, n);
    match horizon {
        Horizon::Infinite => {
            for p in proj {
                entries += p.map(|z| z.norm_sqr());
            }
        }
        Horizon::Finite(_) => {
            let kernel = pair_kernel(d, horizon);
            let m = proj.len();
            for j in 0..m {
                entries += proj[j].map(|z| z.norm_sqr());
                for k in (j + 1)..m {
                    // (j,k) and (k,j) are complex conjugates.
                    let w = kernel[(j, k)];
                    entries += proj[j].zip_map(&proj[k], |x, y| 2.0 * (w * x * y.conj()).re);
                }
            }
        }
    }
    Ok(TransferMatrix {
        kind: TransferKind::Average(horizon),
        entries,
    })
}

/// `δ_ab (1 − t²/3 (H²)_aa) + t²/3 |H_ab|²`.
pub fn short_time_avg_transfer(h: &HermitianMatrix, t: f64) -> TransferMatrix {
    let n = h.n();
    let hm = h.matrix();
    let h2 = hm * hm;
    let c = t * t / 3.0;
    let entries = DMatrix::from_fn(n, n, |a, b| {
        let off = c * hm[(a, b)].norm_sqr();
        if a == b {
            1.0 - c * h2[(a, a)].re + off
        } else {
            off
        }
    });
    TransferMatrix {
        kind: TransferKind::ShortTime(t),
        entries,
    }
}

/// A unit-trace positive semidefinite Hermitian matrix.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Checks Hermiticity, unit trace and positivity, each within `1e-9`.
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        const TOL: f64 = 1e-9;
        if !entries.is_square() {
            return Err(Error::NonSquare {
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        let herm_defect = (&entries - entries.adjoint())
            .iter()
            .fold(0.0f64, |a, z| a.max(z.norm()));
        if herm_defect.is_nan() || herm_defect > TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (defect {herm_defect:e})"
            )));
        }
        let tr = entries.trace();
        if !((tr.re - 1.0).abs() <= TOL && tr.im.abs() <= TOL) {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} is not 1")));
        }
        let min_eig = SymmetricEigen::new(entries.clone())
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |a, &e| a.min(e));
        if min_eig < -TOL {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(DensityMatrix { entries })
    }

    /// `|ψ⟩⟨ψ|` for a normalized `ψ`.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm.is_nan() || (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDensityMatrix(format!("state norm² {norm} is not 1")));
        }
        let n = psi.len();
        Ok(DensityMatrix {
            entries: DMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj()),
        })
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub(crate) fn from_unchecked(entries: DMatrix<Complex64>) -> Self {
        DensityMatrix { entries }
    }
}

/// `U(t) ρ₀ U(t)†`.
pub fn evolve_density(d: &SpectralDecomposition, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    if rho0.n() != d.n() {
        return Err(Error::DimensionMismatch {
            expected: d.n(),
            found: rho0.n(),
        });
    }
    let u = propagator(d, t);
    let rho = &u * rho0.matrix() * u.adjoint();
    Ok(DensityMatrix::from_unchecked(hermitize(rho)))
}

/// `ρ̄ = Σ_jk K_jk Λ_j ρ₀ Λ_k`; the infinite limit is `Σ_k Λ_k ρ₀ Λ_k`.
pub fn avg_density(d: &SpectralDecomposition, rho0: &DensityMatrix, horizon: Horizon) -> Result<DensityMatrix> {
    let horizon = horizon.validate()?;
    if rho0.n() != d.n() {
        return Err(Error::DimensionMismatch {
            expected: d.n(),
            found: rho0.n(),
        });
    }
    let n = d.n();
    let proj = d.projectors();
    let left: Vec<DMatrix<Complex64>> = proj.iter().map(|p| p * rho0.matrix()).collect();
    let mut out = DMatrix::<Complex64>::zeros(n, n);
    match horizon {
        Horizon::Infinite => {
            for (l, p) in left.iter().zip(proj) {
                out += l * p;
            }
        }
        Horizon::Finite(_) => {
            let kernel = pair_kernel(d, horizon);
            for (k, pk) in proj.iter().enumerate() {
                let mut weighted = DMatrix::<Complex64>::zeros(n, n);
                for (j, l) in left.iter().enumerate() {
                    weighted += l * kernel[(j, k)];
                }
                out += weighted * pk;
            }
        }
    }
    Ok(DensityMatrix::from_unchecked(hermitize(out)))
}

fn hermitize(m: DMatrix<Complex64>) -> DMatrix<Complex64> {
    (&m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{spectral_decompose, DEFAULT_DEGENERACY_TOL};
    use crate::testutil::{max_abs, max_abs_real, random_hermitian, simpson_time_average};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    fn flip() -> SpectralDecomposition {
        let h = HermitianMatrix::from_real_rows(&[vec![0., 1.], vec![1., 0.]]).unwrap();
        spectral_decompose(&h, DEFAULT_DEGENERACY_TOL).unwrap()
    }

    fn two_cliques_bridged() -> HermitianMatrix {
        let mut rows = vec![vec![0.0; 6]; 6];
        let mut link = |i: usize, j: usize| {
            rows[i][j] = 1.0;
            rows[j][i] = 1.0;
        };
        for (i, j) in [
            (0, 1),
            (0, 2),
            (1, 2),
            (3, 4),
            (3, 5),
            (4, 5),
            (1, 3),
            (1, 4),
            (2, 3),
            (2, 4),
        ] {
            link(i, j);
        }
        HermitianMatrix::from_real_rows(&rows).unwrap()
    }

    #[test]
    fn phi_limits() {
        assert_eq!(phi(0.0, 3.0), Complex64::new(1.0, 0.0));
        let (d, t) = (0.7, 2.3);
        let exact = (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -d * t)) / Complex64::new(0.0, d * t);
        assert!((phi(d, t) - exact).norm() < 1e-15);
        // Series branch agrees with the closed form just outside its range.
        let x = 2.0001e-4;
        let exact = (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -x)) / Complex64::new(0.0, x);
        assert!((phi(x, 1.0) - exact).norm() < 1e-11);
        assert!((phi(1.999e-4, 1.0) - phi(2.001e-4, 1.0)).norm() < 1e-7);
    }

    #[test]
    fn propagator_at_zero_is_identity() {
        let d = spectral_decompose(&random_hermitian(5, 3), DEFAULT_DEGENERACY_TOL).unwrap();
        assert!(max_abs(&(propagator(&d, 0.0) - DMatrix::identity(5, 5))) < 1e-12);
    }

    #[test]
    fn propagator_flip_quarter_period() {
        let u = propagator(&flip(), FRAC_PI_2);
        let i = Complex64::new(0.0, 1.0);
        let expected = DMatrix::from_row_slice(2, 2, &[0.0.into(), -i, -i, 0.0.into()]);
        assert!(max_abs(&(u - expected)) < 1e-15);
    }

    #[test]
    fn propagator_is_unitary() {
        for seed in 0..20 {
            let d = spectral_decompose(&random_hermitian(8, seed), DEFAULT_DEGENERACY_TOL).unwrap();
            let u = propagator(&d, 0.37 * seed as f64 + 0.1);
            assert!(max_abs(&(&u * u.adjoint() - DMatrix::identity(8, 8))) < 1e-9);
        }
    }

    #[test]
    fn transfer_flip_is_sin_squared() {
        let d = flip();
        for t in [0.0, 0.3, 1.0, 2.5] {
            let r = transfer_matrix(&d, t).unwrap();
            assert_abs_diff_eq!(r.entries[(0, 1)], t.sin().powi(2), epsilon = 1e-14);
            assert_abs_diff_eq!(r.entries[(0, 0)], t.cos().powi(2), epsilon = 1e-14);
        }
    }

    #[test]
    fn zero_hamiltonian_never_moves() {
        let d = spectral_decompose(&HermitianMatrix::zeros(4), DEFAULT_DEGENERACY_TOL).unwrap();
        let id = DMatrix::<f64>::identity(4, 4);
        assert_eq!(transfer_matrix(&d, 1.3).unwrap().entries, id);
        assert_eq!(avg_transfer_matrix(&d, Horizon::Infinite).unwrap().entries, id);
        assert_eq!(avg_transfer_matrix(&d, Horizon::Finite(2.0)).unwrap().entries, id);
    }

    #[test]
    fn rejects_non_positive_time() {
        let d = flip();
        assert!(matches!(
            avg_transfer_matrix(&d, Horizon::Finite(0.0)),
            Err(Error::NonPositiveTime(_))
        ));
        assert!(matches!(
            avg_transfer_matrix(&d, Horizon::Finite(-1.0)),
            Err(Error::NonPositiveTime(_))
        ));
        let rho = DensityMatrix::pure(&[1.0.into(), 0.0.into()]).unwrap();
        assert!(matches!(
            avg_density(&d, &rho, Horizon::Finite(0.0)),
            Err(Error::NonPositiveTime(_))
        ));
    }

    #[test]
    fn infinite_average_is_mixing_matrix() {
        let h = random_hermitian(6, 11);
        let d = spectral_decompose(&h, DEFAULT_DEGENERACY_TOL).unwrap();
        assert_eq!(d.num_eigenspaces(), 6);
        let eig = SymmetricEigen::new(h.matrix().clone());
        let mut mixing = DMatrix::<f64>::zeros(6, 6);
        for k in 0..6 {
            let v = eig.eigenvectors.column(k);
            for a in 0..6 {
                for b in 0..6 {
                    mixing[(a, b)] += (v[a] * v[b].conj()).norm_sqr();
                }
            }
        }
        let r = avg_transfer_matrix(&d, Horizon::Infinite).unwrap();
        assert!(max_abs_real(&(r.entries - mixing)) < 1e-12);
    }

    #[test]
    fn finite_average_matches_quadrature() {
        let h = two_cliques_bridged();
        let d = spectral_decompose(&h, DEFAULT_DEGENERACY_TOL).unwrap();
        let t = 4.0;
        let oracle = simpson_time_average(&h, t, 10_000, |u| u.map(|z| Complex64::new(z.norm_sqr(), 0.0)));
        let r = avg_transfer_matrix(&d, Horizon::Finite(t)).unwrap();
        assert!(max_abs(&(r.entries.map(|x| Complex64::new(x, 0.0)) - oracle)) < 1e-6);

        let psi = vec![Complex64::new(1.0 / 6f64.sqrt(), 0.0); 6];
        let rho0 = DensityMatrix::pure(&psi).unwrap();
        let oracle = simpson_time_average(&h, t, 10_000, |u| u * rho0.matrix() * u.adjoint());
        let rho = avg_density(&d, &rho0, Horizon::Finite(t)).unwrap();
        assert!(max_abs(&(rho.matrix() - oracle)) < 1e-6);
    }

    #[test]
    fn doubly_stochastic_on_random_inputs() {
        for seed in 0..200u64 {
            let n = 1 + (seed as usize % 20);
            let d = spectral_decompose(&random_hermitian(n, seed), DEFAULT_DEGENERACY_TOL).unwrap();
            let t = 0.5 * (seed % 200) as f64 + 0.01;
            for r in [
                transfer_matrix(&d, t).unwrap(),
                avg_transfer_matrix(&d, Horizon::Finite(t)).unwrap(),
                avg_transfer_matrix(&d, Horizon::Infinite).unwrap(),
            ] {
                assert!(r.stochasticity_defect() < 1e-9, "seed {seed}");
                assert!(r.entries.iter().all(|&x| (-1e-12..=1.0 + 1e-12).contains(&x)));
            }
        }
    }

    #[test]
    fn short_time_limit_matches_expansion() {
        for seed in 0..10 {
            let h = random_hermitian(7, seed);
            let scaled = h.matrix() / Complex64::new(h.spectral_norm(), 0.0);
            let h = HermitianMatrix::new(scaled, 1e-12).unwrap();
            let d = spectral_decompose(&h, DEFAULT_DEGENERACY_TOL).unwrap();
            let t = 1e-3;
            let avg = avg_transfer_matrix(&d, Horizon::Finite(t)).unwrap().entries;
            let short = short_time_avg_transfer(&h, t).entries;
            let id = DMatrix::<f64>::identity(7, 7);
            let lhs = (avg - &id) / (t * t);
            let rhs = (short - &id) / (t * t);
            assert!(max_abs_real(&(lhs - rhs)) < 1e-4);
        }
    }

    #[test]
    fn short_time_expansion_ignores_phases_and_diagonal() {
        let h = HermitianMatrix::from_real_rows(&[vec![0., 1.], vec![1., 0.]]).unwrap();
        let r = short_time_avg_transfer(&h, 0.01);
        assert_abs_diff_eq!(r.entries[(0, 1)], 1e-4 / 3.0, epsilon = 1e-18);
        assert_eq!(short_time_avg_transfer(&h, 0.0).entries, DMatrix::identity(2, 2));

        let mut m = h.matrix().clone();
        m[(0, 1)] = Complex64::from_polar(1.0, 0.8);
        m[(1, 0)] = m[(0, 1)].conj();
        m[(0, 0)] = Complex64::new(5.0, 0.0);
        let shifted = short_time_avg_transfer(&HermitianMatrix::new(m, 1e-12).unwrap(), 0.01);
        assert_abs_diff_eq!(shifted.entries[(0, 1)], r.entries[(0, 1)], epsilon = 1e-18);
    }

    #[test]
    fn long_time_limit_is_approached() {
        let h = random_hermitian(6, 5);
        let d = spectral_decompose(&h, DEFAULT_DEGENERACY_TOL).unwrap();
        let t = 1e4 / d.min_gap().unwrap();
        let finite = avg_transfer_matrix(&d, Horizon::Finite(t)).unwrap().entries;
        let inf = avg_transfer_matrix(&d, Horizon::Infinite).unwrap().entries;
        assert!(max_abs_real(&(finite - inf)) < 1e-3);
    }

    #[test]
    fn real_hamiltonian_transfer_is_symmetric() {
        let h = two_cliques_bridged();
        let d = spectral_decompose(&h, DEFAULT_DEGENERACY_TOL).unwrap();
        for t in [0.2, 1.7, 9.0] {
            let r = transfer_matrix(&d, t).unwrap().entries;
            assert!(max_abs_real(&(&r - r.transpose())) < 1e-14);
        }
    }

    #[test]
    fn flip_moves_excitation_across() {
        let rho0 = DensityMatrix::pure(&[1.0.into(), 0.0.into()]).unwrap();
        let rho = evolve_density(&flip(), &rho0, FRAC_PI_2).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[0.0.into(), 0.0.into(), 0.0.into(), 1.0.into()]);
        assert!(max_abs(&(rho.matrix() - expected)) < 1e-15);
        let same = evolve_density(&flip(), &rho0, 0.0).unwrap();
        assert!(max_abs(&(same.matrix() - rho0.matrix())) < 1e-15);
    }

    #[test]
    fn evolution_preserves_trace_and_validity() {
        for seed in 0..20 {
            let h = random_hermitian(6, seed);
            let d = spectral_decompose(&h, DEFAULT_DEGENERACY_TOL).unwrap();
            let psi: Vec<Complex64> = (0..6)
                .map(|k| Complex64::from_polar(1.0 / 6f64.sqrt(), k as f64 * 0.9))
                .collect();
            let rho0 = DensityMatrix::pure(&psi).unwrap();
            let rho = evolve_density(&d, &rho0, 3.3).unwrap();
            assert!((rho.matrix().trace().re - 1.0).abs() < 1e-10);
            for horizon in [Horizon::Finite(2.0), Horizon::Infinite] {
                let avg = avg_density(&d, &rho0, horizon).unwrap();
                DensityMatrix::new(avg.matrix().clone()).unwrap();
            }
        }
    }

    #[test]
    fn stationary_state_is_unchanged_by_averaging() {
        let h = two_cliques_bridged();
        let d = spectral_decompose(&h, DEFAULT_DEGENERACY_TOL).unwrap();
        // Top eigenvector is stationary.
        let top = d.projectors().last().unwrap();
        assert_eq!(top.trace().re.round(), 1.0);
        let rho0 = DensityMatrix::new(top.clone()).unwrap();
        for horizon in [Horizon::Finite(3.0), Horizon::Infinite] {
            let avg = avg_density(&d, &rho0, horizon).unwrap();
            assert!(max_abs(&(avg.matrix() - rho0.matrix())) < 1e-12);
        }
    }

    #[test]
    fn infinite_average_removes_cross_eigenspace_coherence() {
        let h = random_hermitian(5, 2);
        let d = spectral_decompose(&h, DEFAULT_DEGENERACY_TOL).unwrap();
        let psi: Vec<Complex64> = (0..5).map(|_| Complex64::new(1.0 / 5f64.sqrt(), 0.0)).collect();
        let rho0 = DensityMatrix::pure(&psi).unwrap();
        let avg = avg_density(&d, &rho0, Horizon::Infinite).unwrap();
        let p = d.projectors();
        for j in 0..p.len() {
            for k in 0..p.len() {
                if j != k {
                    assert!(max_abs(&(&p[j] * avg.matrix() * &p[k])) < 1e-12);
                }
            }
        }
    }
}
