//! Hermitian Hamiltonians and their spectral decomposition into eigenspace
//! projectors.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default relative gap below which eigenvalues are treated as degenerate.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-9;

/// A complex Hermitian matrix over `n >= 1` nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    entries: DMatrix<Complex64>,
}

impl HermitianMatrix {
    /// Validates `m` and returns its Hermitian part `(M + M†)/2`.
    pub fn new(m: DMatrix<Complex64>, tol: f64) -> Result<Self> {
        validate_hermitian(m, tol)
    }

    /// Builds a matrix from a real symmetric array, row-major.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for row in rows {
            if row.len() != n {
                return Err(Error::NonSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
        }
        let m = DMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j], 0.0));
        validate_hermitian(m, 1e-12)
    }

    /// Builds an `n×n` matrix from flat row-major real and optional imaginary
    /// parts, validated at `tol`.
    pub fn from_row_major(n: usize, re: &[f64], im: Option<&[f64]>, tol: f64) -> Result<Self> {
        let len = n * n;
        if re.len() != len || im.is_some_and(|im| im.len() != len) {
            return Err(Error::DimensionMismatch {
                expected: len,
                found: if re.len() != len {
                    re.len()
                } else {
                    im.map_or(0, <[f64]>::len)
                },
            });
        }
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let m = DMatrix::from_fn(n, n, |i, j| {
            let k = i * n + j;
            Complex64::new(re[k], im.map_or(0.0, |im| im[k]))
        });
        validate_hermitian(m, tol)
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "a Hamiltonian needs at least one node");
        HermitianMatrix {
            entries: DMatrix::zeros(n, n),
        }
    }

    /// Wraps a matrix the caller has constructed to be exactly Hermitian.
    pub(crate) fn from_exact(entries: DMatrix<Complex64>) -> Self {
        debug_assert!(entries.is_square() && entries.nrows() >= 1);
        HermitianMatrix { entries }
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    /// Largest eigenvalue modulus.
    pub fn spectral_norm(&self) -> f64 {
        let eig = SymmetricEigen::new(self.entries.clone());
        eig.eigenvalues.iter().fold(0.0f64, |acc, e| acc.max(e.abs()))
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }
}

/// Accepts a square matrix whose largest asymmetry `|M_ij - conj(M_ji)|` is
/// at most `tol`, returning its Hermitian symmetrization.
pub fn validate_hermitian(m: DMatrix<Complex64>, tol: f64) -> Result<HermitianMatrix> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidTolerance(tol));
    }
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let n = m.nrows();
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    let mut max_asymmetry = 0.0f64;
    for i in 0..n {
        for j in i..n {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            if !d.is_finite() {
                max_asymmetry = f64::INFINITY;
            } else {
                max_asymmetry = max_asymmetry.max(d);
            }
        }
    }
    if max_asymmetry > tol {
        return Err(Error::AsymmetryExceedsTolerance { max_asymmetry, tol });
    }
    let mut h = m;
    for i in 0..n {
        h[(i, i)] = Complex64::new(h[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let z = (h[(i, j)] + h[(j, i)].conj()) * 0.5;
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    Ok(HermitianMatrix { entries: h })
}

/// `H = Σ_k E_k Λ_k` with distinct eigenvalues in ascending order.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    projectors: Vec<DMatrix<Complex64>>,
    source: HermitianMatrix,
    grouping_tol: f64,
}

impl SpectralDecomposition {
    pub fn n(&self) -> usize {
        self.source.n()
    }

    /// Distinct energies `E_k`, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Orthogonal projectors `Λ_k`, aligned with [`Self::eigenvalues`].
    pub fn projectors(&self) -> &[DMatrix<Complex64>] {
        &self.projectors
    }

    pub fn num_eigenspaces(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn source(&self) -> &HermitianMatrix {
        &self.source
    }

    /// Absolute energy gap under which two levels count as the same.
    pub fn grouping_tol(&self) -> f64 {
        self.grouping_tol
    }

    /// `Σ_k E_k Λ_k`.
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let n = self.n();
        let mut m = DMatrix::zeros(n, n);
        for (e, p) in self.eigenvalues.iter().zip(&self.projectors) {
            m += p * Complex64::new(*e, 0.0);
        }
        m
    }

    /// Smallest gap between distinct eigenvalues, `None` for a single eigenspace.
    pub fn min_gap(&self) -> Option<f64> {
        self.eigenvalues
            .windows(2)
            .map(|w| w[1] - w[0])
            .min_by(|a, b| a.total_cmp(b))
    }
}

/// Diagonalizes `h` and groups eigenvalues whose consecutive gap is within
/// `degeneracy_tol * max(1, E_max - E_min)` into one eigenspace.
pub fn spectral_decompose(h: &HermitianMatrix, degeneracy_tol: f64) -> Result<SpectralDecomposition> {
    if !(degeneracy_tol >= 0.0 && degeneracy_tol.is_finite()) {
        return Err(Error::InvalidTolerance(degeneracy_tol));
    }
    let n = h.n();
    let eig = SymmetricEigen::try_new(h.matrix().clone(), f64::EPSILON, 0).ok_or(Error::EigensolverFailure)?;
    if eig.eigenvalues.iter().any(|e| !e.is_finite()) {
        return Err(Error::EigensolverFailure);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let lo = eig.eigenvalues[order[0]];
    let hi = eig.eigenvalues[order[n - 1]];
    let grouping_tol = degeneracy_tol * (hi - lo).max(1.0);

    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    for &idx in &order {
        let e = eig.eigenvalues[idx];
        match groups.last_mut() {
            Some(g) if e - prev <= grouping_tol => g.push(idx),
            _ => groups.push(vec![idx]),
        }
        prev = e;
    }

    let mut eigenvalues = Vec::with_capacity(groups.len());
    let mut projectors = Vec::with_capacity(groups.len());
    for g in &groups {
        let mean = g.iter().map(|&i| eig.eigenvalues[i]).sum::<f64>() / g.len() as f64;
        let mut p = DMatrix::<Complex64>::zeros(n, n);
        for &idx in g {
            let v = eig.eigenvectors.column(idx);
            p += v * v.adjoint();
        }
        // Exact Hermiticity of each projector.
        for i in 0..n {
            p[(i, i)].im = 0.0;
            for j in (i + 1)..n {
                let z = (p[(i, j)] + p[(j, i)].conj()) * 0.5;
                p[(i, j)] = z;
                p[(j, i)] = z.conj();
            }
        }
        eigenvalues.push(mean);
        projectors.push(p);
    }

    Ok(SpectralDecomposition {
        eigenvalues,
        projectors,
        source: h.clone(),
        grouping_tol,
    })
}
