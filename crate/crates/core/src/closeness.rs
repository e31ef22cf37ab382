//! Node-level closeness matrices derived from quantum-walk dynamics, and the
//! pairwise-mean aggregation that lifts them to communities.
//!
//! Every matrix carries the overall factor `2/n²`, so a community closeness is
//! `c(A, B) = 2/(n²|A||B|) Σ_{a∈A, b∈B} A_ab` with `A_ab` the per-measure
//! adjacency. Partitions only depend on closeness up to a positive scale.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{average_weight, avg_transfer_matrix, pair_kernel, Horizon};
use crate::error::{Error, Result};
use crate::hermitian::SpectralDecomposition;

/// Which dynamical quantity a closeness matrix is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    /// Symmetrized inter-node transport probability.
    Transport,
    /// Overlap of the evolved state with the initial uniform superposition.
    Fidelity,
    /// [`Measure::Fidelity`] averaged over the initial-state phases.
    FidelityPhaseAvg,
    /// Coherence destroyed by a community measurement.
    Purity,
    /// [`Measure::Purity`] averaged over the initial-state phases.
    PurityPhaseAvg,
}

impl Measure {
    pub const ALL: [Measure; 5] = [
        Measure::Transport,
        Measure::Fidelity,
        Measure::FidelityPhaseAvg,
        Measure::Purity,
        Measure::PurityPhaseAvg,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Transport => "transport",
            Measure::Fidelity => "fidelity",
            Measure::FidelityPhaseAvg => "fidelity_phase_avg",
            Measure::Purity => "purity",
            Measure::PurityPhaseAvg => "purity_phase_avg",
        }
    }

    /// Whether the measure depends on the initial-state phases.
    pub fn uses_phases(self) -> bool {
        matches!(self, Measure::Fidelity | Measure::Purity)
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s || m.name().replace('_', "-") == s)
            .ok_or_else(|| Error::parse("measure", format!("unknown measure `{s}`")))
    }
}

/// Time regime of a closeness matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    /// Leading order of the `t → 0` expansion.
    Short,
    /// Uniform average over `[0, t]`.
    Finite(f64),
    /// `t → ∞` average.
    Infinite,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Short => "short",
            Regime::Finite(_) => "finite",
            Regime::Infinite => "infinite",
        }
    }

    pub fn horizon(self) -> Option<Horizon> {
        match self {
            Regime::Short => None,
            Regime::Finite(t) => Some(Horizon::Finite(t)),
            Regime::Infinite => Some(Horizon::Infinite),
        }
    }
}

impl From<Horizon> for Regime {
    fn from(h: Horizon) -> Self {
        match h {
            Horizon::Finite(t) => Regime::Finite(t),
            Horizon::Infinite => Regime::Infinite,
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::Finite(t) => write!(f, "finite(t={t})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Phases `θ_k` of the initial state `|ψ⟩ = n^{-1/2} Σ_k e^{iθ_k}|k⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector(Vec<f64>);

impl PhaseVector {
    /// Angles are reduced into `[0, 2π)`.
    pub fn new(thetas: Vec<f64>) -> Self {
        PhaseVector(
            thetas
                .into_iter()
                .map(|t| t.rem_euclid(std::f64::consts::TAU))
                .collect(),
        )
    }

    pub fn zeros(n: usize) -> Self {
        PhaseVector(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn thetas(&self) -> &[f64] {
        &self.0
    }

    pub fn state(&self) -> Vec<Complex64> {
        let amp = 1.0 / (self.0.len() as f64).sqrt();
        self.0.iter().map(|&t| Complex64::from_polar(amp, t)).collect()
    }
}

/// Symmetric node closeness `c(i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeCloseness {
    entries: DMatrix<f64>,
    measure: Measure,
    regime: Regime,
}

impl NodeCloseness {
    /// Wraps a square matrix, symmetrizing it as `(M + Mᵀ)/2`.
    pub fn new(entries: DMatrix<f64>, measure: Measure, regime: Regime) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::NonSquare {
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        if entries.nrows() == 0 {
            return Err(Error::EmptyMatrix);
        }
        Ok(Self::symmetric(entries, measure, regime))
    }

    fn symmetric(mut entries: DMatrix<f64>, measure: Measure, regime: Regime) -> Self {
        let n = entries.nrows();
        for i in 0..n {
            for j in (i + 1)..n {
                let v = 0.5 * (entries[(i, j)] + entries[(j, i)]);
                entries[(i, j)] = v;
                entries[(j, i)] = v;
            }
        }
        NodeCloseness {
            entries,
            measure,
            regime,
        }
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn measure(&self) -> Measure {
        self.measure
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// Multiplies every entry by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        NodeCloseness {
            entries: &self.entries * factor,
            ..self.clone()
        }
    }

    /// Relabels nodes: node `i` of `self` becomes node `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.n();
        let mut entries = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                entries[(perm[i], perm[j])] = self.entries[(i, j)];
            }
        }
        NodeCloseness {
            entries,
            ..self.clone()
        }
    }

    /// Largest off-diagonal magnitude.
    pub fn max_abs_off_diagonal(&self) -> f64 {
        let n = self.n();
        let mut m = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    m = m.max(self.entries[(i, j)].abs());
                }
            }
        }
        m
    }
}

fn pair_scale(n: usize) -> f64 {
    2.0 / (n * n) as f64
}

/// Transport closeness `(2/n²) R̃_ab` from the (time-averaged) symmetrized
/// transfer matrix. The short regime keeps the `t²` coefficient of the
/// expansion, `|H_ab|²/3`, off the diagonal and zero on it.
pub fn closeness_transport(d: &SpectralDecomposition, regime: Regime) -> Result<NodeCloseness> {
    let n = d.n();
    let scale = pair_scale(n);
    let entries = match regime {
        Regime::Short => short_transport_entries(d.source().matrix(), scale),
        Regime::Finite(_) | Regime::Infinite => {
            let horizon = regime.horizon().expect("time-averaged regime");
            avg_transfer_matrix(d, horizon)?.symmetrized() * scale
        }
    };
    Ok(NodeCloseness::symmetric(entries, Measure::Transport, regime))
}

/// Short-regime transport closeness straight from the Hamiltonian, without a
/// decomposition.
pub fn closeness_transport_short(h: &crate::hermitian::HermitianMatrix) -> NodeCloseness {
    let entries = short_transport_entries(h.matrix(), pair_scale(h.n()));
    NodeCloseness::symmetric(entries, Measure::Transport, Regime::Short)
}

fn short_transport_entries(h: &DMatrix<Complex64>, scale: f64) -> DMatrix<f64> {
    let n = h.nrows();
    DMatrix::from_fn(n, n, |a, b| {
        if a == b {
            0.0
        } else {
            scale * h[(a, b)].norm_sqr() / 3.0
        }
    })
}

fn check_phases(d: &SpectralDecomposition, phases: &PhaseVector) -> Result<()> {
    if phases.len() != d.n() {
        return Err(Error::DimensionMismatch {
            expected: d.n(),
            found: phases.len(),
        });
    }
    Ok(())
}

/// Rows `Λ_k ψ`, one per eigenspace.
fn eigen_components(d: &SpectralDecomposition, psi: &[Complex64]) -> DMatrix<Complex64> {
    let n = d.n();
    let psi = DVector::from_column_slice(psi);
    let mut out = DMatrix::zeros(d.num_eigenspaces(), n);
    for (k, p) in d.projectors().iter().enumerate() {
        let v = p * &psi;
        out.row_mut(k).copy_from(&v.transpose());
    }
    out
}

/// Fidelity closeness `2 Re(ρ̄_ab ρ_ba(0))` for the uniform superposition with
/// the given phases. Entries may be negative.
pub fn closeness_fidelity(d: &SpectralDecomposition, phases: &PhaseVector, horizon: Horizon) -> Result<NodeCloseness> {
    let horizon = horizon.validate()?;
    check_phases(d, phases)?;
    let n = d.n();
    let psi = phases.state();
    let comps = eigen_components(d, &psi);
    let kernel = pair_kernel(d, horizon);
    // ρ̄_ab = Σ_jk K_jk (Λ_j ψ)_a conj((Λ_k ψ)_b)
    let rho_avg = comps.transpose() * kernel * comps.map(|z| z.conj());
    let mut entries = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let rho0_ba = psi[b] * psi[a].conj();
            let v = 2.0 * (rho_avg[(a, b)] * rho0_ba).re;
            entries[(a, b)] = v;
            entries[(b, a)] = v;
        }
    }
    Ok(NodeCloseness::symmetric(entries, Measure::Fidelity, horizon.into()))
}

/// Fidelity closeness averaged over all initial phases:
/// `A_ab = avg Re(U_aa conj(U_bb))` off the diagonal, `A_aa = 1`.
pub fn closeness_fidelity_phase_avg(d: &SpectralDecomposition, horizon: Horizon) -> Result<NodeCloseness> {
    let horizon = horizon.validate()?;
    let n = d.n();
    let diag = DMatrix::from_fn(d.num_eigenspaces(), n, |k, a| d.projectors()[k][(a, a)].re);
    let kernel = pair_kernel(d, horizon).map(|z| z.re);
    let adj = diag.transpose() * kernel * &diag;
    let scale = pair_scale(n);
    let mut entries = DMatrix::zeros(n, n);
    for a in 0..n {
        entries[(a, a)] = scale;
        for b in (a + 1)..n {
            let v = scale * adj[(a, b)];
            entries[(a, b)] = v;
            entries[(b, a)] = v;
        }
    }
    Ok(NodeCloseness::symmetric(
        entries,
        Measure::FidelityPhaseAvg,
        horizon.into(),
    ))
}

/// Distinct Bohr frequencies `E_j − E_k` with the eigenspace pairs producing
/// them.
struct FrequencyTable {
    freqs: Vec<f64>,
    members: Vec<Vec<(usize, usize)>>,
}

impl FrequencyTable {
    fn new(d: &SpectralDecomposition) -> Self {
        let e = d.eigenvalues();
        let m = e.len();
        let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(m * m);
        for j in 0..m {
            for k in 0..m {
                let w = if j == k { 0.0 } else { e[j] - e[k] };
                pairs.push((w, j, k));
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let tol = d.grouping_tol();
        let mut freqs: Vec<f64> = Vec::new();
        let mut members: Vec<Vec<(usize, usize)>> = Vec::new();
        let mut sums: Vec<f64> = Vec::new();
        let mut prev = f64::NEG_INFINITY;
        for (w, j, k) in pairs {
            if members.is_empty() || w - prev > tol {
                members.push(Vec::new());
                sums.push(0.0);
            }
            members.last_mut().unwrap().push((j, k));
            *sums.last_mut().unwrap() += w;
            prev = w;
        }
        for (s, g) in sums.iter().zip(&members) {
            freqs.push(s / g.len() as f64);
        }
        FrequencyTable { freqs, members }
    }

    fn len(&self) -> usize {
        self.freqs.len()
    }

    /// `K_gh = avg e^{-i(ω_g + ω_h)t}`; in the infinite limit, resonant
    /// combinations (`ω_g + ω_h ≈ 0`) survive with weight one.
    fn quartic_kernel(&self, horizon: Horizon, tol: f64) -> DMatrix<Complex64> {
        let f = self.len();
        DMatrix::from_fn(f, f, |g, h| average_weight(self.freqs[g] + self.freqs[h], horizon, tol))
    }
}

/// Purity closeness `2 avg |ρ_ab(t)|²` for the uniform superposition with the
/// given phases.
pub fn closeness_purity(d: &SpectralDecomposition, phases: &PhaseVector, horizon: Horizon) -> Result<NodeCloseness> {
    let horizon = horizon.validate()?;
    check_phases(d, phases)?;
    let n = d.n();
    let comps = eigen_components(d, &phases.state());
    let table = FrequencyTable::new(d);
    // |ρ_ab(t)|² = p_a(t) p_b(t) with p_a(t) = |ψ_a(t)|² = Σ_g e^{-iω_g t} C_ga.
    let coeffs = DMatrix::from_fn(table.len(), n, |g, a| {
        table.members[g]
            .iter()
            .map(|&(j, k)| comps[(j, a)] * comps[(k, a)].conj())
            .sum::<Complex64>()
    });
    let kernel = table.quartic_kernel(horizon, 2.0 * d.grouping_tol());
    let avg = coeffs.transpose() * (kernel * &coeffs);
    let mut entries = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let v = 2.0 * avg[(a, b)].re.max(0.0);
            entries[(a, b)] = v;
            entries[(b, a)] = v;
        }
    }
    Ok(NodeCloseness::symmetric(entries, Measure::Purity, horizon.into()))
}

/// Purity closeness averaged over all initial phases:
/// `A_ab = 1 + δ_ab − avg Σ_x R_ax(t) R_bx(t)`.
pub fn closeness_purity_phase_avg(d: &SpectralDecomposition, horizon: Horizon) -> Result<NodeCloseness> {
    use rayon::prelude::*;

    let horizon = horizon.validate()?;
    let n = d.n();
    let proj = d.projectors();
    let table = FrequencyTable::new(d);
    // R_ax(t) = Σ_g e^{-iω_g t} D_g,(a,x); column index a*n + x.
    let coeffs = DMatrix::from_fn(table.len(), n * n, |g, col| {
        let (a, x) = (col / n, col % n);
        table.members[g]
            .iter()
            .map(|&(j, k)| proj[j][(a, x)] * proj[k][(a, x)].conj())
            .sum::<Complex64>()
    });
    let kernel = table.quartic_kernel(horizon, 2.0 * d.grouping_tol());
    let weighted = &kernel * &coeffs;
    let scale = pair_scale(n);
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|a| {
            (0..n)
                .map(|b| {
                    let mut s = Complex64::new(0.0, 0.0);
                    for x in 0..n {
                        s += coeffs.column(a * n + x).dot(&weighted.column(b * n + x));
                    }
                    let delta = if a == b { 1.0 } else { 0.0 };
                    scale * (1.0 + delta - s.re)
                })
                .collect()
        })
        .collect();
    let entries = DMatrix::from_fn(n, n, |a, b| rows[a.min(b)][a.max(b)]);
    Ok(NodeCloseness::symmetric(
        entries,
        Measure::PurityPhaseAvg,
        horizon.into(),
    ))
}

/// Pairwise-mean closeness `Σ_{i∈A, j∈B} c(i, j) / (|A||B|)` of two disjoint
/// node sets.
pub fn community_closeness(c: &NodeCloseness, a: &[usize], b: &[usize]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyCommunity);
    }
    let n = c.n();
    let mut in_a = vec![false; n];
    for &i in a {
        if i >= n {
            return Err(Error::NodeOutOfRange { node: i, n });
        }
        in_a[i] = true;
    }
    for &j in b {
        if j >= n {
            return Err(Error::NodeOutOfRange { node: j, n });
        }
        if in_a[j] {
            return Err(Error::OverlappingCommunities(j));
        }
    }
    let mut sum = 0.0;
    for &i in a {
        for &j in b {
            sum += c.get(i, j);
        }
    }
    Ok(sum / (a.len() * b.len()) as f64)
}
