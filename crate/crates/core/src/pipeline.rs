//! Hamiltonian → closeness → dendrogram → best partition.

use crate::closeness::{
    closeness_fidelity, closeness_fidelity_phase_avg, closeness_purity, closeness_purity_phase_avg,
    closeness_transport, closeness_transport_short, Measure, NodeCloseness, PhaseVector, Regime,
};
use crate::error::{Error, Result};
use crate::hermitian::{spectral_decompose, HermitianMatrix, DEFAULT_DEGENERACY_TOL};
use crate::partitioning::{agglomerate, best_level, Dendrogram, Partition};

/// Which closeness to build and in which regime.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSpec {
    pub measure: Measure,
    pub regime: Regime,
    /// Initial-state phases for phase-dependent measures; all zero if unset.
    pub phases: Option<PhaseVector>,
    pub degeneracy_tol: f64,
}

impl MeasureSpec {
    pub fn new(measure: Measure, regime: Regime) -> Self {
        MeasureSpec {
            measure,
            regime,
            phases: None,
            degeneracy_tol: DEFAULT_DEGENERACY_TOL,
        }
    }

    pub fn with_phases(mut self, phases: PhaseVector) -> Self {
        self.phases = Some(phases);
        self
    }
}

pub fn closeness(h: &HermitianMatrix, spec: &MeasureSpec) -> Result<NodeCloseness> {
    let horizon = match (spec.measure, spec.regime.horizon()) {
        (Measure::Transport, None) => return Ok(closeness_transport_short(h)),
        (measure, None) => {
            return Err(Error::UnsupportedRegime {
                measure: measure.name(),
                regime: spec.regime.name(),
            })
        }
        (_, Some(horizon)) => horizon.validate()?,
    };
    let d = spectral_decompose(h, spec.degeneracy_tol)?;
    let zeros;
    let phases = match &spec.phases {
        Some(p) => p,
        None => {
            zeros = PhaseVector::zeros(h.n());
            &zeros
        }
    };
    match spec.measure {
        Measure::Transport => closeness_transport(&d, spec.regime),
        Measure::Fidelity => closeness_fidelity(&d, phases, horizon),
        Measure::FidelityPhaseAvg => closeness_fidelity_phase_avg(&d, horizon),
        Measure::Purity => closeness_purity(&d, phases, horizon),
        Measure::PurityPhaseAvg => closeness_purity_phase_avg(&d, horizon),
    }
}

/// Everything produced by one detection run.
#[derive(Debug, Clone)]
pub struct Detection {
    pub closeness: NodeCloseness,
    pub dendrogram: Dendrogram,
    pub partition: Partition,
    pub modularity: f64,
}

pub fn detect(h: &HermitianMatrix, spec: &MeasureSpec) -> Result<Detection> {
    let c = closeness(h, spec)?;
    let dendrogram = agglomerate(&c);
    let (partition, modularity) = best_level(&dendrogram, &c)?;
    Ok(Detection {
        closeness: c,
        dendrogram,
        partition,
        modularity,
    })
}
