//! Community stability under random hopping phases.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;
use crate::network_lab::randomize_phases;
use crate::partitioning::{nmi, Partition};
use crate::pipeline::{detect, MeasureSpec};

/// Summary of one `σ` of the sweep. Standard deviations use the `N - 1`
/// denominator and are zero for a single sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub sigma: f64,
    pub mean_nmi_vs_zero_phase: f64,
    pub std_nmi_vs_zero_phase: f64,
    pub mean_nmi_vs_planted: Option<f64>,
    pub std_nmi_vs_planted: Option<f64>,
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// For each `σ`, partitions `samples` phase-randomized copies of `base` and
/// compares them with the zero-phase partition (and `planted`, if given).
///
/// Sample `s` uses seed `seed + s` for every `σ`, so results do not depend on
/// scheduling.
pub fn phase_sweep(
    base: &HermitianMatrix,
    planted: Option<&Partition>,
    spec: &MeasureSpec,
    sigmas: &[f64],
    samples: usize,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    if samples == 0 {
        return Err(Error::InvalidSpec("at least one sample is required".into()));
    }
    if let Some(p) = planted {
        if p.n() != base.n() {
            return Err(Error::MismatchedNodeSets {
                left: base.n(),
                right: p.n(),
            });
        }
    }
    let reference = detect(base, spec)?.partition;
    sigmas
        .iter()
        .map(|&sigma| {
            let scores = (0..samples)
                .into_par_iter()
                .map(|s| {
                    let run = || -> Result<(f64, Option<f64>)> {
                        let h = randomize_phases(base, sigma, seed.wrapping_add(s as u64))?;
                        let found = detect(&h, spec)?.partition;
                        let vs_zero = nmi(&found, &reference)?;
                        let vs_planted = planted.map(|p| nmi(&found, p)).transpose()?;
                        Ok((vs_zero, vs_planted))
                    };
                    run().map_err(|e| Error::Sample {
                        sigma,
                        sample: s,
                        source: Box::new(e),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let zero: Vec<f64> = scores.iter().map(|s| s.0).collect();
            let (mean_z, std_z) = mean_std(&zero);
            let (mean_p, std_p) = match planted {
                Some(_) => {
                    let v: Vec<f64> = scores.iter().filter_map(|s| s.1).collect();
                    let (m, sd) = mean_std(&v);
                    (Some(m), Some(sd))
                }
                None => (None, None),
            };
            Ok(SweepRow {
                sigma,
                mean_nmi_vs_zero_phase: mean_z,
                std_nmi_vs_zero_phase: std_z,
                mean_nmi_vs_planted: mean_p,
                std_nmi_vs_planted: std_p,
            })
        })
        .collect()
}
