use nalgebra::DMatrix;

use super::Partition;
use crate::closeness::NodeCloseness;
use crate::error::{Error, Result};

fn check_sizes(c: &NodeCloseness, x: &Partition) -> Result<()> {
    if c.n() != x.n() {
        return Err(Error::MismatchedNodeSets {
            left: c.n(),
            right: x.n(),
        });
    }
    Ok(())
}

/// Adjacency with the diagonal removed.
fn adjacency(c: &NodeCloseness) -> DMatrix<f64> {
    let mut a = c.matrix().clone();
    a.fill_diagonal(0.0);
    a
}

/// Community indicator matrix: `C[i, A] = 1` iff node `i` belongs to `A`.
fn indicator(x: &Partition) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(x.n(), x.num_communities());
    for (i, &l) in x.labels().iter().enumerate() {
        m[(i, l)] = 1.0;
    }
    m
}

/// `tr(Cᵀ B C)` with `B = A - k kᵀ / 2m`, or just `tr(Cᵀ A C)` when there is
/// no null model.
fn trace_form(a: &DMatrix<f64>, x: &Partition, null_model: bool) -> f64 {
    let k = a.row_sum().transpose();
    let two_m = k.sum();
    let c = indicator(x);
    let mut b = a.clone();
    if null_model {
        b -= &k * k.transpose() / two_m;
    }
    (c.transpose() * b * c).trace()
}

/// Newman modularity `Q = tr(Cᵀ B C) / 2m` of a nonnegative closeness,
/// self-loops excluded.
pub fn modularity(c: &NodeCloseness, x: &Partition) -> Result<f64> {
    check_sizes(c, x)?;
    let a = adjacency(c);
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            if a[(i, j)] < 0.0 {
                return Err(Error::NegativeEntries { i, j, value: a[(i, j)] });
            }
        }
    }
    let two_m = a.sum();
    if two_m <= 0.0 {
        return Err(Error::DegenerateTotalWeight);
    }
    Ok(trace_form(&a, x, true) / two_m)
}

/// Modularity with positive and negative weights handled by separate null
/// models, normalized by the total absolute weight. Reduces to
/// [`modularity`] for nonnegative input.
pub fn signed_modularity(c: &NodeCloseness, x: &Partition) -> Result<f64> {
    check_sizes(c, x)?;
    let a = adjacency(c);
    let pos = a.map(|v| v.max(0.0));
    let neg = a.map(|v| (-v).max(0.0));
    let (two_m_pos, two_m_neg) = (pos.sum(), neg.sum());
    if two_m_pos + two_m_neg <= 0.0 {
        return Err(Error::DegenerateTotalWeight);
    }
    let mut q = 0.0;
    if two_m_pos > 0.0 {
        q += trace_form(&pos, x, true);
    }
    if two_m_neg > 0.0 {
        q -= trace_form(&neg, x, true);
    }
    Ok(q / (two_m_pos + two_m_neg))
}
