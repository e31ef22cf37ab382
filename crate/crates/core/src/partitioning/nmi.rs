use std::collections::HashMap;

use super::Partition;
use crate::error::{Error, Result};

/// Entropy (natural log) of a distribution given by counts over `total`.
/// Counts are summed in sorted order so the result depends only on the
/// multiset of counts.
fn entropy(mut counts: Vec<usize>, total: f64) -> f64 {
    counts.sort_unstable();
    counts
        .into_iter()
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / total;
            -p * p.ln()
        })
        .sum()
}

/// Normalized mutual information `2 I(X,Y) / (H(X) + H(Y))`.
///
/// Two single-community partitions score 1.
pub fn nmi(x: &Partition, y: &Partition) -> Result<f64> {
    if x.n() != y.n() {
        return Err(Error::MismatchedNodeSets {
            left: x.n(),
            right: y.n(),
        });
    }
    let total = x.n() as f64;
    let mut joint: HashMap<(usize, usize), usize> = HashMap::new();
    for (&a, &b) in x.labels().iter().zip(y.labels()) {
        *joint.entry((a, b)).or_default() += 1;
    }
    let marginal = |p: &Partition| {
        let mut counts = vec![0usize; p.num_communities()];
        for &l in p.labels() {
            counts[l] += 1;
        }
        counts
    };
    let hx = entropy(marginal(x), total);
    let hy = entropy(marginal(y), total);
    let hxy = entropy(joint.into_values().collect(), total);
    let denom = hx + hy;
    if denom == 0.0 {
        return Ok(1.0);
    }
    let mutual = denom - hxy;
    Ok((2.0 * mutual / denom).clamp(0.0, 1.0))
}
