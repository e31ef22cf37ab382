//! Agglomerative clustering over a closeness matrix, modularity-based level
//! selection and partition comparison.

mod agglomerate;
mod modularity;
mod nmi;

pub use agglomerate::{agglomerate, best_level, Dendrogram, Level, MergeStep};
pub use modularity::{modularity, signed_modularity};
pub use nmi::nmi;

use crate::error::{Error, Result};

/// Disjoint cover of `0..n` by non-empty communities.
///
/// Labels are canonical: community ids are `0..k`, numbered by the first node
/// that belongs to each.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    labels: Vec<usize>,
    num_communities: usize,
}

impl Partition {
    /// Accepts arbitrary label values and renumbers them canonically.
    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidPartition("no nodes".into()));
        }
        let mut map = std::collections::HashMap::new();
        let canonical = labels
            .iter()
            .map(|l| {
                let next = map.len();
                *map.entry(*l).or_insert(next)
            })
            .collect();
        Ok(Partition {
            labels: canonical,
            num_communities: map.len(),
        })
    }

    /// Builds a partition from explicit communities covering `0..n`.
    pub fn from_communities(n: usize, communities: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (c, members) in communities.iter().enumerate() {
            if members.is_empty() {
                return Err(Error::EmptyCommunity);
            }
            for &i in members {
                if i >= n {
                    return Err(Error::NodeOutOfRange { node: i, n });
                }
                if labels[i] != usize::MAX {
                    return Err(Error::OverlappingCommunities(i));
                }
                labels[i] = c;
            }
        }
        if let Some(i) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidPartition(format!("node {i} is not assigned")));
        }
        Partition::from_labels(&labels)
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            labels: (0..n).collect(),
            num_communities: n,
        }
    }

    pub fn single(n: usize) -> Self {
        Partition {
            labels: vec![0; n],
            num_communities: 1,
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, node: usize) -> usize {
        self.labels[node]
    }

    pub fn num_communities(&self) -> usize {
        self.num_communities
    }

    /// Members of each community, ascending, indexed by label.
    pub fn communities(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_communities];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l].push(i);
        }
        out
    }

    /// Whether every community of `self` lies inside one community of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        if self.n() != coarser.n() {
            return false;
        }
        let mut image = vec![usize::MAX; self.num_communities];
        self.labels.iter().zip(&coarser.labels).all(|(&fine, &coarse)| {
            if image[fine] == usize::MAX {
                image[fine] = coarse;
            }
            image[fine] == coarse
        })
    }

    /// Relabels nodes: node `i` becomes node `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Partition {
        let mut labels = vec![0; self.n()];
        for (i, &l) in self.labels.iter().enumerate() {
            labels[perm[i]] = l;
        }
        Partition::from_labels(&labels).expect("non-empty")
    }
}
