use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::{index, IndexedRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;
use crate::partitioning::Partition;

/// Equal-size planted partition with a fraction of edges rewired across
/// communities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlantedSpec {
    pub n: usize,
    pub n_communities: usize,
    /// Average number of intra-community neighbours before rewiring.
    pub mean_degree: f64,
    pub rewire_fraction: f64,
    pub seed: u64,
}

impl PlantedSpec {
    pub fn community_size(&self) -> usize {
        self.n / self.n_communities
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n_communities == 0 {
            return Err(Error::InvalidSpec("n and the community count must be positive".into()));
        }
        if self.n % self.n_communities != 0 {
            return Err(Error::InvalidSpec(format!(
                "n = {} is not divisible into {} equal communities",
                self.n, self.n_communities
            )));
        }
        if !(0.0..=1.0).contains(&self.rewire_fraction) {
            return Err(Error::InvalidSpec(format!(
                "rewire fraction {} outside [0, 1]",
                self.rewire_fraction
            )));
        }
        let size = self.community_size();
        if self.mean_degree.is_nan() || self.mean_degree < 0.0 || self.mean_degree >= size as f64 {
            return Err(Error::InfeasibleDegree {
                mean_degree: self.mean_degree,
                community_size: size,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedNetwork {
    /// Adjacency matrix as a Hamiltonian (`H_ij = A_ij`).
    pub hamiltonian: HermitianMatrix,
    pub partition: Partition,
    pub connected: bool,
}

/// Samples the graph deterministically from `spec.seed`.
///
/// Each community receives `round(s·k/2)` distinct edges drawn uniformly from
/// its `s(s-1)/2` node pairs. Then `round(f·E)` distinct edges are rewired:
/// one endpoint, chosen at random, is moved to a uniformly drawn node of
/// another community, skipping targets that would duplicate an edge.
pub fn planted_hamiltonian(spec: &PlantedSpec) -> Result<PlantedNetwork> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let size = spec.community_size();
    let community = |v: usize| v / size;

    let pairs: Vec<(usize, usize)> = (0..size).flat_map(|i| ((i + 1)..size).map(move |j| (i, j))).collect();
    let per_community = ((size as f64 * spec.mean_degree / 2.0).round() as usize).min(pairs.len());
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for c in 0..spec.n_communities {
        let offset = c * size;
        let mut chosen = index::sample(&mut rng, pairs.len(), per_community).into_vec();
        chosen.sort_unstable();
        edges.extend(chosen.into_iter().map(|p| (pairs[p].0 + offset, pairs[p].1 + offset)));
    }

    let mut present: BTreeSet<(usize, usize)> = edges.iter().copied().collect();
    let n_rewire = (spec.rewire_fraction * edges.len() as f64).round() as usize;
    if spec.n_communities > 1 && n_rewire > 0 {
        let mut targets = index::sample(&mut rng, edges.len(), n_rewire).into_vec();
        targets.sort_unstable();
        for e in targets {
            let (a, b) = edges[e];
            let (keep, _moved) = if rng.random_bool(0.5) { (a, b) } else { (b, a) };
            let candidates: Vec<usize> = (0..spec.n)
                .filter(|&v| community(v) != community(keep) && !present.contains(&ordered(keep, v)))
                .collect();
            if let Some(&v) = candidates.choose(&mut rng) {
                present.remove(&(a, b));
                let new = ordered(keep, v);
                present.insert(new);
                edges[e] = new;
            }
        }
    }

    let mut m = DMatrix::zeros(spec.n, spec.n);
    for &(i, j) in &present {
        m[(i, j)] = Complex64::new(1.0, 0.0);
        m[(j, i)] = Complex64::new(1.0, 0.0);
    }
    let labels: Vec<usize> = (0..spec.n).map(community).collect();
    Ok(PlantedNetwork {
        connected: is_connected(spec.n, &present),
        hamiltonian: HermitianMatrix::from_exact(m),
        partition: Partition::from_labels(&labels)?,
    })
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn is_connected(n: usize, edges: &BTreeSet<(usize, usize)>) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(i, j) in edges {
        adj[i].push(j);
        adj[j].push(i);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize, k: usize, deg: f64, rewire: f64, seed: u64) -> PlantedSpec {
        PlantedSpec {
            n,
            n_communities: k,
            mean_degree: deg,
            rewire_fraction: rewire,
            seed,
        }
    }

    fn edge_count(h: &HermitianMatrix) -> usize {
        h.matrix().iter().filter(|z| z.re != 0.0).count() / 2
    }

    #[test]
    fn no_rewiring_is_block_diagonal() {
        let net = planted_hamiltonian(&spec(60, 4, 6.0, 0.0, 3)).unwrap();
        let p = &net.partition;
        for i in 0..60 {
            for j in 0..60 {
                if p.label(i) != p.label(j) {
                    assert_eq!(net.hamiltonian.get(i, j).norm(), 0.0);
                }
            }
        }
        assert_eq!(edge_count(&net.hamiltonian), 4 * 45);
    }

    #[test]
    fn adjacency_is_zero_one_symmetric() {
        let net = planted_hamiltonian(&spec(60, 4, 6.0, 0.05, 11)).unwrap();
        let h = &net.hamiltonian;
        for i in 0..60 {
            assert_eq!(h.get(i, i).norm(), 0.0);
            for j in 0..60 {
                let z = h.get(i, j);
                assert!(z == Complex64::new(0.0, 0.0) || z == Complex64::new(1.0, 0.0));
                assert_eq!(z, h.get(j, i));
            }
        }
        // Rewiring keeps the edge count.
        assert_eq!(edge_count(h), 180);
        let cross = (0..60)
            .flat_map(|i| (0..60).map(move |j| (i, j)))
            .filter(|&(i, j)| i < j && h.get(i, j).re != 0.0 && net.partition.label(i) != net.partition.label(j))
            .count();
        assert_eq!(cross, 9);
    }

    #[test]
    fn deterministic_in_seed() {
        let a = planted_hamiltonian(&spec(40, 4, 4.0, 0.1, 5)).unwrap();
        let b = planted_hamiltonian(&spec(40, 4, 4.0, 0.1, 5)).unwrap();
        let c = planted_hamiltonian(&spec(40, 4, 4.0, 0.1, 6)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.hamiltonian, c.hamiltonian);
    }

    #[test]
    fn invalid_specs() {
        assert!(matches!(
            planted_hamiltonian(&spec(10, 2, 9.0, 0.0, 0)),
            Err(Error::InfeasibleDegree { community_size: 5, .. })
        ));
        assert!(matches!(
            planted_hamiltonian(&spec(10, 3, 2.0, 0.0, 0)),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            planted_hamiltonian(&spec(10, 2, 2.0, 1.5, 0)),
            Err(Error::InvalidSpec(_))
        ));
    }

    #[test]
    fn complete_communities() {
        let net = planted_hamiltonian(&spec(12, 3, 3.0, 0.0, 0)).unwrap();
        assert_eq!(edge_count(&net.hamiltonian), 3 * 6);
        assert!(!net.connected);
    }
}
