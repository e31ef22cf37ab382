use super::{signed_modularity, Partition};
use crate::closeness::NodeCloseness;
use crate::error::{Error, Result};

/// Relative width of the band below the maximum closeness within which pairs
/// count as tied and merge together.
pub const TIE_TOL: f64 = 1e-9;

/// One level of the hierarchy. `closeness` is the merge closeness that
/// produced it (`None` for the all-singletons level).
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub closeness: Option<f64>,
    pub partition: Partition,
}

/// Communities joined in one agglomeration step. Each group lists the node
/// sets that became a single community; disjoint groups tied at the same
/// closeness share a step.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeStep {
    pub closeness: f64,
    pub groups: Vec<Vec<Vec<usize>>>,
}

/// Merge history from singletons to a single community.
#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    levels: Vec<Level>,
    merges: Vec<MergeStep>,
}

impl Dendrogram {
    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn merges(&self) -> &[MergeStep] {
        &self.merges
    }

    pub fn n(&self) -> usize {
        self.levels[0].partition.n()
    }

    /// Merge closenesses in order.
    pub fn merge_closeness(&self) -> Vec<f64> {
        self.merges.iter().map(|m| m.closeness).collect()
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut cur = x;
        while self.0[cur] != root {
            let next = self.0[cur];
            self.0[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Keep the smaller index as root so components are ordered stably.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Agglomerative clustering under pairwise-mean community closeness.
///
/// Each step merges at the current maximum closeness; every pair within
/// `TIE_TOL * max|c_ij|` of it is treated as tied, and all communities
/// connected through tied pairs merge at once, which makes the hierarchy
/// independent of node order.
pub fn agglomerate(c: &NodeCloseness) -> Dendrogram {
    let n = c.n();
    let tie_tol = TIE_TOL * c.max_abs_off_diagonal();

    // Active communities (sorted members, ordered by smallest member) and the
    // summed closeness between each pair of them.
    let mut clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut sums: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| c.get(i, j)).collect()).collect();
    let mut levels = vec![Level {
        closeness: None,
        partition: Partition::singletons(n),
    }];
    let mut merges = Vec::new();

    while clusters.len() > 1 {
        let k = clusters.len();
        let mean = |p: usize, q: usize| sums[p][q] / (clusters[p].len() * clusters[q].len()) as f64;
        let mut best = f64::NEG_INFINITY;
        for p in 0..k {
            for q in (p + 1)..k {
                best = best.max(mean(p, q));
            }
        }
        let threshold = best - tie_tol;
        let mut uf = UnionFind::new(k);
        for p in 0..k {
            for q in (p + 1)..k {
                if mean(p, q) >= threshold {
                    uf.union(p, q);
                }
            }
        }

        let mut members_of_root: Vec<Vec<usize>> = vec![Vec::new(); k];
        for p in 0..k {
            let r = uf.find(p);
            members_of_root[r].push(p);
        }
        let components: Vec<Vec<usize>> = members_of_root.into_iter().filter(|m| !m.is_empty()).collect();

        let groups = components
            .iter()
            .filter(|comp| comp.len() > 1)
            .map(|comp| comp.iter().map(|&p| clusters[p].clone()).collect())
            .collect();
        merges.push(MergeStep {
            closeness: best,
            groups,
        });

        let new_clusters: Vec<Vec<usize>> = components
            .iter()
            .map(|comp| {
                let mut m: Vec<usize> = comp.iter().flat_map(|&p| clusters[p].iter().copied()).collect();
                m.sort_unstable();
                m
            })
            .collect();
        let kk = components.len();
        let mut new_sums = vec![vec![0.0; kk]; kk];
        for (a, ca) in components.iter().enumerate() {
            for (b, cb) in components.iter().enumerate() {
                if a != b {
                    new_sums[a][b] = ca
                        .iter()
                        .flat_map(|&p| cb.iter().map(move |&q| (p, q)))
                        .map(|(p, q)| sums[p][q])
                        .sum();
                }
            }
        }
        clusters = new_clusters;
        sums = new_sums;

        let partition = Partition::from_communities(n, &clusters).expect("clusters cover all nodes");
        levels.push(Level {
            closeness: Some(best),
            partition,
        });
    }

    Dendrogram { levels, merges }
}

/// The dendrogram level of maximum signed modularity, ties resolved toward
/// fewer communities. A closeness with zero total weight scores every level
/// as zero.
pub fn best_level(d: &Dendrogram, c: &NodeCloseness) -> Result<(Partition, f64)> {
    if d.n() != c.n() {
        return Err(Error::DimensionMismatch {
            expected: d.n(),
            found: c.n(),
        });
    }
    const Q_TIE: f64 = 1e-12;
    let scores = d
        .levels()
        .iter()
        .map(|level| match signed_modularity(c, &level.partition) {
            Err(Error::DegenerateTotalWeight) => Ok(0.0),
            other => other,
        })
        .collect::<Result<Vec<f64>>>()?;
    let q_max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // Levels are ordered fine to coarse, so the last near-maximal one has the
    // fewest communities.
    let idx = scores
        .iter()
        .rposition(|&q| q >= q_max - Q_TIE)
        .expect("at least one level");
    let partition = d.levels()[idx].partition.clone();
    let q = scores[idx];
    Ok((partition, q))
}
