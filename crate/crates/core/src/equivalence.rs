//! Structural equivalence and approximate-equivalence measures.
//!
//! Two nodes are structurally equivalent when they have the same ties to
//! all nodes across every relation. Comparisons use the paired-diagonal
//! convention: when nodes `i` and `j` are compared, positions `(i,i)` and
//! `(j,j)` are matched against each other, as are `(i,j)` and `(j,i)`; all
//! remaining row and column positions are matched index-wise. This is the
//! convention under which a reflexive clique block (all ones, self-loops
//! included) comes out perfectly equivalent. Equivalently, `i ~ j` exactly
//! when transposing `i` and `j` leaves every relation matrix unchanged,
//! which makes the relation transitive.
//!
//! Approximate equivalence is measured on the same aligned profiles, either
//! by Euclidean distance or by cosine distance (1 − cosine similarity).
//! To keep every comparison exact, distances are stored in *squared form*:
//! squared Euclidean distance, and 1 − cos² for the cosine metric. Both
//! surrogates are monotone in the underlying distance for nonnegative
//! profiles, so orderings, thresholds, and zero tests are unaffected, and
//! no square roots ever need to be taken.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, Partition};
use crate::weight::Weight;

/// The tie profile of one node: its out-row and in-column, per relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileVector {
    pub node: usize,
    /// Concatenation, in relation order, of row `node` then column `node`.
    pub values: Vec<Weight>,
}

/// Distance metric for approximate equivalence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Euclidean,
    CosineDistance,
}

/// Pairwise distances between node profiles, in exact squared form.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    metric: Metric,
    n: usize,
    /// Row-major symmetric matrix of squared-form distances.
    values: Vec<Weight>,
    /// Fully isolated nodes (entire profile zero). Flagged because cosine
    /// distances involving them are pure convention (0 to another isolated
    /// node, 1 to anything else) rather than measurements.
    zero_profile_nodes: Vec<usize>,
}

/// Clustering target for [`agglomerate`].
#[derive(Debug, Clone)]
pub enum Target {
    /// Stop when exactly this many clusters remain.
    NumBlocks(usize),
    /// Merge while the complete linkage stays within this distance
    /// (expressed in ordinary, non-squared units).
    Threshold(Weight),
}

/// The raw profile vector of a node: row then column, per relation.
pub fn profile_vector(graph: &Graph, node: usize) -> Result<ProfileVector> {
    let n = graph.n();
    if node >= n {
        return Err(Error::IndexOutOfRange {
            index: node,
            size: n,
        });
    }
    let mut values = Vec::with_capacity(2 * graph.r() * n);
    for s in 0..graph.r() {
        for k in 0..n {
            values.push(graph.entry(s, node, k));
        }
        for k in 0..n {
            values.push(graph.entry(s, k, node));
        }
    }
    Ok(ProfileVector { node, values })
}

/// Aligned profile pair for nodes `i` and `j` under the paired-diagonal
/// convention. Both vectors have length `r * (2(n-2) + 2)`; position-wise
/// comparison of the two implements the structural-equivalence conditions.
fn aligned_pair(graph: &Graph, relations: &[usize], i: usize, j: usize) -> (Vec<Weight>, Vec<Weight>) {
    let n = graph.n();
    let mut u = Vec::new();
    let mut v = Vec::new();
    for &s in relations {
        for k in (0..n).filter(|&k| k != i && k != j) {
            u.push(graph.entry(s, i, k));
            v.push(graph.entry(s, j, k));
        }
        u.push(graph.entry(s, i, i));
        v.push(graph.entry(s, j, j));
        u.push(graph.entry(s, i, j));
        v.push(graph.entry(s, j, i));
        for k in (0..n).filter(|&k| k != i && k != j) {
            u.push(graph.entry(s, k, i));
            v.push(graph.entry(s, k, j));
        }
    }
    (u, v)
}

fn resolve_relations(graph: &Graph, relations: Option<&[String]>) -> Result<Vec<usize>> {
    let names = graph.relation_names();
    match relations {
        None => Ok((0..names.len()).collect()),
        Some(selected) => {
            if selected.is_empty() {
                return Err(Error::InvalidParameter {
                    name: "relations".into(),
                    message: "relation subset must be nonempty".into(),
                });
            }
            selected
                .iter()
                .map(|want| {
                    names
                        .iter()
                        .position(|have| have == want)
                        .ok_or_else(|| Error::UnknownRelation { name: want.clone() })
                })
                .collect()
        }
    }
}

/// True iff `i` and `j` are structurally equivalent over the selected
/// relations: their aligned profiles have identical nonzero patterns.
fn structurally_equivalent(graph: &Graph, relations: &[usize], i: usize, j: usize) -> bool {
    let (u, v) = aligned_pair(graph, relations, i, j);
    u.iter()
        .zip(v.iter())
        .all(|(a, b)| a.is_zero() == b.is_zero())
}

/// The structural-equivalence partition over the selected relations
/// (`None` means all relations).
pub fn structural_partition(graph: &Graph, relations: Option<&[String]>) -> Result<Partition> {
    let selected = resolve_relations(graph, relations)?;
    let n = graph.n();
    // Structural equivalence is transitive (each equivalent pair gives a
    // transposition fixing the matrices, and those compose), so matching
    // each node against one representative per class suffices.
    let mut representatives: Vec<usize> = Vec::new();
    let raw: Vec<usize> = (0..n)
        .map(|node| {
            let class = representatives
                .iter()
                .position(|&rep| structurally_equivalent(graph, &selected, rep, node));
            class.unwrap_or_else(|| {
                representatives.push(node);
                representatives.len() - 1
            })
        })
        .collect();
    Ok(Partition::from_assignment(&raw))
}

/// Computes all pairwise profile distances under the given metric.
///
/// The result stores exact squared-form values; see the module docs. For
/// the cosine metric, an all-zero aligned vector is at distance 0 from
/// another all-zero vector and at distance 1 from everything else; fully
/// isolated nodes are additionally flagged on the result.
pub fn distance_matrix(graph: &Graph, metric: Metric) -> DistanceMatrix {
    let n = graph.n();
    let relations: Vec<usize> = (0..graph.r()).collect();
    let zero_profile_nodes: Vec<usize> = (0..n)
        .filter(|&i| {
            profile_vector(graph, i)
                .expect("index in range")
                .values
                .iter()
                .all(Weight::is_zero)
        })
        .collect();

    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let computed: Vec<Weight> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (u, v) = aligned_pair(graph, &relations, i, j);
            match metric {
                Metric::Euclidean => squared_euclidean(&u, &v),
                Metric::CosineDistance => squared_sine(&u, &v),
            }
        })
        .collect();

    let mut values = vec![Weight::zero(); n * n];
    for (&(i, j), value) in pairs.iter().zip(computed) {
        values[i * n + j] = value.clone();
        values[j * n + i] = value;
    }
    DistanceMatrix {
        metric,
        n,
        values,
        zero_profile_nodes,
    }
}

fn squared_euclidean(u: &[Weight], v: &[Weight]) -> Weight {
    u.iter()
        .zip(v.iter())
        .map(|(a, b)| a.abs_diff(b).square())
        .fold(Weight::zero(), |acc, d| acc + d)
}

/// `1 − cos²(u, v)`, the squared-form surrogate for cosine distance.
///
/// Profiles are nonnegative, so `cos ∈ [0,1]` and `1 − cos²` orders pairs
/// exactly as `1 − cos` does. Cosine similarity is undefined against a
/// zero vector; the convention here is distance 0 between two zero
/// vectors and distance 1 between a zero vector and anything else.
fn squared_sine(u: &[Weight], v: &[Weight]) -> Weight {
    let dot = u
        .iter()
        .zip(v.iter())
        .map(|(a, b)| a * b)
        .fold(Weight::zero(), |acc, p| acc + p);
    let nu = u
        .iter()
        .map(Weight::square)
        .fold(Weight::zero(), |acc, p| acc + p);
    let nv = v
        .iter()
        .map(Weight::square)
        .fold(Weight::zero(), |acc, p| acc + p);
    match (nu.is_zero(), nv.is_zero()) {
        (true, true) => Weight::zero(),
        (true, false) | (false, true) => Weight::one(),
        (false, false) => {
            // cos² = dot² / (‖u‖²‖v‖²); Cauchy–Schwarz keeps it in [0, 1].
            let denom = nu * nv;
            let cos_sq = dot.square().as_rational() / denom.as_rational();
            Weight::from_rational(num::rational::BigRational::from_integer(1.into()) - cos_sq)
        }
    }
}

impl DistanceMatrix {
    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Squared-form distance between two nodes.
    pub fn get(&self, i: usize, j: usize) -> &Weight {
        &self.values[i * self.n + j]
    }

    pub fn zero_profile_nodes(&self) -> &[usize] {
        &self.zero_profile_nodes
    }

    /// Squared-form rows rendered as decimal strings.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }

    /// Converts a user-facing threshold (ordinary distance units) into the
    /// stored squared form.
    fn threshold_key(&self, t: &Weight) -> Weight {
        match self.metric {
            Metric::Euclidean => t.square(),
            Metric::CosineDistance => {
                // 1 − cos ≤ t  ⇔  cos ≥ 1 − t  ⇔  1 − cos² ≤ 1 − (1−t)².
                if *t >= Weight::one() {
                    Weight::one()
                } else {
                    let remaining = Weight::one() - t.clone();
                    Weight::one() - remaining.square()
                }
            }
        }
    }
}

/// Complete-linkage agglomerative clustering over a distance matrix.
///
/// Merges happen in nondecreasing linkage order; ties are broken by the
/// smaller minimum node index of the first cluster, then of the second.
/// With [`Target::NumBlocks`] the merging stops at the requested cluster
/// count; with [`Target::Threshold`] it stops before the first merge whose
/// linkage exceeds the threshold.
pub fn agglomerate(d: &DistanceMatrix, target: &Target) -> Result<Partition> {
    let n = d.n();
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "distance_matrix".into(),
            message: "cannot cluster zero nodes".into(),
        });
    }
    let stop_at = match target {
        Target::NumBlocks(k) => {
            if *k < 1 || *k > n {
                return Err(Error::InvalidParameter {
                    name: "num_blocks".into(),
                    message: format!("must be between 1 and {n}, got {k}"),
                });
            }
            Some(*k)
        }
        Target::Threshold(_) => None,
    };
    let threshold_key = match target {
        Target::Threshold(t) => Some(d.threshold_key(t)),
        _ => None,
    };

    // Clusters stay sorted by minimum member throughout, so iterating pairs
    // (a, b) with a < b visits candidates in exactly the tie-break order.
    let mut clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    while clusters.len() > stop_at.unwrap_or(1) {
        let mut best: Option<(Weight, usize, usize)> = None;
        for a in 0..clusters.len() {
            for b in (a + 1)..clusters.len() {
                let linkage = complete_linkage(d, &clusters[a], &clusters[b]);
                let better = match &best {
                    None => true,
                    Some((current, _, _)) => linkage < *current,
                };
                if better {
                    best = Some((linkage, a, b));
                }
            }
        }
        let (linkage, a, b) = best.expect("at least two clusters remain");
        if let Some(key) = &threshold_key {
            if linkage > *key {
                break;
            }
        }
        let merged = clusters.remove(b);
        clusters[a].extend(merged);
        clusters[a].sort_unstable();
    }
    Partition::from_blocks(clusters, n)
}

fn complete_linkage(d: &DistanceMatrix, a: &[usize], b: &[usize]) -> Weight {
    let mut worst = Weight::zero();
    for &u in a {
        for &v in b {
            let value = d.get(u, v);
            if *value > worst {
                worst = value.clone();
            }
        }
    }
    worst
}
