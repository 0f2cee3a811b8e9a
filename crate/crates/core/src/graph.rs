//! Core data model: multirelational graphs, partitions, hierarchies.
//!
//! A multirelational graph is a labelled node set together with one square
//! relation matrix per relation, all of the same dimension. The Boolean and
//! weighted variants share shape invariants; the weighted variant admits
//! entries anywhere in `[0,1]` and is where density blockmodels live.
//!
//! Partitions are stored in canonical form — blocks sorted by their minimum
//! member, members ascending — so that structurally equal partitions compare
//! equal and all emitted artifacts are deterministic.

use crate::error::{Error, Result};
use crate::matrix::{BoolMatrix, WeightedMatrix};
use crate::weight::Weight;

/// A node set with labelled Boolean relation matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultirelationalGraph {
    node_labels: Vec<String>,
    relations: Vec<(String, BoolMatrix)>,
}

/// A node set with labelled weighted relation matrices (entries in `[0,1]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedMultirelationalGraph {
    node_labels: Vec<String>,
    relations: Vec<(String, WeightedMatrix)>,
}

/// Either flavour of graph, as selected at load time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Graph {
    Boolean(MultirelationalGraph),
    Weighted(WeightedMultirelationalGraph),
}

fn validate_shape<M>(
    node_labels: &[String],
    relations: &[(String, M)],
    dims: impl Fn(&M) -> (usize, usize),
) -> Result<()> {
    if relations.is_empty() {
        return Err(Error::NoRelations);
    }
    let n = node_labels.len();
    let mut seen = std::collections::HashSet::new();
    for (name, matrix) in relations {
        if !seen.insert(name.clone()) {
            return Err(Error::DuplicateRelation { name: name.clone() });
        }
        let (rows, cols) = dims(matrix);
        if rows != cols {
            return Err(Error::NonSquare {
                relation: name.clone(),
                rows,
                cols,
            });
        }
        if rows != n {
            return Err(Error::DimensionMismatch {
                relation: name.clone(),
                expected: n,
                found: rows,
            });
        }
    }
    Ok(())
}

impl MultirelationalGraph {
    /// Builds and validates a Boolean multirelational graph.
    pub fn new(node_labels: Vec<String>, relations: Vec<(String, BoolMatrix)>) -> Result<Self> {
        validate_shape(&node_labels, &relations, |m| (m.n_rows(), m.n_cols()))?;
        Ok(MultirelationalGraph {
            node_labels,
            relations,
        })
    }

    /// Number of nodes.
    pub fn n(&self) -> usize {
        self.node_labels.len()
    }

    /// Number of relations.
    pub fn r(&self) -> usize {
        self.relations.len()
    }

    pub fn node_labels(&self) -> &[String] {
        &self.node_labels
    }

    pub fn relations(&self) -> &[(String, BoolMatrix)] {
        &self.relations
    }

    pub fn relation_names(&self) -> Vec<&str> {
        self.relations.iter().map(|(n, _)| n.as_str()).collect()
    }

    /// Finds a relation matrix by name.
    pub fn relation(&self, name: &str) -> Result<&BoolMatrix> {
        self.relations
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
            .ok_or_else(|| Error::UnknownRelation {
                name: name.to_string(),
            })
    }

    /// Index of a node label.
    pub fn node_index(&self, label: &str) -> Result<usize> {
        self.node_labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownNode {
                label: label.to_string(),
            })
    }

    /// The same graph with exact 0/1 weights.
    pub fn to_weighted(&self) -> WeightedMultirelationalGraph {
        WeightedMultirelationalGraph {
            node_labels: self.node_labels.clone(),
            relations: self
                .relations
                .iter()
                .map(|(name, m)| (name.clone(), m.to_weighted()))
                .collect(),
        }
    }
}

impl WeightedMultirelationalGraph {
    /// Builds and validates a weighted multirelational graph.
    ///
    /// Entry ranges are checked per relation so diagnostics can name the
    /// offending relation.
    pub fn new(node_labels: Vec<String>, relations: Vec<(String, WeightedMatrix)>) -> Result<Self> {
        validate_shape(&node_labels, &relations, |m| (m.n_rows(), m.n_cols()))?;
        for (name, matrix) in &relations {
            for i in 0..matrix.n_rows() {
                for j in 0..matrix.n_cols() {
                    let value = matrix.get(i, j);
                    if !value.in_unit_interval() {
                        return Err(Error::EntryRange {
                            relation: name.clone(),
                            row: i,
                            col: j,
                            value: value.to_string(),
                        });
                    }
                }
            }
        }
        Ok(WeightedMultirelationalGraph {
            node_labels,
            relations,
        })
    }

    pub fn n(&self) -> usize {
        self.node_labels.len()
    }

    pub fn r(&self) -> usize {
        self.relations.len()
    }

    pub fn node_labels(&self) -> &[String] {
        &self.node_labels
    }

    pub fn relations(&self) -> &[(String, WeightedMatrix)] {
        &self.relations
    }

    pub fn relation_names(&self) -> Vec<&str> {
        self.relations.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn relation(&self, name: &str) -> Result<&WeightedMatrix> {
        self.relations
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
            .ok_or_else(|| Error::UnknownRelation {
                name: name.to_string(),
            })
    }

    pub fn node_index(&self, label: &str) -> Result<usize> {
        self.node_labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownNode {
                label: label.to_string(),
            })
    }
}

impl Graph {
    pub fn n(&self) -> usize {
        match self {
            Graph::Boolean(g) => g.n(),
            Graph::Weighted(g) => g.n(),
        }
    }

    pub fn r(&self) -> usize {
        match self {
            Graph::Boolean(g) => g.r(),
            Graph::Weighted(g) => g.r(),
        }
    }

    pub fn node_labels(&self) -> &[String] {
        match self {
            Graph::Boolean(g) => g.node_labels(),
            Graph::Weighted(g) => g.node_labels(),
        }
    }

    pub fn relation_names(&self) -> Vec<&str> {
        match self {
            Graph::Boolean(g) => g.relation_names(),
            Graph::Weighted(g) => g.relation_names(),
        }
    }

    pub fn node_index(&self, label: &str) -> Result<usize> {
        match self {
            Graph::Boolean(g) => g.node_index(label),
            Graph::Weighted(g) => g.node_index(label),
        }
    }

    pub fn is_boolean(&self) -> bool {
        matches!(self, Graph::Boolean(_))
    }

    /// Entry (i,j) of the named relation as an exact weight.
    pub fn entry(&self, relation: usize, i: usize, j: usize) -> Weight {
        match self {
            Graph::Boolean(g) => {
                if g.relations[relation].1.get(i, j) {
                    Weight::one()
                } else {
                    Weight::zero()
                }
            }
            Graph::Weighted(g) => g.relations[relation].1.get(i, j).clone(),
        }
    }

    /// A weighted view of the graph (identity for weighted input).
    pub fn to_weighted(&self) -> WeightedMultirelationalGraph {
        match self {
            Graph::Boolean(g) => g.to_weighted(),
            Graph::Weighted(g) => g.clone(),
        }
    }
}

/// A partition of the node indices `0..n` into disjoint nonempty blocks.
///
/// Canonical form: members ascending within a block, blocks ordered by their
/// minimum member. The `assignment` vector is kept consistent with the
/// canonical block order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    assignment: Vec<usize>,
}

impl Partition {
    /// Builds a partition from a block assignment (`assignment[node]` is any
    /// raw block identifier); blocks are renumbered canonically.
    pub fn from_assignment(raw: &[usize]) -> Partition {
        let mut order: Vec<usize> = Vec::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (node, &raw_block) in raw.iter().enumerate() {
            match order.iter().position(|&b| b == raw_block) {
                Some(index) => blocks[index].push(node),
                None => {
                    order.push(raw_block);
                    blocks.push(vec![node]);
                }
            }
        }
        Partition::from_block_list(blocks)
    }

    /// Builds a partition from explicit blocks, validating coverage.
    pub fn from_blocks(blocks: Vec<Vec<usize>>, n: usize) -> Result<Partition> {
        let mut seen = vec![false; n];
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::InvalidBlocks {
                    message: "empty block".into(),
                });
            }
            for &node in block {
                if node >= n {
                    return Err(Error::InvalidBlocks {
                        message: format!("node index {node} out of range for {n} nodes"),
                    });
                }
                if seen[node] {
                    return Err(Error::InvalidBlocks {
                        message: format!("node {node} appears in two blocks"),
                    });
                }
                seen[node] = true;
            }
        }
        if let Some(missing) = seen.iter().position(|covered| !covered) {
            return Err(Error::InvalidBlocks {
                message: format!("node {missing} is not covered"),
            });
        }
        Ok(Partition::from_block_list(blocks))
    }

    fn from_block_list(mut blocks: Vec<Vec<usize>>) -> Partition {
        for block in &mut blocks {
            block.sort_unstable();
        }
        blocks.sort_by_key(|block| block[0]);
        let n: usize = blocks.iter().map(Vec::len).sum();
        let mut assignment = vec![0; n];
        for (index, block) in blocks.iter().enumerate() {
            for &node in block {
                assignment[node] = index;
            }
        }
        Partition { blocks, assignment }
    }

    /// The partition of `0..n` into singletons.
    pub fn singletons(n: usize) -> Partition {
        Partition::from_block_list((0..n).map(|i| vec![i]).collect())
    }

    /// The one-block partition of `0..n`.
    pub fn one_block(n: usize) -> Partition {
        Partition::from_block_list(vec![(0..n).collect()])
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Canonical block index of a node.
    pub fn block_of(&self, node: usize) -> usize {
        self.assignment[node]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// True iff every block of `self` lies inside one block of `coarse`.
    pub fn refines(&self, coarse: &Partition) -> Result<bool> {
        if self.n() != coarse.n() {
            return Err(Error::IncompatibleDomains {
                message: format!(
                    "partitions over {} and {} nodes",
                    self.n(),
                    coarse.n()
                ),
            });
        }
        Ok(self.blocks.iter().all(|block| {
            let target = coarse.block_of(block[0]);
            block.iter().all(|&node| coarse.block_of(node) == target)
        }))
    }

    /// The partition induced on the blocks of `self` by a coarser partition
    /// of the same base set: block `b` of `self` is sent to the block of
    /// `coarse` containing it. Fails if `self` does not refine `coarse`,
    /// naming the straddling block.
    pub fn induced_on_blocks(&self, coarse: &Partition) -> Result<Partition> {
        if !self.refines(coarse)? {
            let straddler = self
                .blocks
                .iter()
                .find(|block| {
                    let target = coarse.block_of(block[0]);
                    block.iter().any(|&node| coarse.block_of(node) != target)
                })
                .expect("refinement failed, so a straddling block exists");
            return Err(Error::InvalidBlocks {
                message: format!(
                    "the block of node indices {{{}}} straddles two coarser blocks",
                    straddler
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(",")
                ),
            });
        }
        let raw: Vec<usize> = self
            .blocks
            .iter()
            .map(|block| coarse.block_of(block[0]))
            .collect();
        Ok(Partition::from_assignment(&raw))
    }

    /// Node order that makes blocks contiguous: the concatenation of the
    /// canonical blocks.
    pub fn contiguous_order(&self) -> Vec<usize> {
        self.blocks.iter().flatten().copied().collect()
    }
}

/// A surjective map from source nodes onto target blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientMap {
    source_size: usize,
    target_size: usize,
    assignment: Vec<usize>,
}

impl QuotientMap {
    /// Builds a quotient map, checking surjectivity onto `0..target_size`.
    pub fn new(assignment: Vec<usize>, target_size: usize) -> Result<QuotientMap> {
        let mut hit = vec![false; target_size];
        for &b in &assignment {
            if b >= target_size {
                return Err(Error::InvalidBlocks {
                    message: format!("block index {b} out of range for {target_size} blocks"),
                });
            }
            hit[b] = true;
        }
        if let Some(missing) = hit.iter().position(|&h| !h) {
            return Err(Error::InvalidBlocks {
                message: format!("block {missing} has no preimage"),
            });
        }
        Ok(QuotientMap {
            source_size: assignment.len(),
            target_size,
            assignment,
        })
    }

    /// The quotient map of a partition.
    pub fn from_partition(p: &Partition) -> QuotientMap {
        QuotientMap {
            source_size: p.n(),
            target_size: p.num_blocks(),
            assignment: p.assignment().to_vec(),
        }
    }

    pub fn source_size(&self) -> usize {
        self.source_size
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    pub fn apply(&self, node: usize) -> usize {
        self.assignment[node]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Set-map composition: `other` after `self`.
    pub fn then(&self, other: &QuotientMap) -> Result<QuotientMap> {
        if self.target_size != other.source_size {
            return Err(Error::IncompatibleDomains {
                message: format!(
                    "cannot compose: first map targets {} blocks, second starts from {}",
                    self.target_size, other.source_size
                ),
            });
        }
        let assignment = self
            .assignment
            .iter()
            .map(|&b| other.assignment[b])
            .collect();
        QuotientMap::new(assignment, other.target_size)
    }
}

/// A fine-to-coarse chain of partitions over one base node set.
///
/// Level 0 is the base graph itself (implicitly, the singleton partition);
/// the stored partitions are levels `1..=p`. Each stored level must coarsen
/// the previous one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestedHierarchy {
    n: usize,
    levels: Vec<Partition>,
}

impl NestedHierarchy {
    /// Validates nesting and builds the hierarchy.
    pub fn new(levels: Vec<Partition>, n: usize) -> Result<NestedHierarchy> {
        let mut previous = Partition::singletons(n);
        for (index, level) in levels.iter().enumerate() {
            if level.n() != n {
                return Err(Error::IncompatibleDomains {
                    message: format!(
                        "hierarchy level {} partitions {} nodes, graph has {}",
                        index + 1,
                        level.n(),
                        n
                    ),
                });
            }
            if !previous.refines(level)? {
                let straddler = previous
                    .blocks()
                    .iter()
                    .find(|block| {
                        let target = level.block_of(block[0]);
                        block.iter().any(|&node| level.block_of(node) != target)
                    })
                    .expect("nesting failed, so a straddling block exists");
                return Err(Error::NotNested {
                    level: index + 1,
                    previous: index,
                    block: straddler
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(","),
                });
            }
            previous = level.clone();
        }
        Ok(NestedHierarchy { n, levels })
    }

    /// Number of stored (non-base) levels.
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn base_size(&self) -> usize {
        self.n
    }

    /// The partition of the base set at `level` (level 0 is singletons).
    pub fn partition_at(&self, level: usize) -> Partition {
        if level == 0 {
            Partition::singletons(self.n)
        } else {
            self.levels[level - 1].clone()
        }
    }

    pub fn levels(&self) -> &[Partition] {
        &self.levels
    }

    /// The quotient map from level `i` blocks to level `j` blocks, `i < j`.
    pub fn quotient_map(&self, i: usize, j: usize) -> Result<QuotientMap> {
        assert!(i < j && j <= self.depth(), "levels must satisfy i < j <= p");
        let fine = self.partition_at(i);
        let coarse = self.partition_at(j);
        let induced = fine.induced_on_blocks(&coarse)?;
        Ok(QuotientMap::from_partition(&induced))
    }
}
