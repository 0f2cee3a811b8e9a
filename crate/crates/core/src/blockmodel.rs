//! Blockmodels: permuted, density, and image matrices over a partition.
//!
//! Given a partition of the nodes, each relation matrix can be reordered
//! block-by-block ([`permuted_matrix`]), summarized into a block-by-block
//! density matrix ([`density_matrix`]), and thresholded back into a Boolean
//! image matrix ([`image_matrix`] / [`lean_fit`]). The densities over all
//! relations form a [`DensityBlockmodel`], whose quotient graph is the
//! blockmodel image of the original multirelational graph.
//!
//! Densities are exact rationals: for Boolean input, the fraction of ones
//! in each block; for weighted input, the mean of the entries (a documented
//! extension — the classical definition only covers Boolean matrices).
//! Diagonal blocks of size `b` have `b²` cells, self-ties included, so a
//! reflexive clique block has density exactly 1.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, MultirelationalGraph, Partition, QuotientMap, WeightedMultirelationalGraph};
use crate::matrix::{BoolMatrix, WeightedMatrix};
use crate::weight::Weight;

/// A density blockmodel: the quotient graph of block-by-block densities.
#[derive(Debug, Clone)]
pub struct DensityBlockmodel {
    partition: Partition,
    graph: WeightedMultirelationalGraph,
    source_labels: Vec<String>,
    weighted_input: bool,
}

/// Reorders rows and columns block-by-block: blocks in canonical order,
/// ascending node index within each block.
pub fn permuted_matrix(a: &BoolMatrix, p: &Partition) -> Result<BoolMatrix> {
    check_square_match(a.n_rows(), a.n_cols(), p)?;
    Ok(a.permuted(&p.contiguous_order()))
}

/// Weighted counterpart of [`permuted_matrix`].
pub fn permuted_matrix_weighted(a: &WeightedMatrix, p: &Partition) -> Result<WeightedMatrix> {
    check_square_match(a.n_rows(), a.n_cols(), p)?;
    Ok(a.permuted(&p.contiguous_order()))
}

fn check_square_match(rows: usize, cols: usize, p: &Partition) -> Result<()> {
    if rows != cols {
        return Err(Error::InvalidParameter {
            name: "matrix".into(),
            message: format!("expected a square matrix, got {rows}x{cols}"),
        });
    }
    if rows != p.n() {
        return Err(Error::IncompatibleDomains {
            message: format!(
                "partition covers {} nodes but the matrix is {rows}x{rows}",
                p.n()
            ),
        });
    }
    Ok(())
}

/// Block-by-block density matrix: entry `(i,j)` is the sum of the matrix
/// entries in block `(i,j)` divided by the block's cell count.
///
/// For a Boolean 0/1 matrix this is the fraction of ones per block. For
/// genuinely weighted input it is the mean weight — an extension beyond the
/// Boolean definition, flagged as such in reports.
pub fn density_matrix(a: &WeightedMatrix, p: &Partition) -> Result<WeightedMatrix> {
    check_square_match(a.n_rows(), a.n_cols(), p)?;
    let blocks = p.blocks();
    let m = blocks.len();
    let mut out = WeightedMatrix::zero(m, m);
    for (bi, rows) in blocks.iter().enumerate() {
        for (bj, cols) in blocks.iter().enumerate() {
            let mut sum = Weight::zero();
            for &i in rows {
                for &j in cols {
                    sum = sum + a.get(i, j).clone();
                }
            }
            let cells = (rows.len() * cols.len()) as u64;
            let density =
                Weight::from_rational(sum.as_rational() / Weight::from_integer(cells).as_rational());
            out.set(bi, bj, density);
        }
    }
    Ok(out)
}

/// [`density_matrix`] for a Boolean matrix (fraction of ones per block).
pub fn density_matrix_bool(a: &BoolMatrix, p: &Partition) -> Result<WeightedMatrix> {
    density_matrix(&a.to_weighted(), p)
}

/// Builds the density blockmodel of a graph under a partition, together
/// with the quotient map sending every node to its block.
///
/// The quotient graph keeps the relation names and labels its nodes
/// `B1..Bm` in canonical block order.
pub fn density_blockmodel(g: &Graph, p: &Partition) -> Result<(DensityBlockmodel, QuotientMap)> {
    if g.n() != p.n() {
        return Err(Error::IncompatibleDomains {
            message: format!("partition covers {} nodes but the graph has {}", p.n(), g.n()),
        });
    }
    let weighted = g.to_weighted();
    let densities: Vec<(String, WeightedMatrix)> = weighted
        .relations()
        .par_iter()
        .map(|(name, matrix)| Ok((name.clone(), density_matrix(matrix, p)?)))
        .collect::<Result<_>>()?;
    let block_labels: Vec<String> = (1..=p.num_blocks()).map(|i| format!("B{i}")).collect();
    let graph = WeightedMultirelationalGraph::new(block_labels, densities)?;
    let model = DensityBlockmodel {
        partition: p.clone(),
        graph,
        source_labels: g.node_labels().to_vec(),
        weighted_input: !g.is_boolean(),
    };
    let map = QuotientMap::from_partition(p);
    Ok((model, map))
}

impl DensityBlockmodel {
    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// The quotient graph of density matrices, nodes labelled `B1..Bm`.
    pub fn graph(&self) -> &WeightedMultirelationalGraph {
        &self.graph
    }

    /// Node labels of the graph the blockmodel was built from.
    pub fn source_labels(&self) -> &[String] {
        &self.source_labels
    }

    /// True when the source graph had non-Boolean weights, in which case
    /// densities are mean weights rather than fractions of ones.
    pub fn weighted_input(&self) -> bool {
        self.weighted_input
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.partition.blocks().iter().map(Vec::len).collect()
    }

    /// True iff every density entry is exactly 0 or 1.
    pub fn is_perfect(&self) -> bool {
        self.check_perfect().is_ok()
    }

    /// Like [`Self::is_perfect`], but reports the first offending entry.
    pub fn check_perfect(&self) -> Result<()> {
        for (name, matrix) in self.graph.relations() {
            for i in 0..matrix.n_rows() {
                for j in 0..matrix.n_cols() {
                    let value = matrix.get(i, j);
                    if !value.is_zero() && !value.is_one() {
                        return Err(Error::NotPerfect {
                            relation: name.clone(),
                            row_block: self.graph.node_labels()[i].clone(),
                            col_block: self.graph.node_labels()[j].clone(),
                            value: value.to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// The quotient as a Boolean multirelational graph; requires a perfect
    /// blockmodel (every density 0 or 1).
    pub fn quotient_bool_graph(&self) -> Result<MultirelationalGraph> {
        self.check_perfect()?;
        let relations = self
            .graph
            .relations()
            .iter()
            .map(|(name, matrix)| {
                let b = matrix.to_bool().expect("perfect blockmodel is Boolean");
                (name.clone(), b)
            })
            .collect();
        MultirelationalGraph::new(self.graph.node_labels().to_vec(), relations)
    }
}

/// The conventional threshold for image matrices: the overall fraction of
/// ones in the matrix. Returns the fraction together with a flag that is
/// true when the matrix is all-zero (the threshold 0 is then unusable and
/// callers should treat the image as all-zero).
pub fn default_delta(a: &BoolMatrix) -> (Weight, bool) {
    let cells = (a.n_rows() * a.n_cols()) as u64;
    let ones = a.count_ones() as u64;
    if ones == 0 {
        return (Weight::zero(), true);
    }
    (
        Weight::from_rational(
            Weight::from_integer(ones).as_rational() / Weight::from_integer(cells).as_rational(),
        ),
        false,
    )
}

/// Thresholds a density matrix into a Boolean image: 1 iff entry ≥ `delta`.
///
/// `delta` must lie in (0, 1]; with `delta = 0` every entry (including
/// zeros) would pass the ≥ test.
pub fn image_matrix(d: &WeightedMatrix, delta: &Weight) -> Result<BoolMatrix> {
    if delta.is_zero() || *delta > Weight::one() {
        return Err(Error::InvalidParameter {
            name: "delta".into(),
            message: format!("threshold must be in (0, 1], got {delta}"),
        });
    }
    Ok(d.threshold(delta))
}

/// The lean-fit image: 1 iff the density entry is positive.
pub fn lean_fit(d: &WeightedMatrix) -> BoolMatrix {
    d.positive_pattern()
}

/// True iff every block of `fine` lies inside a block of `coarse`.
pub fn refine_check(fine: &Partition, coarse: &Partition) -> Result<bool> {
    fine.refines(coarse)
}

/// Composes two quotient maps: first `q1`, then `q2`.
pub fn compose_quotients(q1: &QuotientMap, q2: &QuotientMap) -> Result<QuotientMap> {
    q1.then(q2)
}

/// Expands a template graph by duplicating node `i` into `sizes[i]` copies
/// with identical ties (copies of `u` and `v` are tied iff `u` and `v` are
/// tied in the template, self-copies included). Returns the expanded graph
/// and the partition grouping the copies, which is structural by
/// construction and yields a perfect blockmodel whose quotient is the
/// template again.
pub fn blow_up(
    template: &MultirelationalGraph,
    sizes: &[usize],
) -> Result<(MultirelationalGraph, Partition)> {
    if sizes.len() != template.n() {
        return Err(Error::IncompatibleDomains {
            message: format!(
                "need one block size per template node ({}), got {}",
                template.n(),
                sizes.len()
            ),
        });
    }
    if sizes.contains(&0) {
        return Err(Error::InvalidParameter {
            name: "sizes".into(),
            message: "block sizes must be at least 1".into(),
        });
    }
    let total: usize = sizes.iter().sum();
    let mut owner = Vec::with_capacity(total);
    let mut labels = Vec::with_capacity(total);
    for (node, &size) in sizes.iter().enumerate() {
        for copy in 1..=size {
            owner.push(node);
            labels.push(format!("{}.{copy}", template.node_labels()[node]));
        }
    }
    let relations = template
        .relations()
        .iter()
        .map(|(name, matrix)| {
            let mut big = BoolMatrix::zero(total, total);
            for u in 0..total {
                for v in 0..total {
                    big.set(u, v, matrix.get(owner[u], owner[v]));
                }
            }
            (name.clone(), big)
        })
        .collect();
    let graph = MultirelationalGraph::new(labels, relations)?;
    Ok((graph, Partition::from_assignment(&owner)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::tests::example_graph;

    fn w(s: &str) -> Weight {
        s.parse().unwrap()
    }

    fn weighted_from(rows: &[&[&str]]) -> WeightedMatrix {
        WeightedMatrix::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|s| w(s)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn three_block_partition() -> Partition {
        Partition::from_blocks(vec![vec![0], vec![1, 2], vec![3, 4, 5]], 6).unwrap()
    }

    #[test]
    fn permuted_matrix_is_identity_for_contiguous_blocks() {
        let g = example_graph();
        let Graph::Boolean(g) = &g else { unreachable!() };
        let p = three_block_partition();
        let h = g.relation("H").unwrap();
        assert_eq!(permuted_matrix(h, &p).unwrap(), *h);
        let singles = Partition::singletons(6);
        assert_eq!(permuted_matrix(h, &singles).unwrap(), *h);
        let one = Partition::one_block(6);
        assert_eq!(permuted_matrix(h, &one).unwrap(), *h);
    }

    #[test]
    fn permuted_matrix_groups_scattered_blocks() {
        // Partition {0,2},{1}: node order becomes 0,2,1.
        let a = BoolMatrix::from_rows(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]);
        let p = Partition::from_blocks(vec![vec![0, 2], vec![1]], 3).unwrap();
        let expected = BoolMatrix::from_rows(&[vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(permuted_matrix(&a, &p).unwrap(), expected);
    }

    #[test]
    fn densities_for_the_example_graph() {
        let g = example_graph();
        let Graph::Boolean(g) = &g else { unreachable!() };
        let p = three_block_partition();
        let dh = density_matrix_bool(g.relation("H").unwrap(), &p).unwrap();
        assert_eq!(
            dh,
            weighted_from(&[&["0", "1", "0"], &["0", "0", "0.5"], &["0", "0", "0"]])
        );
        let dl = density_matrix_bool(g.relation("L").unwrap(), &p).unwrap();
        assert_eq!(dl, WeightedMatrix::identity(3));
    }

    #[test]
    fn density_under_singleton_partition_is_the_matrix_itself() {
        let g = example_graph();
        let Graph::Boolean(g) = &g else { unreachable!() };
        for (_, a) in g.relations() {
            let d = density_matrix_bool(a, &Partition::singletons(6)).unwrap();
            assert_eq!(d, a.to_weighted());
        }
    }

    #[test]
    fn blockmodel_of_example_graph_is_imperfect() {
        let g = example_graph();
        let p = three_block_partition();
        let (model, map) = density_blockmodel(&g, &p).unwrap();
        assert!(!model.is_perfect());
        assert!(!model.weighted_input());
        assert_eq!(model.block_sizes(), vec![1, 2, 3]);
        assert_eq!(map.assignment(), &[0, 1, 1, 2, 2, 2]);
        assert_eq!(model.graph().node_labels(), ["B1", "B2", "B3"]);
        match model.check_perfect() {
            Err(Error::NotPerfect {
                relation,
                row_block,
                col_block,
                value,
            }) => {
                assert_eq!(relation, "H");
                assert_eq!((row_block.as_str(), col_block.as_str()), ("B2", "B3"));
                assert_eq!(value, "0.5");
            }
            other => panic!("expected NotPerfect, got {other:?}"),
        }
        assert!(model.quotient_bool_graph().is_err());
    }

    #[test]
    fn singleton_blockmodel_is_perfect_and_isomorphic() {
        let g = example_graph();
        let (model, _) = density_blockmodel(&g, &Partition::singletons(6)).unwrap();
        assert!(model.is_perfect());
        let q = model.quotient_bool_graph().unwrap();
        let Graph::Boolean(orig) = &g else { unreachable!() };
        for (name, a) in orig.relations() {
            assert_eq!(q.relation(name).unwrap(), a);
        }
    }

    #[test]
    fn default_deltas_for_the_example_graph() {
        let g = example_graph();
        let Graph::Boolean(g) = &g else { unreachable!() };
        let (dh, zero_h) = default_delta(g.relation("H").unwrap());
        assert_eq!(dh, w("5/36"));
        assert!(!zero_h);
        let (dl, zero_l) = default_delta(g.relation("L").unwrap());
        // A_L has 14 ones (2 within-pair ties in the 2-block, 6 in the
        // 3-block, plus 6 self-loops), so the fraction is 14/36 = 7/18.
        assert_eq!(dl, w("7/18"));
        assert!(!zero_l);
        let (dz, zero_z) = default_delta(&BoolMatrix::zero(4, 4));
        assert!(dz.is_zero());
        assert!(zero_z);
        let (di, _) = default_delta(&BoolMatrix::identity(5));
        assert_eq!(di, w("1/5"));
    }

    #[test]
    fn image_matrices_for_the_example_graph() {
        let g = example_graph();
        let Graph::Boolean(g) = &g else { unreachable!() };
        let p = three_block_partition();
        let dh = density_matrix_bool(g.relation("H").unwrap(), &p).unwrap();
        let (delta_h, _) = default_delta(g.relation("H").unwrap());
        let bh = image_matrix(&dh, &delta_h).unwrap();
        assert_eq!(
            bh,
            BoolMatrix::from_rows(&[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]])
        );
        let dl = density_matrix_bool(g.relation("L").unwrap(), &p).unwrap();
        let (delta_l, _) = default_delta(g.relation("L").unwrap());
        let bl = image_matrix(&dl, &delta_l).unwrap();
        assert_eq!(bl, BoolMatrix::identity(3));
    }

    #[test]
    fn image_matrix_threshold_is_inclusive_and_validated() {
        let d = weighted_from(&[&["0.5", "0.2"], &["0", "1"]]);
        let image = image_matrix(&d, &w("0.5")).unwrap();
        assert_eq!(image, BoolMatrix::from_rows(&[vec![1, 0], vec![0, 1]]));
        assert!(image_matrix(&d, &Weight::zero()).is_err());
        assert!(image_matrix(&d, &w("1.5")).is_err());
        assert_eq!(image_matrix(&d, &Weight::one()).unwrap().count_ones(), 1);
    }

    #[test]
    fn lean_fit_is_the_positive_pattern() {
        let d = weighted_from(&[&["0", "0.01"], &["0.99", "0"]]);
        assert_eq!(
            lean_fit(&d),
            BoolMatrix::from_rows(&[vec![0, 1], vec![1, 0]])
        );
        assert!(lean_fit(&WeightedMatrix::zero(3, 3)).is_zero());
        // lean_fit(D) agrees with image_matrix(D, ε) for ε at most the
        // smallest positive entry.
        assert_eq!(lean_fit(&d), image_matrix(&d, &w("0.01")).unwrap());
    }

    #[test]
    fn refinement_and_quotient_composition() {
        let fine = Partition::from_blocks(vec![vec![0, 1], vec![2]], 3).unwrap();
        let coarse = Partition::one_block(3);
        let crossing = Partition::from_blocks(vec![vec![0, 2], vec![1]], 3).unwrap();
        assert!(refine_check(&fine, &coarse).unwrap());
        assert!(!refine_check(&crossing, &fine).unwrap());
        let q1 = QuotientMap::from_partition(&fine);
        let q2 = QuotientMap::from_partition(&fine.induced_on_blocks(&coarse).unwrap());
        let composite = compose_quotients(&q1, &q2).unwrap();
        assert_eq!(composite.assignment(), &[0, 0, 0]);
    }

    #[test]
    fn density_composition_for_equal_size_perfect_blocks() {
        // For a perfect fine blockmodel whose blocks all share one size,
        // densities compose: densifying the fine densities under the
        // induced coarse partition equals densifying the base matrix under
        // the coarse partition directly. (With unequal fine blocks the
        // iterated value is an unweighted mean of block densities and the
        // two can differ.)
        let template = {
            let a = BoolMatrix::from_rows(&[vec![0, 1], vec![1, 1]]);
            MultirelationalGraph::new(vec!["x".into(), "y".into()], vec![("A".into(), a)]).unwrap()
        };
        let (big, fine) = blow_up(&template, &[3, 3]).unwrap();
        let (model, _) = density_blockmodel(&Graph::Boolean(big.clone()), &fine).unwrap();
        assert!(model.is_perfect());
        let a_big = big.relation("A").unwrap();
        let fine_density = density_matrix_bool(a_big, &fine).unwrap();
        assert_eq!(fine_density, template.relation("A").unwrap().to_weighted());

        let coarse = Partition::one_block(6);
        let induced = fine.induced_on_blocks(&coarse).unwrap();
        let via_fine = density_matrix(&fine_density, &induced).unwrap();
        let direct = density_matrix_bool(a_big, &coarse).unwrap();
        assert_eq!(via_fine, direct);
        assert_eq!(*direct.get(0, 0), w("3/4"));
    }

    #[test]
    fn blow_up_produces_perfect_blockmodels() {
        let g = example_graph();
        let Graph::Boolean(template) = &g else { unreachable!() };
        let (big, p) = blow_up(template, &[1, 2, 1, 3, 2, 1]).unwrap();
        assert_eq!(big.n(), 10);
        let (model, _) = density_blockmodel(&Graph::Boolean(big), &p).unwrap();
        assert!(model.is_perfect());
        // The quotient is the template again.
        let q = model.quotient_bool_graph().unwrap();
        for (name, a) in template.relations() {
            assert_eq!(q.relation(name).unwrap(), a);
        }
        assert!(blow_up(template, &[1, 2]).is_err());
        assert!(blow_up(template, &[1, 0, 1, 1, 1, 1]).is_err());
    }

    #[test]
    fn edge_surjectivity_of_the_quotient() {
        // Every positive density entry must be witnessed by at least one
        // positive entry of the source relation inside that block.
        let g = example_graph();
        let p = three_block_partition();
        let (model, _) = density_blockmodel(&g, &p).unwrap();
        let weighted = g.to_weighted();
        for ((_, density), (_, source)) in model.graph().relations().iter().zip(weighted.relations())
        {
            for bi in 0..p.num_blocks() {
                for bj in 0..p.num_blocks() {
                    if !density.get(bi, bj).is_zero() {
                        let witnessed = p.blocks()[bi].iter().any(|&i| {
                            p.blocks()[bj].iter().any(|&j| !source.get(i, j).is_zero())
                        });
                        assert!(witnessed, "block ({bi},{bj})");
                    }
                }
            }
        }
    }

    #[test]
    fn weighted_density_is_the_mean_weight() {
        let d = weighted_from(&[&["0.5", "0.5"], &["0.1", "0.3"]]);
        let p = Partition::one_block(2);
        let mean = density_matrix(&d, &p).unwrap();
        assert_eq!(*mean.get(0, 0), w("0.35"));
        let wg = WeightedMultirelationalGraph::new(
            vec!["a".into(), "b".into()],
            vec![("W".into(), d)],
        )
        .unwrap();
        let (model, _) = density_blockmodel(&Graph::Weighted(wg), &p).unwrap();
        assert!(model.weighted_input());
    }
}
