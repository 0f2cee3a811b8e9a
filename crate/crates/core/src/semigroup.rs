//! The Boolean semigroup generated by a graph's relation matrices.
//!
//! Composing two relations under Boolean matrix multiplication yields the
//! compound relation ("friend of an enemy", and so on). The set of all
//! compounds, closed under the product, is a finite semigroup; this module
//! generates it, renders its multiplication table, answers compound-
//! relation queries, and mechanically verifies that a perfect blockmodel
//! induces a semigroup homomorphism from the graph's semigroup onto the
//! quotient graph's semigroup — including the functoriality of those maps
//! along a nested hierarchy of partitions.
//!
//! Orientation: the product `x∘y` is the ordinary matrix product `x·y`, so
//! the word `"HL"` denotes `A_H · A_L`. A word is *applied* left to right:
//! `compound_exists(g, i, j, ["H", "L"])` asks whether some `m` has an
//! H-tie `i → m` followed by an L-tie `m → j`, which is exactly the `(i,j)`
//! entry of `A_H · A_L`.
//!
//! Closure is breadth-first by word length, extending each frontier element
//! by every generator on the right; new matrices are appended in
//! lexicographic word order, so each element carries the lexicographically
//! least among its shortest producing words and the element order is
//! deterministic (independent of thread count).

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::blockmodel::density_blockmodel;
use crate::error::{Error, Result};
use crate::graph::{Graph, MultirelationalGraph, NestedHierarchy, Partition};
use crate::matrix::BoolMatrix;

/// Default cap on the number of closure elements.
pub const DEFAULT_CAP: usize = 100_000;

/// A finite semigroup of Boolean matrices under Boolean multiplication.
#[derive(Debug, Clone)]
pub struct Semigroup {
    dimension: usize,
    elements: Vec<BoolMatrix>,
    /// For each element, the lexicographically least shortest generator
    /// word producing it (letters are generator positions).
    words: Vec<Vec<usize>>,
    generator_names: Vec<String>,
    /// Position of each generator among the elements (generators that
    /// coincide as matrices share a position).
    generator_indices: Vec<usize>,
    /// Row-major product table: `table[x * len + y]` is the index of `x∘y`.
    table: Vec<usize>,
    zero_index: Option<usize>,
}

/// A verified homomorphism between two generated semigroups.
#[derive(Debug, Clone)]
pub struct SemigroupHom {
    source: Semigroup,
    target: Semigroup,
    /// Source element index → target element index.
    mapping: Vec<usize>,
    surjective: bool,
}

/// One composition check of a functoriality report: does the map from
/// level `i` to level `j` factor through level `k`?
#[derive(Debug, Clone, Serialize)]
pub struct TripleCheck {
    pub i: usize,
    pub k: usize,
    pub j: usize,
    pub pass: bool,
}

/// Outcome of [`check_functoriality`] over a nested hierarchy.
#[derive(Debug, Clone, Serialize)]
pub struct FunctorialityReport {
    /// Semigroup size at each level (level 0 is the base graph).
    pub level_counts: Vec<usize>,
    pub triples: Vec<TripleCheck>,
    pub all_pass: bool,
}

/// A multiplication table rendered with word labels.
#[derive(Debug, Clone, Serialize)]
pub struct TableRendering {
    pub labels: Vec<String>,
    pub cells: Vec<Vec<String>>,
}

/// Boolean matrix product; thin, error-propagating alias of
/// [`BoolMatrix::bool_product`].
pub fn bool_product(a: &BoolMatrix, b: &BoolMatrix) -> Result<BoolMatrix> {
    a.bool_product(b)
}

/// Evaluates a word of relation names, left to right, as a Boolean matrix
/// product. Words must have length ≥ 1 (the semigroup has no identity).
pub fn evaluate_word(g: &MultirelationalGraph, word: &[&str]) -> Result<BoolMatrix> {
    let (first, rest) = word.split_first().ok_or(Error::EmptyWord)?;
    let mut acc = g.relation(first)?.clone();
    for name in rest {
        acc = acc.bool_product(g.relation(name)?)?;
    }
    Ok(acc)
}

/// True iff the compound relation spelled by `word` (applied left to
/// right) ties node `i` to node `j`.
pub fn compound_exists(g: &MultirelationalGraph, i: usize, j: usize, word: &[&str]) -> Result<bool> {
    let n = g.n();
    for node in [i, j] {
        if node >= n {
            return Err(Error::IndexOutOfRange { index: node, size: n });
        }
    }
    Ok(evaluate_word(g, word)?.get(i, j))
}

/// Generates the semigroup closed under Boolean products of the generators.
///
/// Breadth-first by word length: the frontier of length-ℓ elements is
/// extended by every generator on the right; duplicates (exact matrix
/// equality) are dropped; insertion follows lexicographic word order. The
/// closure aborts with [`Error::CapExceeded`] once it would grow past
/// `cap` elements.
pub fn generate_semigroup(generators: &[(String, BoolMatrix)], cap: usize) -> Result<Semigroup> {
    if generators.is_empty() {
        return Err(Error::NoRelations);
    }
    let dimension = generators[0].1.n_rows();
    for (name, m) in generators {
        if !m.is_square() {
            return Err(Error::NonSquare {
                relation: name.clone(),
                rows: m.n_rows(),
                cols: m.n_cols(),
            });
        }
        if m.n_rows() != dimension {
            return Err(Error::DimensionMismatch {
                relation: name.clone(),
                expected: dimension,
                found: m.n_rows(),
            });
        }
    }
    for (i, (name, _)) in generators.iter().enumerate() {
        if generators[..i].iter().any(|(other, _)| other == name) {
            return Err(Error::DuplicateRelation { name: name.clone() });
        }
    }
    let generator_names: Vec<String> = generators.iter().map(|(n, _)| n.clone()).collect();
    let mats: Vec<&BoolMatrix> = generators.iter().map(|(_, m)| m).collect();

    let mut index: HashMap<BoolMatrix, usize> = HashMap::new();
    let mut elements: Vec<BoolMatrix> = Vec::new();
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut generator_indices = Vec::with_capacity(mats.len());
    let mut frontier: Vec<usize> = Vec::new();
    for (g, m) in mats.iter().enumerate() {
        if let Some(&existing) = index.get(*m) {
            generator_indices.push(existing);
            continue;
        }
        if elements.len() == cap {
            return Err(Error::CapExceeded {
                cap,
                reached: elements.len(),
                word_length: 1,
            });
        }
        let id = elements.len();
        index.insert((*m).clone(), id);
        elements.push((*m).clone());
        words.push(vec![g]);
        generator_indices.push(id);
        frontier.push(id);
    }

    let mut length = 1usize;
    while !frontier.is_empty() {
        length += 1;
        let pairs: Vec<(usize, usize)> = frontier
            .iter()
            .flat_map(|&x| (0..mats.len()).map(move |g| (x, g)))
            .collect();
        let products: Vec<BoolMatrix> = pairs
            .par_iter()
            .map(|&(x, g)| elements[x].bool_product(mats[g]).expect("square, same size"))
            .collect();
        let mut next = Vec::new();
        for ((x, g), product) in pairs.into_iter().zip(products) {
            if index.contains_key(&product) {
                continue;
            }
            if elements.len() == cap {
                return Err(Error::CapExceeded {
                    cap,
                    reached: elements.len(),
                    word_length: length,
                });
            }
            let id = elements.len();
            index.insert(product.clone(), id);
            elements.push(product);
            let mut word = words[x].clone();
            word.push(g);
            words.push(word);
            next.push(id);
        }
        frontier = next;
    }

    let size = elements.len();
    let table: Vec<usize> = (0..size)
        .into_par_iter()
        .flat_map_iter(|x| {
            let row: Vec<usize> = (0..size)
                .map(|y| {
                    let product = elements[x]
                        .bool_product(&elements[y])
                        .expect("square, same size");
                    *index.get(&product).expect("closure is product-closed")
                })
                .collect();
            row
        })
        .collect();
    let zero_index = index.get(&BoolMatrix::zero(dimension, dimension)).copied();

    Ok(Semigroup {
        dimension,
        elements,
        words,
        generator_names,
        generator_indices,
        table,
        zero_index,
    })
}

/// Renders a generator word: single-character generator names concatenate
/// (`"HL"`), longer names join with `*` (`"Adv*Work"`).
pub(crate) fn render_word(names: &[String], word: &[usize]) -> String {
    if names.iter().all(|n| n.chars().count() == 1) {
        word.iter().map(|&g| names[g].as_str()).collect()
    } else {
        word.iter()
            .map(|&g| names[g].as_str())
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl Semigroup {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Number of elements, the zero matrix included when present.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Number of elements excluding the zero matrix (reported alongside
    /// the full count because published figures sometimes omit the zero).
    pub fn len_without_zero(&self) -> usize {
        self.elements.len() - usize::from(self.zero_index.is_some())
    }

    pub fn elements(&self) -> &[BoolMatrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &BoolMatrix {
        &self.elements[i]
    }

    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }

    pub fn word(&self, i: usize) -> &[usize] {
        &self.words[i]
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generator_indices
    }

    pub fn zero_index(&self) -> Option<usize> {
        self.zero_index
    }

    /// Index of the product of elements `x` and `y`.
    pub fn product(&self, x: usize, y: usize) -> usize {
        self.table[x * self.elements.len() + y]
    }

    /// Label of element `i`: its word, or `"0"` for the zero matrix.
    pub fn element_label(&self, i: usize) -> String {
        if Some(i) == self.zero_index {
            return "0".to_string();
        }
        render_word(&self.generator_names, &self.words[i])
    }

    /// Finds an element index by its label.
    pub fn element_by_label(&self, label: &str) -> Option<usize> {
        (0..self.len()).find(|&i| self.element_label(i) == label)
    }

    /// Evaluates a generator word through the product table.
    pub fn evaluate_generator_word(&self, word: &[usize]) -> Result<usize> {
        let (first, rest) = word.split_first().ok_or(Error::EmptyWord)?;
        let lookup = |g: usize| -> Result<usize> {
            self.generator_indices
                .get(g)
                .copied()
                .ok_or(Error::IndexOutOfRange {
                    index: g,
                    size: self.generator_indices.len(),
                })
        };
        let mut acc = lookup(*first)?;
        for &g in rest {
            acc = self.product(acc, lookup(g)?);
        }
        Ok(acc)
    }

    /// Exhaustively checks associativity of the product table.
    pub fn is_associative(&self) -> bool {
        let size = self.len();
        (0..size).all(|x| {
            (0..size).all(|y| {
                (0..size).all(|z| self.product(self.product(x, y), z) == self.product(x, self.product(y, z)))
            })
        })
    }
}

/// Renders the multiplication table with word labels; the zero matrix
/// prints as `"0"`.
pub fn multiplication_table(s: &Semigroup) -> TableRendering {
    let labels: Vec<String> = (0..s.len()).map(|i| s.element_label(i)).collect();
    let cells = (0..s.len())
        .map(|x| (0..s.len()).map(|y| labels[s.product(x, y)].clone()).collect())
        .collect();
    TableRendering { labels, cells }
}

impl TableRendering {
    /// Plain-text rendering with aligned columns.
    pub fn to_text(&self) -> String {
        let mut widths: Vec<usize> = self.labels.iter().map(String::len).collect();
        for row in &self.cells {
            for (j, cell) in row.iter().enumerate() {
                widths[j] = widths[j].max(cell.len());
            }
        }
        let head_width = self.labels.iter().map(String::len).max().unwrap_or(1);
        let mut out = String::new();
        out.push_str(&" ".repeat(head_width));
        for (label, w) in self.labels.iter().zip(&widths) {
            out.push_str(" | ");
            out.push_str(&format!("{label:<w$}"));
        }
        out.push('\n');
        out.push_str(&"-".repeat(head_width));
        for w in &widths {
            out.push_str("-+-");
            out.push_str(&"-".repeat(*w));
        }
        out.push('\n');
        for (label, row) in self.labels.iter().zip(&self.cells) {
            out.push_str(&format!("{label:<head_width$}"));
            for (cell, w) in row.iter().zip(&widths) {
                out.push_str(" | ");
                out.push_str(&format!("{cell:<w$}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Maps each source element to the target element reached by evaluating
/// the source element's word in the target semigroup. Requires matching
/// generator lists.
fn word_eval_mapping(source: &Semigroup, target: &Semigroup) -> Result<Vec<usize>> {
    if source.generator_names() != target.generator_names() {
        return Err(Error::IncompatibleDomains {
            message: format!(
                "semigroups have different generators: [{}] vs [{}]",
                source.generator_names().join(", "),
                target.generator_names().join(", ")
            ),
        });
    }
    (0..source.len())
        .map(|i| target.evaluate_generator_word(source.word(i)))
        .collect()
}

/// Verifies `mapping(x∘y) = mapping(x)∘mapping(y)` over the full tables.
fn verify_hom_property(source: &Semigroup, target: &Semigroup, mapping: &[usize]) -> Result<()> {
    for x in 0..source.len() {
        for y in 0..source.len() {
            let got = target.product(mapping[x], mapping[y]);
            let expected = mapping[source.product(x, y)];
            if got != expected {
                return Err(Error::HomomorphismViolation {
                    left: source.element_label(x),
                    right: source.element_label(y),
                    got: target.element_label(got),
                    expected: target.element_label(expected),
                });
            }
        }
    }
    Ok(())
}

fn is_surjective(mapping: &[usize], target_len: usize) -> bool {
    let mut hit = vec![false; target_len];
    for &m in mapping {
        hit[m] = true;
    }
    hit.into_iter().all(|h| h)
}

impl SemigroupHom {
    pub fn source(&self) -> &Semigroup {
        &self.source
    }

    pub fn target(&self) -> &Semigroup {
        &self.target
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn is_surjective(&self) -> bool {
        self.surjective
    }
}

/// Builds and verifies the semigroup homomorphism induced by a partition
/// whose density blockmodel is perfect.
///
/// The blockmodel must be perfect (every block all-ones or all-zeros);
/// otherwise the quotient does not determine compound relations and the
/// construction is refused with [`Error::NotPerfect`]. On success the
/// mapping sends each element of the graph's semigroup to the quotient
/// element with the same generator word, verified as a homomorphism over
/// the full tables and checked for surjectivity.
pub fn induced_hom(g: &MultirelationalGraph, p: &Partition, cap: usize) -> Result<SemigroupHom> {
    let (model, _) = density_blockmodel(&Graph::Boolean(g.clone()), p)?;
    // The quotient keeps the source relation names and order, so the word
    // mapping can line the generators up directly.
    let quotient = model.quotient_bool_graph()?;
    let source = generate_semigroup(g.relations(), cap)?;
    let target = generate_semigroup(quotient.relations(), cap)?;
    let mapping = word_eval_mapping(&source, &target)?;
    verify_hom_property(&source, &target, &mapping)?;
    let surjective = is_surjective(&mapping, target.len());
    Ok(SemigroupHom {
        source,
        target,
        mapping,
        surjective,
    })
}

/// Verifies functoriality of induced maps along a nested hierarchy.
///
/// Level 0 is the base graph; level `i ≥ 1` is the quotient under the
/// hierarchy's `i`-th partition, which must yield a perfect blockmodel
/// (else [`Error::ImperfectLevel`] names the level). For every pair
/// `i < j` the word-evaluation homomorphism between the level semigroups
/// is built and verified; for every triple `i < k < j` the report records
/// whether the map `i → j` equals the composite `i → k → j` elementwise.
pub fn check_functoriality(
    g: &MultirelationalGraph,
    h: &NestedHierarchy,
    cap: usize,
) -> Result<FunctorialityReport> {
    if h.base_size() != g.n() {
        return Err(Error::IncompatibleDomains {
            message: format!(
                "hierarchy covers {} nodes but the graph has {}",
                h.base_size(),
                g.n()
            ),
        });
    }
    let mut graphs: Vec<MultirelationalGraph> = vec![g.clone()];
    for level in 1..=h.depth() {
        let partition = h.partition_at(level);
        let (model, _) = density_blockmodel(&Graph::Boolean(g.clone()), &partition)?;
        let quotient = model.quotient_bool_graph().map_err(|e| Error::ImperfectLevel {
            level,
            source: Box::new(e),
        })?;
        graphs.push(quotient);
    }
    let semigroups: Vec<Semigroup> = graphs
        .iter()
        .map(|graph| generate_semigroup(graph.relations(), cap))
        .collect::<Result<_>>()?;

    let depth = h.depth();
    let mut maps: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for i in 0..=depth {
        for j in (i + 1)..=depth {
            let mapping = word_eval_mapping(&semigroups[i], &semigroups[j])?;
            verify_hom_property(&semigroups[i], &semigroups[j], &mapping)?;
            maps.insert((i, j), mapping);
        }
    }
    let mut triples = Vec::new();
    for i in 0..=depth {
        for k in (i + 1)..=depth {
            for j in (k + 1)..=depth {
                let composed: Vec<usize> =
                    maps[&(i, k)].iter().map(|&x| maps[&(k, j)][x]).collect();
                let pass = composed == maps[&(i, j)];
                triples.push(TripleCheck { i, k, j, pass });
            }
        }
    }
    let all_pass = triples.iter().all(|t| t.pass);
    Ok(FunctorialityReport {
        level_counts: semigroups.iter().map(Semigroup::len).collect(),
        triples,
        all_pass,
    })
}
