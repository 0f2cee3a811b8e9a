//! Truncated semigroups of weighted relations under the max-times product.
//!
//! The max-times product `A ▽ B (i,j) = max_k A(i,k)·B(k,j)` composes
//! weighted relations the way Boolean multiplication composes Boolean
//! ones: the strength of the best two-step path. On 0/1 matrices it *is*
//! the Boolean product. Because weights lie in [0,1], repeated products
//! only fade, which motivates the `k`-truncated semigroup: generate all
//! products of up to `k` generators and declare every longer product zero.
//!
//! Two regimes are supported:
//!
//! * **Exact (`RoundingPolicy::None`)** — entries stay exact rationals.
//!   Distinct word values then rarely collide and element counts can grow
//!   into the thousands even for 2×2 generators.
//! * **Per-step rounding (`RoundingPolicy::PerStep`)** — after every
//!   product (and once on the generators at entry) entries are rounded to
//!   a fixed number of decimal digits, ties to the even neighbour. All
//!   entries then live on the grid `{0, 10^−d, …, 1}`, so the closure is
//!   finite even without truncation, and elements are identified exactly
//!   when they agree at `d` digits.
//!
//! Truncation bookkeeping uses each element's shortest-word length: the
//! product of elements with lengths `ℓx + ℓy > k` is the zero element. The
//! zero matrix is adjoined as an explicit sink when no word of length ≤ k
//! realizes it but some product truncates. Under per-step rounding the
//! product of two elements is evaluated by walking the second element's
//! word one generator at a time (rounding after each step), which keeps
//! every product on a stored element; a single rounded `▽` of the two
//! stored matrices would in general disagree with the step-by-step values
//! the closure is built from.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::WeightedMatrix;
use crate::semigroup::render_word;

/// Maximum supported per-step rounding precision.
pub const MAX_ROUND_DIGITS: u32 = 12;

/// How (and whether) entries are rounded during closure generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum RoundingPolicy {
    /// Exact rational arithmetic throughout.
    None,
    /// Round every entry to `digits` decimal places after each product
    /// (banker's rounding: ties go to the even neighbour).
    PerStep { digits: u32 },
}

impl RoundingPolicy {
    /// Validated constructor for the per-step policy.
    pub fn per_step(digits: u32) -> Result<Self> {
        if digits > MAX_ROUND_DIGITS {
            return Err(Error::InvalidParameter {
                name: "digits".into(),
                message: format!("rounding precision is capped at {MAX_ROUND_DIGITS}, got {digits}"),
            });
        }
        Ok(RoundingPolicy::PerStep { digits })
    }

    fn apply(&self, m: WeightedMatrix) -> WeightedMatrix {
        match self {
            RoundingPolicy::None => m,
            RoundingPolicy::PerStep { digits } => m.round_to_digits(*digits),
        }
    }

    /// Short text form for reports: `"none"` or `"per_step_d"`.
    pub fn describe(&self) -> String {
        match self {
            RoundingPolicy::None => "none".to_string(),
            RoundingPolicy::PerStep { digits } => format!("per_step_{digits}"),
        }
    }
}

/// The `k`-truncated semigroup generated by weighted matrices.
#[derive(Debug, Clone)]
pub struct TruncatedSemigroup {
    k: usize,
    policy: RoundingPolicy,
    dimension: usize,
    /// Realized elements in discovery order, plus (last) the adjoined
    /// zero sink when truncation needs one.
    elements: Vec<WeightedMatrix>,
    /// Lexicographically least shortest word per element; `None` for the
    /// adjoined sink, which no word of length ≤ k realizes.
    words: Vec<Option<Vec<usize>>>,
    /// Shortest-word length per element; the adjoined sink counts as k+1.
    lengths: Vec<usize>,
    generator_names: Vec<String>,
    generator_indices: Vec<usize>,
    /// Rounded-at-entry generator matrices, used for word walks.
    generator_matrices: Vec<WeightedMatrix>,
    index: HashMap<WeightedMatrix, usize>,
    zero_index: Option<usize>,
    sink_adjoined: bool,
}

/// Summary statistics of a truncated semigroup.
#[derive(Debug, Clone, Serialize)]
pub struct TruncatedReport {
    pub k: usize,
    pub policy: RoundingPolicy,
    /// All elements, the zero (realized or sink) included.
    pub count_all: usize,
    /// Excluding the generators.
    pub count_excluding_generators: usize,
    /// Excluding the generators and the zero element.
    pub count_excluding_generators_and_zero: usize,
    /// (word length, number of realized elements of that length).
    pub census: Vec<(usize, usize)>,
    /// Largest shortest-word length among realized elements: the least
    /// truncation depth whose closure already contains every element.
    pub stabilization_depth: usize,
    /// `"realized"`, `"adjoined_sink"`, or `"absent"`.
    pub zero_status: String,
}

/// Max-times product; thin, error-propagating alias of
/// [`WeightedMatrix::max_times`].
pub fn max_times(a: &WeightedMatrix, b: &WeightedMatrix) -> Result<WeightedMatrix> {
    a.max_times(b)
}

/// Rounds every entry to `digits` decimal places, ties to even.
pub fn round_matrix(a: &WeightedMatrix, digits: u32) -> WeightedMatrix {
    a.round_to_digits(digits)
}

/// Generates the `k`-truncated semigroup of the generators.
///
/// Breadth-first over words of length 1..k, extending each frontier
/// element by every generator on the right; per-step rounding (when
/// enabled) is applied to the generators at entry and after every
/// product; duplicates are dropped by exact matrix equality. Insertion
/// follows lexicographic word order, so the element order, words, and
/// lengths are deterministic. Aborts with [`Error::CapExceeded`] when
/// more than `cap` elements would be stored.
pub fn generate_truncated(
    generators: &[(String, WeightedMatrix)],
    k: usize,
    policy: RoundingPolicy,
    cap: usize,
) -> Result<TruncatedSemigroup> {
    if generators.is_empty() {
        return Err(Error::NoRelations);
    }
    if k < 1 {
        return Err(Error::InvalidParameter {
            name: "k".into(),
            message: "truncation depth must be at least 1".into(),
        });
    }
    if let RoundingPolicy::PerStep { digits } = policy {
        // Re-validate so a hand-built policy cannot smuggle in an
        // unsupported precision.
        RoundingPolicy::per_step(digits)?;
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
    let generator_matrices: Vec<WeightedMatrix> = generators
        .iter()
        .map(|(_, m)| policy.apply(m.clone()))
        .collect();

    let mut index: HashMap<WeightedMatrix, usize> = HashMap::new();
    let mut elements: Vec<WeightedMatrix> = Vec::new();
    let mut words: Vec<Option<Vec<usize>>> = Vec::new();
    let mut lengths: Vec<usize> = Vec::new();
    let mut generator_indices = Vec::with_capacity(generator_matrices.len());
    let mut frontier: Vec<usize> = Vec::new();
    for (g, m) in generator_matrices.iter().enumerate() {
        if let Some(&existing) = index.get(m) {
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
        index.insert(m.clone(), id);
        elements.push(m.clone());
        words.push(Some(vec![g]));
        lengths.push(1);
        generator_indices.push(id);
        frontier.push(id);
    }

    let mut length = 1usize;
    while !frontier.is_empty() && length < k {
        length += 1;
        let pairs: Vec<(usize, usize)> = frontier
            .iter()
            .flat_map(|&x| (0..generator_matrices.len()).map(move |g| (x, g)))
            .collect();
        let products: Vec<WeightedMatrix> = pairs
            .par_iter()
            .map(|&(x, g)| {
                let product = elements[x]
                    .max_times(&generator_matrices[g])
                    .expect("square, same size");
                policy.apply(product)
            })
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
            let mut word = words[x].clone().expect("frontier elements carry words");
            word.push(g);
            words.push(Some(word));
            lengths.push(length);
            next.push(id);
        }
        frontier = next;
    }

    let mut zero_index = index.get(&WeightedMatrix::zero(dimension, dimension)).copied();
    let max_length = lengths.iter().copied().max().unwrap_or(0);
    // A sink is needed exactly when some product of realized elements
    // truncates (combined length > k) and no realized element is zero.
    let sink_adjoined = zero_index.is_none() && 2 * max_length > k;
    if sink_adjoined {
        if elements.len() == cap {
            return Err(Error::CapExceeded {
                cap,
                reached: elements.len(),
                word_length: k + 1,
            });
        }
        let id = elements.len();
        let zero = WeightedMatrix::zero(dimension, dimension);
        index.insert(zero.clone(), id);
        elements.push(zero);
        words.push(None);
        lengths.push(k + 1);
        zero_index = Some(id);
    }

    Ok(TruncatedSemigroup {
        k,
        policy,
        dimension,
        elements,
        words,
        lengths,
        generator_names,
        generator_indices,
        generator_matrices,
        index,
        zero_index,
        sink_adjoined,
    })
}

impl TruncatedSemigroup {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn policy(&self) -> RoundingPolicy {
        self.policy
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Number of stored elements, the adjoined sink included.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Number of elements realized by words of length ≤ k (excludes the
    /// adjoined sink, includes a realized zero).
    pub fn realized_len(&self) -> usize {
        self.elements.len() - usize::from(self.sink_adjoined)
    }

    pub fn elements(&self) -> &[WeightedMatrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &WeightedMatrix {
        &self.elements[i]
    }

    pub fn words(&self) -> &[Option<Vec<usize>>] {
        &self.words
    }

    pub fn word(&self, i: usize) -> Option<&[usize]> {
        self.words[i].as_deref()
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
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

    pub fn sink_adjoined(&self) -> bool {
        self.sink_adjoined
    }

    /// Largest shortest-word length among realized elements.
    pub fn max_realized_length(&self) -> usize {
        self.lengths
            .iter()
            .zip(&self.words)
            .filter(|(_, w)| w.is_some())
            .map(|(&l, _)| l)
            .max()
            .unwrap_or(0)
    }

    /// Label of element `i`: its word, or `"0"` for the zero element.
    pub fn element_label(&self, i: usize) -> String {
        if Some(i) == self.zero_index {
            return "0".to_string();
        }
        match &self.words[i] {
            Some(word) => render_word(&self.generator_names, word),
            None => "0".to_string(),
        }
    }

    /// Index of the product of elements `x` and `y`.
    ///
    /// Products whose combined shortest-word length exceeds `k` are the
    /// zero element. Otherwise, with exact arithmetic the product is the
    /// direct `▽` of the stored matrices; with per-step rounding it is
    /// the rounded step-by-step walk of `y`'s word starting from `x`.
    /// Either way the result is always a stored element.
    pub fn product_index(&self, x: usize, y: usize) -> Result<usize> {
        let size = self.elements.len();
        for operand in [x, y] {
            if operand >= size {
                return Err(Error::IndexOutOfRange {
                    index: operand,
                    size,
                });
            }
        }
        if self.lengths[x] + self.lengths[y] > self.k {
            return Ok(self
                .zero_index
                .expect("truncating products implies a zero element"));
        }
        match self.policy {
            RoundingPolicy::None => {
                let product = self.elements[x].max_times(&self.elements[y])?;
                Ok(*self
                    .index
                    .get(&product)
                    .expect("exact products of short words are realized"))
            }
            RoundingPolicy::PerStep { digits } => {
                let word = self.words[y]
                    .as_ref()
                    .expect("non-sink elements carry words");
                let mut acc = x;
                for &g in word {
                    let stepped = self.elements[acc]
                        .max_times(&self.generator_matrices[g])?
                        .round_to_digits(digits);
                    acc = *self
                        .index
                        .get(&stepped)
                        .expect("rounded steps land on realized elements");
                }
                Ok(acc)
            }
        }
    }

    /// Realized element indices grouped by word length, ascending.
    pub fn elements_by_length(&self) -> Vec<(usize, Vec<usize>)> {
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
        for length in 1..=self.max_realized_length() {
            let members: Vec<usize> = (0..self.elements.len())
                .filter(|&i| self.words[i].is_some() && self.lengths[i] == length)
                .collect();
            if !members.is_empty() {
                groups.push((length, members));
            }
        }
        groups
    }
}

/// Builds the counting/stabilization report for a truncated semigroup.
///
/// Three element counts are reported because published figures vary in
/// whether they include the generators and the zero element. The
/// stabilization depth is the largest shortest-word length among realized
/// elements: truncating at that depth (or deeper) yields the same element
/// set, truncating shallower loses elements.
pub fn truncated_report(s: &TruncatedSemigroup) -> TruncatedReport {
    let count_all = s.len();
    let distinct_generators: usize = {
        let mut seen: Vec<usize> = s.generator_indices().to_vec();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    };
    let count_excluding_generators = count_all - distinct_generators;
    let count_excluding_generators_and_zero =
        count_excluding_generators - usize::from(s.zero_index().is_some());
    let mut census: Vec<(usize, usize)> = Vec::new();
    for (length, members) in s.elements_by_length() {
        census.push((length, members.len()));
    }
    let zero_status = match (s.zero_index(), s.sink_adjoined()) {
        (Some(_), false) => "realized",
        (Some(_), true) => "adjoined_sink",
        (None, _) => "absent",
    };
    TruncatedReport {
        k: s.k(),
        policy: s.policy(),
        count_all,
        count_excluding_generators,
        count_excluding_generators_and_zero,
        census,
        stabilization_depth: s.max_realized_length(),
        zero_status: zero_status.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::BoolMatrix;
    use crate::semigroup::{generate_semigroup, DEFAULT_CAP};
    use crate::weight::Weight;

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

    /// The positive/negative 2×2 density generators used in the worked
    /// monastery example.
    fn monk_generators() -> Vec<(String, WeightedMatrix)> {
        vec![
            (
                "P".to_string(),
                weighted_from(&[&["0.11", "0.25"], &["0.11", "0.25"]]),
            ),
            (
                "N".to_string(),
                weighted_from(&[&["0.17", "0.25"], &["0.19", "0.20"]]),
            ),
        ]
    }

    #[test]
    fn max_times_of_the_negative_generator_with_itself() {
        let gens = monk_generators();
        let n = &gens[1].1;
        let exact = max_times(n, n).unwrap();
        assert_eq!(
            exact,
            weighted_from(&[&["0.0475", "0.05"], &["0.038", "0.0475"]])
        );
        assert_eq!(
            round_matrix(&exact, 2),
            weighted_from(&[&["0.05", "0.05"], &["0.04", "0.05"]])
        );
    }

    #[test]
    fn rounding_examples() {
        assert_eq!(w("0.0475").round_to_digits(2), w("0.05"));
        assert_eq!(w("0.038").round_to_digits(2), w("0.04"));
        assert_eq!(w("0.00171875").round_to_digits(2), Weight::zero());
        // Grid midpoints go to the even neighbour.
        assert_eq!(w("0.005").round_to_digits(2), Weight::zero());
        assert_eq!(w("0.015").round_to_digits(2), w("0.02"));
    }

    #[test]
    fn identity_is_neutral_for_max_times() {
        let gens = monk_generators();
        let id = WeightedMatrix::identity(2);
        for (_, m) in &gens {
            assert_eq!(max_times(m, &id).unwrap(), *m);
            assert_eq!(max_times(&id, m).unwrap(), *m);
        }
    }

    #[test]
    fn rounded_closure_of_the_monk_densities() {
        let s = generate_truncated(
            &monk_generators(),
            18,
            RoundingPolicy::per_step(2).unwrap(),
            DEFAULT_CAP,
        )
        .unwrap();
        assert_eq!(s.len(), 10);
        assert!(!s.sink_adjoined());
        assert_eq!(s.zero_index(), Some(9));

        let labels: Vec<String> = (0..s.len()).map(|i| s.element_label(i)).collect();
        assert_eq!(
            labels,
            ["P", "N", "PP", "PN", "NP", "NN", "PPP", "PPN", "NPP", "0"]
        );
        assert_eq!(s.lengths(), &[1, 1, 2, 2, 2, 2, 3, 3, 3, 4]);

        // The four distinct 2-fold products.
        let expect = |label: &str, rows: &[&[&str]]| {
            let i = labels.iter().position(|l| l == label).unwrap();
            assert_eq!(*s.element(i), weighted_from(rows), "element {label}");
        };
        expect("PP", &[&["0.03", "0.06"], &["0.03", "0.06"]]);
        expect("PN", &[&["0.05", "0.05"], &["0.05", "0.05"]]);
        expect("NP", &[&["0.03", "0.06"], &["0.02", "0.05"]]);
        expect("NN", &[&["0.05", "0.05"], &["0.04", "0.05"]]);
        // The three distinct 3-fold products.
        expect("PPP", &[&["0.01", "0.02"], &["0.01", "0.02"]]);
        expect("PPN", &[&["0.01", "0.01"], &["0.01", "0.01"]]);
        expect("NPP", &[&["0.01", "0.02"], &["0.01", "0.01"]]);
        // The only 4-fold value is the zero matrix, realized by PPPP.
        assert!(s.element(9).is_zero());
        assert_eq!(s.word(9), Some(&[0usize, 0, 0, 0][..]));

        let report = truncated_report(&s);
        assert_eq!(report.count_all, 10);
        assert_eq!(report.count_excluding_generators, 8);
        assert_eq!(report.count_excluding_generators_and_zero, 7);
        assert_eq!(report.census, vec![(1, 2), (2, 4), (3, 3), (4, 1)]);
        assert_eq!(report.stabilization_depth, 4);
        assert_eq!(report.zero_status, "realized");
    }

    #[test]
    fn per_step_entries_stay_on_the_decimal_grid() {
        let s = generate_truncated(
            &monk_generators(),
            18,
            RoundingPolicy::per_step(2).unwrap(),
            DEFAULT_CAP,
        )
        .unwrap();
        for m in s.elements() {
            for i in 0..m.n_rows() {
                for j in 0..m.n_cols() {
                    let scaled = m.get(i, j).as_rational() * num::BigRational::from_integer(100.into());
                    assert!(scaled.is_integer(), "entry {} is off-grid", m.get(i, j));
                }
            }
        }
    }

    #[test]
    fn per_step_products_walk_the_word() {
        let s = generate_truncated(
            &monk_generators(),
            18,
            RoundingPolicy::per_step(2).unwrap(),
            DEFAULT_CAP,
        )
        .unwrap();
        let find = |label: &str| {
            (0..s.len())
                .find(|&i| s.element_label(i) == label)
                .unwrap()
        };
        let pp = find("PP");
        let p = find("P");
        assert_eq!(s.product_index(pp, p).unwrap(), find("PPP"));
        // PP ∘ PP walks P twice from PP: PPP, then the zero matrix.
        assert_eq!(s.product_index(pp, pp).unwrap(), s.zero_index().unwrap());
        // Truncation: combined word length beyond k is zero by fiat.
        let s2 = generate_truncated(
            &monk_generators(),
            3,
            RoundingPolicy::per_step(2).unwrap(),
            DEFAULT_CAP,
        )
        .unwrap();
        let pp2 = (0..s2.len()).find(|&i| s2.element_label(i) == "PP").unwrap();
        assert_eq!(
            s2.product_index(pp2, pp2).unwrap(),
            s2.zero_index().unwrap()
        );
        assert!(s2.sink_adjoined());
    }

    #[test]
    fn truncation_at_depth_one_keeps_generators_plus_sink() {
        let s = generate_truncated(
            &monk_generators(),
            1,
            RoundingPolicy::per_step(2).unwrap(),
            DEFAULT_CAP,
        )
        .unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.sink_adjoined());
        assert_eq!(s.zero_index(), Some(2));
        assert_eq!(s.word(2), None);
        assert_eq!(s.lengths(), &[1, 1, 2]);
        assert_eq!(s.product_index(0, 1).unwrap(), 2);
        let report = truncated_report(&s);
        assert_eq!(report.zero_status, "adjoined_sink");
        assert_eq!(report.stabilization_depth, 1);
        assert_eq!(report.census, vec![(1, 2)]);
    }

    #[test]
    fn exact_mode_truncates_at_small_depths() {
        let s = generate_truncated(&monk_generators(), 2, RoundingPolicy::None, DEFAULT_CAP).unwrap();
        // Both generators and all four exact 2-fold products are distinct.
        assert_eq!(s.realized_len(), 6);
        assert!(s.sink_adjoined());
        assert_eq!(s.len(), 7);
        let pp = 2;
        assert_eq!(s.lengths()[pp], 2);
        assert_eq!(s.product_index(pp, pp).unwrap(), s.zero_index().unwrap());
        assert_eq!(s.product_index(0, 1).unwrap(), 3);
    }

    #[test]
    fn boolean_generators_specialize_to_the_boolean_semigroup() {
        let h = BoolMatrix::from_rows(&[
            vec![0, 1, 1, 0, 0, 0],
            vec![0, 0, 0, 1, 0, 0],
            vec![0, 0, 0, 0, 1, 1],
            vec![0, 0, 0, 0, 0, 0],
            vec![0, 0, 0, 0, 0, 0],
            vec![0, 0, 0, 0, 0, 0],
        ]);
        let l = BoolMatrix::from_rows(&[
            vec![1, 0, 0, 0, 0, 0],
            vec![0, 1, 1, 0, 0, 0],
            vec![0, 1, 1, 0, 0, 0],
            vec![0, 0, 0, 1, 1, 1],
            vec![0, 0, 0, 1, 1, 1],
            vec![0, 0, 0, 1, 1, 1],
        ]);
        let bool_gens = vec![("H".to_string(), h.clone()), ("L".to_string(), l.clone())];
        let weighted_gens = vec![
            ("H".to_string(), h.to_weighted()),
            ("L".to_string(), l.to_weighted()),
        ];
        let boolean = generate_semigroup(&bool_gens, DEFAULT_CAP).unwrap();
        // k at twice the longest word rules truncation out entirely.
        let truncated =
            generate_truncated(&weighted_gens, 12, RoundingPolicy::None, DEFAULT_CAP).unwrap();
        assert_eq!(truncated.realized_len(), boolean.len());
        assert!(!truncated.sink_adjoined());
        for i in 0..boolean.len() {
            assert_eq!(
                truncated.element(i).to_bool().unwrap(),
                *boolean.element(i),
                "element {i}"
            );
            assert_eq!(truncated.word(i), Some(boolean.word(i)));
        }
        assert_eq!(
            truncated.zero_index(),
            boolean.zero_index(),
            "zero discovered at the same position"
        );
        for x in 0..boolean.len() {
            for y in 0..boolean.len() {
                assert_eq!(
                    truncated.product_index(x, y).unwrap(),
                    boolean.product(x, y),
                    "product ({x},{y})"
                );
            }
        }
    }

    #[test]
    fn input_validation() {
        assert!(matches!(
            generate_truncated(&[], 3, RoundingPolicy::None, DEFAULT_CAP),
            Err(Error::NoRelations)
        ));
        assert!(generate_truncated(&monk_generators(), 0, RoundingPolicy::None, DEFAULT_CAP).is_err());
        assert!(RoundingPolicy::per_step(13).is_err());
        assert!(RoundingPolicy::per_step(12).is_ok());
        let ragged = vec![
            ("A".to_string(), WeightedMatrix::zero(2, 2)),
            ("B".to_string(), WeightedMatrix::zero(3, 3)),
        ];
        assert!(generate_truncated(&ragged, 2, RoundingPolicy::None, DEFAULT_CAP).is_err());
        match generate_truncated(&monk_generators(), 18, RoundingPolicy::None, 100) {
            Err(Error::CapExceeded { cap, .. }) => assert_eq!(cap, 100),
            other => panic!("expected CapExceeded, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_generator_matrices_share_an_element() {
        let m = weighted_from(&[&["0.5", "0"], &["0", "0.5"]]);
        let gens = vec![("A".to_string(), m.clone()), ("B".to_string(), m)];
        let s = generate_truncated(&gens, 4, RoundingPolicy::None, DEFAULT_CAP).unwrap();
        assert_eq!(s.generator_indices(), &[0, 0]);
        let report = truncated_report(&s);
        // Census counts elements, not generator slots.
        assert_eq!(report.census[0], (1, 1));
        assert_eq!(report.count_all - report.count_excluding_generators, 1);
    }

    #[test]
    fn policy_descriptions_and_serialization() {
        assert_eq!(RoundingPolicy::None.describe(), "none");
        assert_eq!(RoundingPolicy::per_step(2).unwrap().describe(), "per_step_2");
        let json = serde_json::to_string(&RoundingPolicy::per_step(2).unwrap()).unwrap();
        assert_eq!(json, r#"{"mode":"per_step","digits":2}"#);
        assert_eq!(
            serde_json::to_string(&RoundingPolicy::None).unwrap(),
            r#"{"mode":"none"}"#
        );
    }
}
