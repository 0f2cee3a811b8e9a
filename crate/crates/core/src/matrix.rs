//! Boolean and weighted relation matrices.
//!
//! [`BoolMatrix`] packs each row into `u64` words so that the Boolean matrix
//! product reduces to row-wise OR, which keeps closure enumeration cheap even
//! for dense frontiers. [`WeightedMatrix`] stores exact [`Weight`] entries in
//! the unit interval and carries the max-times product used by truncated
//! semigroups. Both types implement `Eq`/`Hash` structurally so closure
//! algorithms can deduplicate elements by exact matrix equality.

use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::weight::Weight;

/// A dense Boolean matrix with bit-packed rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BoolMatrix {
    /// An all-zero matrix.
    pub fn zero(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64).max(1);
        BoolMatrix {
            rows,
            cols,
            words_per_row,
            bits: vec![0; rows * words_per_row],
        }
    }

    /// The n-by-n identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = BoolMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of 0/1 values.
    ///
    /// # Panics
    /// Panics if the rows are ragged.
    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        let mut m = BoolMatrix::zero(n_rows, n_cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n_cols, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v != 0);
            }
        }
        m
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        let word = self.bits[i * self.words_per_row + j / 64];
        (word >> (j % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        debug_assert!(i < self.rows && j < self.cols);
        let word = &mut self.bits[i * self.words_per_row + j / 64];
        if value {
            *word |= 1 << (j % 64);
        } else {
            *word &= !(1 << (j % 64));
        }
    }

    /// Number of 1 entries.
    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// True iff every entry is zero.
    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    fn row_words(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    /// Boolean matrix product: `C(i,j) = OR_k (A(i,k) AND B(k,j))`.
    ///
    /// Row `i` of the product is the OR of the rows of `B` selected by the
    /// 1 entries in row `i` of `A`.
    pub fn bool_product(&self, other: &BoolMatrix) -> Result<BoolMatrix> {
        if self.cols != other.rows {
            return Err(Error::NotConformable {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        let mut out = BoolMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for (word_index, &word) in self.row_words(i).iter().enumerate() {
                let mut remaining = word;
                while remaining != 0 {
                    let k = word_index * 64 + remaining.trailing_zeros() as usize;
                    remaining &= remaining - 1;
                    let (dst, src) = (i * out.words_per_row, k * other.words_per_row);
                    for w in 0..other.words_per_row {
                        out.bits[dst + w] |= other.bits[src + w];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Reorders rows and columns by `order`: entry (i,j) of the result is
    /// entry (order[i], order[j]) of `self`.
    pub fn permuted(&self, order: &[usize]) -> BoolMatrix {
        assert!(self.is_square() && order.len() == self.rows);
        let mut out = BoolMatrix::zero(self.rows, self.cols);
        for (i, &oi) in order.iter().enumerate() {
            for (j, &oj) in order.iter().enumerate() {
                out.set(i, j, self.get(oi, oj));
            }
        }
        out
    }

    /// The same matrix with exact 0/1 weights.
    pub fn to_weighted(&self) -> WeightedMatrix {
        let entries = (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .map(|(i, j)| {
                if self.get(i, j) {
                    Weight::one()
                } else {
                    Weight::zero()
                }
            })
            .collect();
        WeightedMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    /// Rows as vectors of 0/1, for serialization and display.
    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| u8::from(self.get(i, j))).collect())
            .collect()
    }
}

impl fmt::Display for BoolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<&str> = (0..self.cols)
                .map(|j| if self.get(i, j) { "1" } else { "0" })
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for BoolMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for row in self.to_rows() {
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

/// A dense matrix of exact weights in the unit interval.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Weight>,
}

impl WeightedMatrix {
    /// An all-zero matrix.
    pub fn zero(rows: usize, cols: usize) -> Self {
        WeightedMatrix {
            rows,
            cols,
            entries: vec![Weight::zero(); rows * cols],
        }
    }

    /// The n-by-n identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = WeightedMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Weight::one());
        }
        m
    }

    /// Builds a matrix from entry rows, validating the unit-interval range.
    pub fn from_rows(rows: Vec<Vec<Weight>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(n_rows * n_cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n_cols {
                return Err(Error::InvalidParameter {
                    name: "matrix".into(),
                    message: format!("row {i} has {} entries, expected {n_cols}", row.len()),
                });
            }
            for (j, value) in row.into_iter().enumerate() {
                if !value.in_unit_interval() {
                    return Err(Error::EntryRange {
                        relation: String::new(),
                        row: i,
                        col: j,
                        value: value.to_string(),
                    });
                }
                entries.push(value);
            }
        }
        Ok(WeightedMatrix {
            rows: n_rows,
            cols: n_cols,
            entries,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Weight {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Weight) {
        self.entries[i * self.cols + j] = value;
    }

    /// True iff every entry is zero.
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Weight::is_zero)
    }

    /// True iff every entry is 0 or 1.
    pub fn is_boolean(&self) -> bool {
        self.entries.iter().all(Weight::is_boolean)
    }

    /// Max-times product: `C(i,j) = max_k A(i,k) * B(k,j)`.
    pub fn max_times(&self, other: &WeightedMatrix) -> Result<WeightedMatrix> {
        if self.cols != other.rows {
            return Err(Error::NotConformable {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        let mut out = WeightedMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut best = Weight::zero();
                for k in 0..self.cols {
                    let candidate = self.get(i, k) * other.get(k, j);
                    if candidate > best {
                        best = candidate;
                    }
                }
                out.set(i, j, best);
            }
        }
        Ok(out)
    }

    /// Entrywise rounding to `digits` decimal places, ties to even.
    pub fn round_to_digits(&self, digits: u32) -> WeightedMatrix {
        WeightedMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|w| w.round_to_digits(digits))
                .collect(),
        }
    }

    /// Boolean matrix with 1 exactly where the entry is at least `delta`.
    pub fn threshold(&self, delta: &Weight) -> BoolMatrix {
        let mut out = BoolMatrix::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j) >= delta);
            }
        }
        out
    }

    /// Boolean matrix with 1 exactly where the entry is positive.
    pub fn positive_pattern(&self) -> BoolMatrix {
        let mut out = BoolMatrix::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, !self.get(i, j).is_zero());
            }
        }
        out
    }

    /// Reorders rows and columns by `order`, as [`BoolMatrix::permuted`].
    pub fn permuted(&self, order: &[usize]) -> WeightedMatrix {
        assert!(self.is_square() && order.len() == self.rows);
        let mut out = WeightedMatrix::zero(self.rows, self.cols);
        for (i, &oi) in order.iter().enumerate() {
            for (j, &oj) in order.iter().enumerate() {
                out.set(i, j, self.get(oi, oj).clone());
            }
        }
        out
    }

    /// Exact conversion to Boolean, if every entry is 0 or 1.
    pub fn to_bool(&self) -> Option<BoolMatrix> {
        if !self.is_boolean() {
            return None;
        }
        let mut out = BoolMatrix::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).is_one());
            }
        }
        Some(out)
    }

    /// Rows rendered as decimal strings, for serialization and display.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }
}

impl fmt::Display for WeightedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_string_rows() {
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for WeightedMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for row in self.to_string_rows() {
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Weight {
        s.parse().unwrap()
    }

    fn weighted(rows: &[&[&str]]) -> WeightedMatrix {
        WeightedMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| w(s)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn bool_get_set_and_counts() {
        let mut m = BoolMatrix::zero(3, 3);
        assert!(m.is_zero());
        m.set(0, 2, true);
        m.set(2, 0, true);
        assert!(m.get(0, 2) && m.get(2, 0) && !m.get(1, 1));
        assert_eq!(m.count_ones(), 2);
        m.set(0, 2, false);
        assert_eq!(m.count_ones(), 1);
    }

    #[test]
    fn bool_product_matches_definition() {
        let a = BoolMatrix::from_rows(&[vec![1, 1, 0], vec![0, 0, 1], vec![0, 0, 0]]);
        let b = BoolMatrix::from_rows(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]);
        let c = a.bool_product(&b).unwrap();
        let mut expected = BoolMatrix::zero(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                let mut any = false;
                for k in 0..3 {
                    any |= a.get(i, k) && b.get(k, j);
                }
                expected.set(i, j, any);
            }
        }
        assert_eq!(c, expected);
    }

    #[test]
    fn product_with_identity_is_identity_map() {
        let a = BoolMatrix::from_rows(&[vec![1, 0], vec![1, 1]]);
        let id = BoolMatrix::identity(2);
        assert_eq!(a.bool_product(&id).unwrap(), a);
        assert_eq!(id.bool_product(&a).unwrap(), a);
    }

    #[test]
    fn product_dimension_mismatch() {
        let a = BoolMatrix::zero(2, 3);
        let b = BoolMatrix::zero(2, 2);
        assert!(matches!(
            a.bool_product(&b),
            Err(Error::NotConformable { .. })
        ));
    }

    #[test]
    fn wide_matrices_cross_word_boundaries() {
        let n = 70;
        let mut a = BoolMatrix::zero(n, n);
        a.set(0, 69, true);
        let mut b = BoolMatrix::zero(n, n);
        b.set(69, 68, true);
        let c = a.bool_product(&b).unwrap();
        assert!(c.get(0, 68));
        assert_eq!(c.count_ones(), 1);
    }

    #[test]
    fn max_times_matches_definition() {
        let n = weighted(&[&["0.17", "0.25"], &["0.19", "0.20"]]);
        let nn = n.max_times(&n).unwrap();
        assert_eq!(nn, weighted(&[&["0.0475", "0.05"], &["0.038", "0.0475"]]));
    }

    #[test]
    fn max_times_identity() {
        let a = weighted(&[&["0.3", "0.7"], &["0", "1"]]);
        let id = WeightedMatrix::identity(2);
        assert_eq!(a.max_times(&id).unwrap(), a);
        assert_eq!(id.max_times(&a).unwrap(), a);
    }

    #[test]
    fn max_times_specializes_to_bool_product() {
        let a = BoolMatrix::from_rows(&[vec![0, 1, 1], vec![1, 0, 0], vec![0, 0, 1]]);
        let b = BoolMatrix::from_rows(&[vec![1, 1, 0], vec![0, 0, 0], vec![0, 1, 0]]);
        let exact = a.to_weighted().max_times(&b.to_weighted()).unwrap();
        assert_eq!(exact.to_bool().unwrap(), a.bool_product(&b).unwrap());
    }

    #[test]
    fn threshold_and_positive_pattern() {
        let d = weighted(&[&["0", "1", "0"], &["0", "0", "0.5"], &["0", "0", "0"]]);
        let image = d.threshold(&w("5/36"));
        assert_eq!(
            image,
            BoolMatrix::from_rows(&[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]])
        );
        assert_eq!(d.positive_pattern(), image);
        let strict = d.threshold(&w("0.6"));
        assert_eq!(strict.count_ones(), 1);
    }

    #[test]
    fn from_rows_rejects_out_of_range() {
        let rows = vec![vec![w("0.5"), w("1.5")]];
        assert!(matches!(
            WeightedMatrix::from_rows(rows),
            Err(Error::EntryRange { .. })
        ));
    }

    #[test]
    fn permutation_reorders_rows_and_columns() {
        let a = BoolMatrix::from_rows(&[vec![0, 1], vec![0, 0]]);
        let p = a.permuted(&[1, 0]);
        assert!(p.get(1, 0));
        assert_eq!(p.count_ones(), 1);
        let wm = a.to_weighted().permuted(&[1, 0]);
        assert!(wm.get(1, 0).is_one());
    }
}
