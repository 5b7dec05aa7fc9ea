//! Binary sparsity patterns and the {0,1} semiring (OR as sum, AND as product).

use std::fmt;
use std::ops::{Add, Mul};

use crate::error::{QiError, Result};

/// Row-major `rows × cols` matrix over {0,1}.
///
/// Used for both controller patterns (`K[k][l] = 1` if input `k` may read
/// measurement `l`) and plant patterns (`G[i][j] = 1` if input `j` affects
/// measurement `i`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryPattern {
    rows: usize,
    cols: usize,
    entries: Vec<bool>,
}

impl BinaryPattern {
    pub fn new(rows: usize, cols: usize, entries: Vec<bool>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(QiError::Dimension(format!("empty {rows}x{cols} pattern")));
        }
        if entries.len() != rows * cols {
            return Err(QiError::Dimension(format!(
                "{} entries for a {rows}x{cols} pattern",
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    /// Builds a pattern from nested rows of 0/1 integers.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            let row = row.as_ref();
            if row.len() != c {
                return Err(QiError::Dimension("ragged rows".into()));
            }
            for &v in row {
                match v {
                    0 => entries.push(false),
                    1 => entries.push(true),
                    _ => return Err(QiError::Parameter(format!("binary entry must be 0 or 1, got {v}"))),
                }
            }
        }
        Self::new(r, c, entries)
    }

    /// Pattern whose row-major entries are the low `rows * cols` bits of `bits`
    /// (bit 0 is entry (0,0)).
    pub fn from_bits(rows: usize, cols: usize, bits: u64) -> Result<Self> {
        let n = rows * cols;
        if n > 64 {
            return Err(QiError::Dimension(format!("{rows}x{cols} does not fit in 64 bits")));
        }
        Self::new(rows, cols, (0..n).map(|b| bits >> b & 1 == 1).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![false; rows * cols]).expect("positive shape")
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![true; rows * cols]).expect("positive shape")
    }

    pub fn identity(n: usize) -> Self {
        let mut p = Self::zeros(n, n);
        for i in 0..n {
            p.set(i, i, true);
        }
        p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn entries(&self) -> &[bool] {
        &self.entries
    }

    /// Number of ones.
    pub fn nnz(&self) -> usize {
        self.entries.iter().filter(|&&b| b).count()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Entrywise OR.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(QiError::Dimension(format!(
                "binary sum of {:?} and {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a | b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, entries })
    }

    /// Boolean matrix product (OR of ANDs).
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(QiError::Dimension(format!(
                "binary product of {:?} and {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let dst = i * other.cols;
            for k in 0..self.cols {
                if !self.get(i, k) {
                    continue;
                }
                let src = k * other.cols;
                for j in 0..other.cols {
                    out.entries[dst + j] |= other.entries[src + j];
                }
            }
        }
        Ok(out)
    }

    /// Entrywise `self ≤ other`. Shapes must agree.
    pub fn le(&self, other: &Self) -> bool {
        self.shape() == other.shape()
            && self.entries.iter().zip(&other.entries).all(|(a, b)| !a | b)
    }

    /// Positions (row, col) where `self` is 1 and `other` is 0, row-major.
    pub fn ones_missing_from(&self, other: &Self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) && !other.get(r, c) {
                    out.push((r, c));
                }
            }
        }
        out
    }

    /// Number of differing cells.
    pub fn hamming(&self, other: &Self) -> usize {
        self.entries.iter().zip(&other.entries).filter(|(a, b)| a != b).count()
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.entries
            .chunks(self.cols)
            .map(|row| row.iter().map(|&b| u8::from(b)).collect())
            .collect()
    }
}

impl Add for &BinaryPattern {
    type Output = BinaryPattern;

    /// Panics on shape mismatch; see [`BinaryPattern::try_add`].
    fn add(self, rhs: &BinaryPattern) -> BinaryPattern {
        self.try_add(rhs).expect("shape mismatch in binary sum")
    }
}

impl Mul for &BinaryPattern {
    type Output = BinaryPattern;

    /// Panics on shape mismatch; see [`BinaryPattern::try_mul`].
    fn mul(self, rhs: &BinaryPattern) -> BinaryPattern {
        self.try_mul(rhs).expect("shape mismatch in binary product")
    }
}

impl serde::Serialize for BinaryPattern {
    /// Nested rows of 0/1.
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl fmt::Display for BinaryPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_rows() {
            let line: Vec<String> = row.iter().map(u8::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn all_2x2() -> Vec<BinaryPattern> {
        (0..16).map(|b| BinaryPattern::from_bits(2, 2, b).unwrap()).collect()
    }

    #[test]
    fn or_sum() {
        let x = BinaryPattern::from_rows(&[[0, 1], [0, 0]]).unwrap();
        let y = BinaryPattern::from_rows(&[[1, 0], [0, 0]]).unwrap();
        assert_eq!(&x + &y, BinaryPattern::from_rows(&[[1, 1], [0, 0]]).unwrap());
        assert_eq!(&x + &BinaryPattern::zeros(2, 2), x);
    }

    #[test]
    fn shape_errors() {
        let a = BinaryPattern::zeros(2, 3);
        let b = BinaryPattern::zeros(3, 2);
        assert!(matches!(a.try_add(&b), Err(QiError::Dimension(_))));
        assert!(matches!(a.try_mul(&a), Err(QiError::Dimension(_))));
        assert!(a.try_mul(&b).is_ok());
    }

    #[test]
    fn boolean_product() {
        let x = BinaryPattern::from_rows(&[[1, 1], [0, 0]]).unwrap();
        let y = BinaryPattern::from_rows(&[[0, 0], [1, 0]]).unwrap();
        assert_eq!(&x * &y, BinaryPattern::from_rows(&[[1, 0], [0, 0]]).unwrap());
        let i = BinaryPattern::identity(2);
        assert_eq!(&i * &x, x);
    }

    #[test]
    fn nnz_counts() {
        assert_eq!(BinaryPattern::identity(4).nnz(), 4);
        assert_eq!(BinaryPattern::zeros(3, 5).nnz(), 0);
        let z_star_1 =
            BinaryPattern::from_rows(&[[1, 0, 0, 0], [1, 1, 0, 0], [1, 1, 1, 1], [0, 0, 0, 1]]).unwrap();
        assert_eq!(z_star_1.nnz(), 8);
    }

    #[test]
    fn daisy_chain_square_reaches_two_hops() {
        let g2 = BinaryPattern::from_rows(&[[1, 0, 0, 0], [1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1]]).unwrap();
        let sq = &g2 * &g2;
        // (3,1) in 1-based indexing
        assert!(sq.get(2, 0));
        assert!(!sq.get(3, 0));
    }

    #[test]
    fn semiring_laws_exhaustive_2x2() {
        let all = all_2x2();
        for x in &all {
            assert_eq!(&(x + x), x);
            for y in &all {
                assert_eq!(&(x + y), &(y + x));
                for z in &all {
                    assert_eq!(&(&(x + y) + z), &(x + &(y + z)));
                    assert_eq!(&(x * &(y + z)), &(&(x * y) + &(x * z)));
                    assert_eq!(&(&(y + z) * x), &(&(y * x) + &(z * x)));
                }
            }
        }
    }

    fn pattern(rows: usize, cols: usize) -> impl Strategy<Value = BinaryPattern> {
        proptest::collection::vec(any::<bool>(), rows * cols)
            .prop_map(move |e| BinaryPattern::new(rows, cols, e).unwrap())
    }

    proptest! {
        #[test]
        fn sum_dominates_summands((x, y) in (1usize..6, 1usize..6).prop_flat_map(|(r, c)| (pattern(r, c), pattern(r, c)))) {
            let z = &x + &y;
            prop_assert!(x.le(&z));
            prop_assert!(y.le(&z));
            prop_assert_eq!(&x + &y == x, y.le(&x));
            prop_assert_eq!(x.le(&y) && y.le(&x), x == y);
        }
    }
}
