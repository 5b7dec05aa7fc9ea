//! Extended nonnegative reals and delay matrices.
//!
//! A delay is either a finite nonnegative number or `+∞`. The infinite value
//! is a dedicated variant rather than `f64::INFINITY`, so it can only be
//! produced by construction or by `∞ + x`, never by a subtraction.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::{Serialize, Serializer};

use crate::error::{QiError, Result};
use crate::pattern::BinaryPattern;

/// A point of the extended half line `[0, +∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Delay {
    Finite(f64),
    Infinite,
}

impl Delay {
    pub const ZERO: Delay = Delay::Finite(0.0);

    /// Builds a finite delay, rejecting negative and non-finite values.
    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() {
            return Err(QiError::Parameter("delay is NaN".into()));
        }
        if value == f64::INFINITY {
            return Ok(Delay::Infinite);
        }
        if !value.is_finite() || value < 0.0 {
            return Err(QiError::Parameter(format!("delay must be in [0, inf], got {value}")));
        }
        Ok(Delay::Finite(value))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Delay::Infinite)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Delay::Finite(v) => Some(v),
            Delay::Infinite => None,
        }
    }

    /// `min` in the (min,+) semiring; `∞` is the additive identity.
    pub fn min(self, other: Delay) -> Delay {
        match (self, other) {
            (Delay::Infinite, x) | (x, Delay::Infinite) => x,
            (Delay::Finite(a), Delay::Finite(b)) => Delay::Finite(a.min(b)),
        }
    }

    /// `self - other` when the result is meaningful: `∞ - finite = ∞`,
    /// and `None` whenever `other` is infinite.
    pub fn excess_over(self, other: Delay) -> Option<Delay> {
        match (self, other) {
            (_, Delay::Infinite) => None,
            (Delay::Infinite, Delay::Finite(_)) => Some(Delay::Infinite),
            (Delay::Finite(a), Delay::Finite(b)) => Some(Delay::Finite(a - b)),
        }
    }
}

impl Add for Delay {
    type Output = Delay;

    fn add(self, rhs: Delay) -> Delay {
        match (self, rhs) {
            (Delay::Finite(a), Delay::Finite(b)) => Delay::Finite(a + b),
            _ => Delay::Infinite,
        }
    }
}

impl PartialOrd for Delay {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Delay::Infinite, Delay::Infinite) => Some(Ordering::Equal),
            (Delay::Infinite, _) => Some(Ordering::Greater),
            (_, Delay::Infinite) => Some(Ordering::Less),
            (Delay::Finite(a), Delay::Finite(b)) => a.partial_cmp(b),
        }
    }
}

impl From<f64> for Delay {
    /// Panics on negative or NaN input; use [`Delay::new`] for fallible construction.
    fn from(value: f64) -> Self {
        Delay::new(value).expect("invalid delay")
    }
}

impl fmt::Display for Delay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Delay::Finite(v) => write!(f, "{v}"),
            Delay::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Delay {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Delay::Finite(v) => serializer.serialize_f64(*v),
            Delay::Infinite => serializer.serialize_str("inf"),
        }
    }
}

/// Row-major `rows × cols` matrix of delays.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Delay>,
}

impl DelayMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Delay>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(QiError::Dimension(format!("empty {rows}x{cols} delay matrix")));
        }
        if entries.len() != rows * cols {
            return Err(QiError::Dimension(format!(
                "{} entries for a {rows}x{cols} delay matrix",
                entries.len()
            )));
        }
        for e in &entries {
            if let Delay::Finite(v) = e {
                if !(v.is_finite() && *v >= 0.0) {
                    return Err(QiError::Parameter(format!("delay must be in [0, inf], got {v}")));
                }
            }
        }
        Ok(Self { rows, cols, entries })
    }

    /// Builds a finite delay matrix from nested rows. `f64::INFINITY` maps to `+∞`.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            let row = row.as_ref();
            if row.len() != c {
                return Err(QiError::Dimension("ragged rows".into()));
            }
            for &v in row {
                entries.push(Delay::new(v)?);
            }
        }
        Self::new(r, c, entries)
    }

    pub fn filled(rows: usize, cols: usize, value: Delay) -> Result<Self> {
        Self::new(rows, cols, vec![value; rows * cols])
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

    pub fn get(&self, r: usize, c: usize) -> Delay {
        self.entries[r * self.cols + c]
    }

    pub fn entries(&self) -> &[Delay] {
        &self.entries
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|d| !d.is_infinite())
    }

    /// Finite entries as plain floats, or `None` if any entry is infinite.
    pub fn to_finite_vec(&self) -> Option<Vec<f64>> {
        self.entries.iter().map(|d| d.finite()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Delay>> {
        self.entries.chunks(self.cols).map(<[Delay]>::to_vec).collect()
    }

    /// Entrywise `self - other` for finite matrices.
    pub fn difference(&self, other: &DelayMatrix) -> Result<Vec<Vec<f64>>> {
        if self.shape() != other.shape() {
            return Err(QiError::Dimension(format!(
                "{:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let a = self
            .to_finite_vec()
            .ok_or_else(|| QiError::UnsupportedInput("difference of infinite delays".into()))?;
        let b = other
            .to_finite_vec()
            .ok_or_else(|| QiError::UnsupportedInput("difference of infinite delays".into()))?;
        Ok(a.iter()
            .zip(&b)
            .map(|(x, y)| x - y)
            .collect::<Vec<_>>()
            .chunks(self.cols)
            .map(<[f64]>::to_vec)
            .collect())
    }

    /// Product in the (min,+) semiring: `(A ⊗ B)_{ij} = min_k A_{ik} + B_{kj}`.
    pub fn min_plus(&self, other: &DelayMatrix) -> Result<DelayMatrix> {
        if self.cols != other.rows {
            return Err(QiError::Dimension(format!(
                "(min,+) product of {:?} and {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let mut out = vec![Delay::Infinite; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_infinite() {
                    continue;
                }
                for j in 0..other.cols {
                    let cell = &mut out[i * other.cols + j];
                    *cell = cell.min(a + other.get(k, j));
                }
            }
        }
        DelayMatrix::new(self.rows, other.cols, out)
    }

    /// Entrywise minimum, the (min,+) sum.
    pub fn min_entrywise(&self, other: &DelayMatrix) -> Result<DelayMatrix> {
        if self.shape() != other.shape() {
            return Err(QiError::Dimension(format!(
                "{:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.min(*b))
            .collect();
        DelayMatrix::new(self.rows, self.cols, entries)
    }

    /// Thresholds delays into a pattern: `d < threshold` becomes 1.
    pub fn to_sparsity(&self, threshold: f64) -> Result<BinaryPattern> {
        delay_to_sparsity(self, threshold)
    }
}

impl Serialize for DelayMatrix {
    /// Nested rows; infinite entries serialize as `"inf"`.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

/// Maps a sparsity pattern to delays: 1 ↦ 0 and 0 ↦ `scale`.
///
/// Any positive `scale` gives the same quadratic invariance verdict.
pub fn sparsity_to_delay(pattern: &BinaryPattern, scale: f64) -> Result<DelayMatrix> {
    if !(scale > 0.0) {
        return Err(QiError::Parameter(format!("scale must be positive, got {scale}")));
    }
    let big = Delay::new(scale)?;
    let entries = pattern
        .entries()
        .iter()
        .map(|&b| if b { Delay::ZERO } else { big })
        .collect();
    DelayMatrix::new(pattern.rows(), pattern.cols(), entries)
}

/// Inverse of [`sparsity_to_delay`]: entries strictly below `threshold` become 1.
pub fn delay_to_sparsity(delays: &DelayMatrix, threshold: f64) -> Result<BinaryPattern> {
    if !(threshold > 0.0) {
        return Err(QiError::Parameter(format!(
            "threshold must be positive, got {threshold}"
        )));
    }
    let th = Delay::Finite(threshold);
    let entries = delays.entries().iter().map(|d| *d < th).collect();
    BinaryPattern::new(delays.rows(), delays.cols(), entries)
}
