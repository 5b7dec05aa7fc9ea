//! Quadratic invariance tests for delay and sparsity constraints.
//!
//! A delay constraint `t` (inputs × measurements) is quadratically invariant
//! under propagation delays `p` (measurements × inputs) iff
//! `t[k][i] + p[i][j] + t[j][l] >= t[k][l]` for every quadruple. A sparsity
//! constraint `K` is QI under plant pattern `G` iff no quadruple has
//! `K[k][i] = G[i][j] = K[j][l] = 1` with `K[k][l] = 0`.
//!
//! All tests enumerate quadruples and return every failure, sorted by
//! `(k, l, i, j)`. Indices are stored 0-based and serialized 1-based.

use serde::{Serialize, Serializer};

use crate::delay::{Delay, DelayMatrix};
use crate::error::{QiError, Result};
use crate::pattern::BinaryPattern;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstraintKind {
    Sparsity,
    Delay,
}

/// A quadruple `(k, i, j, l)` at which the QI condition fails.
///
/// `slack` is `t[k][l] - (t[k][i] + p[i][j] + t[j][l])` for delay
/// constraints and `None` for sparsity constraints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QiViolation {
    pub k: usize,
    pub i: usize,
    pub j: usize,
    pub l: usize,
    pub slack: Option<Delay>,
}

impl QiViolation {
    /// `(k, i, j, l)` with 1-based indices.
    pub fn one_based(&self) -> (usize, usize, usize, usize) {
        (self.k + 1, self.i + 1, self.j + 1, self.l + 1)
    }
}

impl Serialize for QiViolation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("QiViolation", 5)?;
        s.serialize_field("k", &(self.k + 1))?;
        s.serialize_field("i", &(self.i + 1))?;
        s.serialize_field("j", &(self.j + 1))?;
        s.serialize_field("l", &(self.l + 1))?;
        s.serialize_field("slack", &self.slack)?;
        s.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QiReport {
    pub is_qi: bool,
    pub violations: Vec<QiViolation>,
    pub kind: ConstraintKind,
}

impl QiReport {
    fn from_violations(kind: ConstraintKind, violations: Vec<QiViolation>) -> Self {
        Self { is_qi: violations.is_empty(), violations, kind }
    }
}

fn check_conformant(controller: (usize, usize), plant: (usize, usize)) -> Result<()> {
    if controller.0 != plant.1 || controller.1 != plant.0 {
        return Err(QiError::Dimension(format!(
            "controller is {}x{} so plant must be {}x{}, got {}x{}",
            controller.0, controller.1, controller.1, controller.0, plant.0, plant.1
        )));
    }
    Ok(())
}

/// Full delay QI test with exact comparisons.
pub fn is_qi_delay(t: &DelayMatrix, p: &DelayMatrix) -> Result<QiReport> {
    is_qi_delay_with_tolerance(t, p, 0.0)
}

/// Full delay QI test; a quadruple fails only when its slack exceeds `tolerance`.
pub fn is_qi_delay_with_tolerance(
    t: &DelayMatrix,
    p: &DelayMatrix,
    tolerance: f64,
) -> Result<QiReport> {
    check_conformant(t.shape(), p.shape())?;
    if !(tolerance >= 0.0) {
        return Err(QiError::Parameter(format!("tolerance must be nonnegative, got {tolerance}")));
    }
    let (nu, ny) = t.shape();
    let mut violations = Vec::new();
    for k in 0..nu {
        for l in 0..ny {
            let target = t.get(k, l);
            if target == Delay::ZERO {
                continue;
            }
            for i in 0..ny {
                let head = t.get(k, i);
                for j in 0..nu {
                    let path = head + p.get(i, j) + t.get(j, l);
                    if let Some(slack) = target.excess_over(path) {
                        let fails = match slack {
                            Delay::Infinite => true,
                            Delay::Finite(s) => s > tolerance,
                        };
                        if fails {
                            violations.push(QiViolation { k, i, j, l, slack: Some(slack) });
                        }
                    }
                }
            }
        }
    }
    Ok(QiReport::from_violations(ConstraintKind::Delay, violations))
}

/// Outcome of [`triangle_holds`]; `witness` is the first 0-based `(k, m, l)`
/// with `t[k][l] > t[k][m] + t[m][l]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TriangleCheck {
    pub holds: bool,
    pub witness: Option<(usize, usize, usize)>,
}

pub fn triangle_holds(t: &DelayMatrix) -> Result<TriangleCheck> {
    let (r, c) = t.shape();
    if r != c {
        return Err(QiError::Dimension(format!("triangle test needs a square matrix, got {r}x{c}")));
    }
    for k in 0..r {
        for m in 0..r {
            for l in 0..r {
                if t.get(k, l) > t.get(k, m) + t.get(m, l) {
                    return Ok(TriangleCheck { holds: false, witness: Some((k, m, l)) });
                }
            }
        }
    }
    Ok(TriangleCheck { holds: true, witness: None })
}

/// Reduced delay test `p[i][j] >= t[i][j]` for `n` subsystems.
///
/// Only valid when `t` is a metric: it must satisfy the triangle inequality
/// and have zero self-delays. Otherwise the call is refused. Each failing pair
/// is reported as the quadruple `(i, i, j, j)`.
pub fn is_qi_delay_reduced(t: &DelayMatrix, p: &DelayMatrix) -> Result<QiReport> {
    let (n, c) = t.shape();
    if n != c || p.shape() != (n, n) {
        return Err(QiError::Dimension(format!(
            "reduced test needs square matrices of equal size, got {:?} and {:?}",
            t.shape(),
            p.shape()
        )));
    }
    if let Some((k, m, l)) = triangle_holds(t)?.witness {
        return Err(QiError::TriangleInequality { k: k + 1, m: m + 1, l: l + 1 });
    }
    if let Some(d) = (0..n).find(|&d| t.get(d, d) != Delay::ZERO) {
        return Err(QiError::NonzeroSelfDelay { index: d + 1 });
    }
    let mut violations = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if let Some(slack) = t.get(i, j).excess_over(p.get(i, j)) {
                if slack > Delay::ZERO {
                    violations.push(QiViolation { k: i, i, j, l: j, slack: Some(slack) });
                }
            }
        }
    }
    Ok(QiReport::from_violations(ConstraintKind::Delay, violations))
}

/// Sparsity QI test by quadruple enumeration.
pub fn is_qi_sparsity(k_pat: &BinaryPattern, g_pat: &BinaryPattern) -> Result<QiReport> {
    check_conformant(k_pat.shape(), g_pat.shape())?;
    let (nu, ny) = k_pat.shape();
    let mut violations = Vec::new();
    for k in 0..nu {
        for l in 0..ny {
            if k_pat.get(k, l) {
                continue;
            }
            for i in 0..ny {
                if !k_pat.get(k, i) {
                    continue;
                }
                for j in 0..nu {
                    if g_pat.get(i, j) && k_pat.get(j, l) {
                        violations.push(QiViolation { k, i, j, l, slack: None });
                    }
                }
            }
        }
    }
    Ok(QiReport::from_violations(ConstraintKind::Sparsity, violations))
}

/// Sparsity QI verdict via the matrix identity `K + K G K = K`.
pub fn is_qi_sparsity_fast(k_pat: &BinaryPattern, g_pat: &BinaryPattern) -> Result<bool> {
    check_conformant(k_pat.shape(), g_pat.shape())?;
    let kgk = k_pat.try_mul(g_pat)?.try_mul(k_pat)?;
    Ok(kgk.le(k_pat))
}
