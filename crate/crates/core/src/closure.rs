//! Closest quadratically invariant sparsity superset.
//!
//! Iterates `Z₀ = K`, `Z_{m+1} = Z_m + Z_m G Z_m` over the binary semiring.
//! The iterate `Z_m` equals `Σ_{s < 2^m} K(GK)^s`, and every power beyond
//! `n - 1` (with `n = min(n_u, n_y)`) is dominated by lower ones, so the
//! sequence is stationary after `⌈log₂ n⌉` steps. The fixed point is the
//! unique sparsest QI pattern containing `K`.

use serde::Serialize;

use crate::error::{QiError, Result};
use crate::pattern::BinaryPattern;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosureTrace {
    /// `Z₀ ..= Z_{m*}`.
    #[serde(skip)]
    pub iterates: Vec<BinaryPattern>,
    /// Number of steps `m*` before the first repeated iterate.
    pub iterations_used: usize,
    /// 0-based `(k, l)` with `Z*[k][l] = 1` and `K[k][l] = 0`, row-major.
    #[serde(skip)]
    pub added_links: Vec<(usize, usize)>,
}

/// `⌈log₂ n⌉` for `n ≥ 1`.
pub fn ceil_log2(n: usize) -> usize {
    assert!(n >= 1, "ceil_log2 of zero");
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

fn check_conformant(k: &BinaryPattern, g: &BinaryPattern) -> Result<()> {
    if k.rows() != g.cols() || k.cols() != g.rows() {
        return Err(QiError::Dimension(format!(
            "controller {:?} and plant {:?} are not conformant",
            k.shape(),
            g.shape()
        )));
    }
    Ok(())
}

/// Sparsest QI pattern `Z* ≥ K`, with the iterate trace.
pub fn closest_superset(k: &BinaryPattern, g: &BinaryPattern) -> Result<(BinaryPattern, ClosureTrace)> {
    check_conformant(k, g)?;
    let bound = ceil_log2(k.rows().min(k.cols()));
    let mut iterates = vec![k.clone()];
    loop {
        let z = iterates.last().expect("nonempty");
        let next = z + &(&(z * g) * z);
        if next == *z {
            break;
        }
        iterates.push(next);
        if iterates.len() > bound + 1 {
            return Err(QiError::Internal(format!(
                "closure still changing after {} steps, bound is {bound}",
                iterates.len() - 1
            )));
        }
    }
    let iterations_used = iterates.len() - 1;
    let z_star = iterates.last().expect("nonempty").clone();
    let added_links = z_star.ones_missing_from(k);
    Ok((z_star, ClosureTrace { iterates, iterations_used, added_links }))
}

/// `Σ_{s=0}^{terms-1} K(GK)^s`.
fn power_sum(k: &BinaryPattern, g: &BinaryPattern, terms: usize) -> BinaryPattern {
    let gk = g * k;
    let mut term = k.clone();
    let mut sum = BinaryPattern::zeros(k.rows(), k.cols());
    for s in 0..terms {
        sum = &sum + &term;
        if s + 1 < terms {
            term = &term * &gk;
        }
    }
    sum
}

/// Explicit sum `Σ_{s=0}^{2^m - 1} K(GK)^s`, equal to the `m`-th iterate.
pub fn term_expansion(k: &BinaryPattern, g: &BinaryPattern, m: u32) -> Result<BinaryPattern> {
    check_conformant(k, g)?;
    let terms = 1usize
        .checked_shl(m)
        .filter(|&t| t != 0)
        .ok_or_else(|| QiError::Parameter(format!("2^{m} terms overflow")))?;
    Ok(power_sum(k, g, terms))
}

/// `Σ_{s=0}^{n-1} K(GK)^s` with `n = min(n_u, n_y)`; dominates every `K(GK)^r`.
pub fn minimal_term_count(k: &BinaryPattern, g: &BinaryPattern) -> Result<BinaryPattern> {
    check_conformant(k, g)?;
    Ok(power_sum(k, g, k.rows().min(k.cols())))
}
