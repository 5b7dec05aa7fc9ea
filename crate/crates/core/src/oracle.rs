//! Brute-force references for cross-checking the fast paths.
//!
//! Nothing here calls into the closure, heuristic or floating-point LP code:
//! QI is checked by its own quadruple loop, patterns are enumerated
//! exhaustively, and linear programs are solved in exact rational arithmetic.

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{QiError, Result};
use crate::lp::{LpInstance, Relation};
use crate::pattern::BinaryPattern;

/// Largest number of free cells the exhaustive searches will enumerate.
pub const SEARCH_CAP: usize = 20;

fn satisfies_qi(k: &BinaryPattern, g: &BinaryPattern) -> bool {
    let (nu, ny) = k.shape();
    for a in 0..nu {
        for l in 0..ny {
            for i in 0..ny {
                for j in 0..nu {
                    if k.get(a, i) && g.get(i, j) && k.get(j, l) && !k.get(a, l) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn check_shapes(k: &BinaryPattern, g: &BinaryPattern) -> Result<()> {
    if k.rows() != g.cols() || k.cols() != g.rows() {
        return Err(QiError::Dimension(format!(
            "controller {:?} and plant {:?} are not conformant",
            k.shape(),
            g.shape()
        )));
    }
    Ok(())
}

/// Masks over `bits` bits with exactly `ones` bits set, in increasing order.
fn masks_with_popcount(bits: usize, ones: usize) -> impl Iterator<Item = u32> {
    let limit = 1u64 << bits;
    let mut next = if ones == 0 { Some(0u64) } else { Some((1u64 << ones) - 1) };
    std::iter::from_fn(move || {
        let current = next?;
        if current >= limit {
            return None;
        }
        next = if current == 0 {
            None
        } else {
            // Gosper's hack
            let c = current & current.wrapping_neg();
            let r = current + c;
            Some((((r ^ current) >> 2) / c) | r)
        };
        Some(current as u32)
    })
}

fn with_cells(base: &BinaryPattern, cells: &[(usize, usize)], mask: u32, value: bool) -> BinaryPattern {
    let mut z = base.clone();
    for (b, &(r, c)) in cells.iter().enumerate() {
        if mask >> b & 1 == 1 {
            z.set(r, c, value);
        }
    }
    z
}

/// Sparsest QI `Z ≥ K`, found by trying every way of switching on zero
/// cells in order of how many are switched on.
///
/// Fails if the optimum is not unique, which would contradict the
/// uniqueness of the closure.
pub fn exhaustive_minimal_superset(k: &BinaryPattern, g: &BinaryPattern) -> Result<BinaryPattern> {
    check_shapes(k, g)?;
    let free: Vec<(usize, usize)> = BinaryPattern::ones(k.rows(), k.cols()).ones_missing_from(k);
    if free.len() > SEARCH_CAP {
        return Err(QiError::SearchCap { free_bits: free.len(), cap: SEARCH_CAP });
    }
    for added in 0..=free.len() {
        let mut found: Option<BinaryPattern> = None;
        for mask in masks_with_popcount(free.len(), added) {
            let z = with_cells(k, &free, mask, true);
            if satisfies_qi(&z, g) {
                if found.is_some() {
                    return Err(QiError::Internal(format!(
                        "two sparsest QI supersets with {added} added links"
                    )));
                }
                found = Some(z);
            }
        }
        if let Some(z) = found {
            return Ok(z);
        }
    }
    Err(QiError::Internal("the all-ones pattern should be QI".into()))
}

/// Densest QI `Z ≤ K` and its Hamming distance to `K`. Ties go to the
/// lexicographically smallest row-major entry vector.
pub fn exhaustive_maximal_subset(k: &BinaryPattern, g: &BinaryPattern) -> Result<(BinaryPattern, usize)> {
    check_shapes(k, g)?;
    let ones: Vec<(usize, usize)> = k.ones_missing_from(&BinaryPattern::zeros(k.rows(), k.cols()));
    if ones.len() > SEARCH_CAP {
        return Err(QiError::SearchCap { free_bits: ones.len(), cap: SEARCH_CAP });
    }
    for removed in 0..=ones.len() {
        let best = masks_with_popcount(ones.len(), removed)
            .map(|mask| with_cells(k, &ones, mask, false))
            .filter(|z| satisfies_qi(z, g))
            .min_by(|a, b| a.entries().cmp(b.entries()));
        if let Some(z) = best {
            return Ok((z, removed));
        }
    }
    Err(QiError::Internal("the zero pattern should be QI".into()))
}

/// Exact-arithmetic counterpart of [`LpInstance`].
#[derive(Debug, Clone, PartialEq)]
pub struct RationalLp {
    pub num_vars: usize,
    pub objective: Vec<BigRational>,
    pub constraints: Vec<RationalRow>,
    pub var_lower_bounds: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RationalRow {
    pub coeffs: Vec<(usize, BigRational)>,
    pub relation: Relation,
    pub rhs: BigRational,
}

fn exact(v: f64) -> Result<BigRational> {
    BigRational::from_float(v).ok_or_else(|| QiError::Parameter(format!("{v} has no exact rational value")))
}

impl RationalLp {
    /// Converts every float exactly (each `f64` is a dyadic rational).
    pub fn from_lp(lp: &LpInstance) -> Result<Self> {
        lp.validate()?;
        Ok(Self {
            num_vars: lp.num_vars,
            objective: lp.objective.iter().map(|&c| exact(c)).collect::<Result<_>>()?,
            constraints: lp
                .constraints
                .iter()
                .map(|row| {
                    Ok(RationalRow {
                        coeffs: row
                            .coeffs
                            .iter()
                            .map(|&(v, c)| Ok((v, exact(c)?)))
                            .collect::<Result<_>>()?,
                        relation: row.relation,
                        rhs: exact(row.rhs)?,
                    })
                })
                .collect::<Result<_>>()?,
            var_lower_bounds: lp.var_lower_bounds.iter().map(|&b| exact(b)).collect::<Result<_>>()?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RationalSolution {
    pub objective: BigRational,
    pub x: Vec<BigRational>,
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Exact simplex (two phases, Bland's rule) over the rationals.
///
/// Standard form: `x = lb + y`, `y ≥ 0`; each row gets a slack, rows are
/// negated to make the right-hand side nonnegative, and every row gets an
/// artificial variable for phase one.
pub fn solve_rational_lp(lp: &RationalLp) -> Result<RationalSolution> {
    let n = lp.num_vars;
    let m = lp.constraints.len();
    let slack0 = n;
    let art0 = n + m;
    let cols = n + 2 * m;

    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut rhs: Vec<BigRational> = Vec::with_capacity(m);
    for (r, row) in lp.constraints.iter().enumerate() {
        let mut a = vec![BigRational::zero(); cols];
        let mut b = row.rhs.clone();
        for (v, c) in &row.coeffs {
            if *v >= n {
                return Err(QiError::Parameter(format!("row {r} references variable {v}")));
            }
            a[*v] += c;
            b -= c * &lp.var_lower_bounds[*v];
        }
        a[slack0 + r] = match row.relation {
            Relation::Ge => -BigRational::one(),
            Relation::Le => BigRational::one(),
        };
        if b.is_negative() {
            for x in a.iter_mut() {
                *x = -x.clone();
            }
            b = -b;
        }
        a[art0 + r] = BigRational::one();
        rows.push(a);
        rhs.push(b);
    }
    let mut basis: Vec<usize> = (art0..art0 + m).collect();

    // phase one: minimize the sum of artificials
    let mut phase1 = vec![BigRational::zero(); cols];
    for c in art0..cols {
        phase1[c] = BigRational::one();
    }
    let mut reduced = phase1.clone();
    let mut value = BigRational::zero();
    for r in 0..m {
        for c in 0..cols {
            if !rows[r][c].is_zero() {
                reduced[c] -= &rows[r][c];
            }
        }
        value -= &rhs[r];
    }
    bland(&mut rows, &mut rhs, &mut basis, &mut reduced, &mut value, cols)?;
    if !value.is_zero() {
        return Err(QiError::Infeasible);
    }
    for r in 0..m {
        if basis[r] >= art0 {
            if let Some(c) = (0..art0).find(|&c| !rows[r][c].is_zero()) {
                let mut scratch = vec![BigRational::zero(); cols];
                let mut sv = BigRational::zero();
                pivot(&mut rows, &mut rhs, &mut basis, &mut scratch, &mut sv, r, c);
            }
        }
    }

    // phase two over the structural and slack columns
    let mut reduced = vec![BigRational::zero(); cols];
    reduced[..n].clone_from_slice(&lp.objective);
    let mut value = BigRational::zero();
    for r in 0..m {
        let b = basis[r];
        if b < n && !lp.objective[b].is_zero() {
            let cb = lp.objective[b].clone();
            for c in 0..cols {
                if !rows[r][c].is_zero() {
                    reduced[c] -= &cb * &rows[r][c];
                }
            }
            value -= &cb * &rhs[r];
        }
    }
    bland(&mut rows, &mut rhs, &mut basis, &mut reduced, &mut value, art0)?;

    let mut x = lp.var_lower_bounds.clone();
    for r in 0..m {
        if basis[r] < n {
            x[basis[r]] += &rhs[r];
        }
    }
    let objective = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(RationalSolution { objective, x })
}

fn bland(
    rows: &mut [Vec<BigRational>],
    rhs: &mut [BigRational],
    basis: &mut [usize],
    reduced: &mut [BigRational],
    value: &mut BigRational,
    entering_limit: usize,
) -> Result<()> {
    loop {
        let Some(enter) = (0..entering_limit).find(|&c| reduced[c].is_negative()) else {
            return Ok(());
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for r in 0..rows.len() {
            if !rows[r][enter].is_positive() {
                continue;
            }
            let ratio = &rhs[r] / &rows[r][enter];
            let better = match &leave {
                None => true,
                Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        let Some((r, _)) = leave else {
            return Err(QiError::Unbounded);
        };
        pivot(rows, rhs, basis, reduced, value, r, enter);
    }
}

fn pivot(
    rows: &mut [Vec<BigRational>],
    rhs: &mut [BigRational],
    basis: &mut [usize],
    reduced: &mut [BigRational],
    value: &mut BigRational,
    pr: usize,
    pc: usize,
) {
    let inv = rows[pr][pc].recip();
    for x in rows[pr].iter_mut() {
        if !x.is_zero() {
            *x *= &inv;
        }
    }
    rhs[pr] *= &inv;
    let nz: Vec<usize> = (0..rows[pr].len()).filter(|&c| !rows[pr][c].is_zero()).collect();
    let pivot_row = rows[pr].clone();
    let pivot_rhs = rhs[pr].clone();
    for r in 0..rows.len() {
        if r == pr || rows[r][pc].is_zero() {
            continue;
        }
        let f = rows[r][pc].clone();
        for &c in &nz {
            let delta = &f * &pivot_row[c];
            rows[r][c] -= delta;
        }
        rhs[r] -= &f * &pivot_rhs;
    }
    if !reduced[pc].is_zero() {
        let f = reduced[pc].clone();
        for &c in &nz {
            let delta = &f * &pivot_row[c];
            reduced[c] -= delta;
        }
        *value -= &f * &pivot_rhs;
    }
    basis[pr] = pc;
}
