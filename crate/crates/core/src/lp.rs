//! Linear programs in inequality form and a dense two-phase primal simplex.
//!
//! Problems are `minimize c·x` subject to rows `a·x {≥,≤} b` and per-variable
//! lower bounds. The solver pivots with Bland's rule (smallest eligible
//! index for both the entering and leaving variable), so it cannot cycle.

use serde::Serialize;

use crate::error::{QiError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<=")]
    Le,
}

/// One row `Σ coeffs · x  relation  rhs`; coefficients are sparse `(var, value)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpConstraint {
    pub coeffs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

impl LpConstraint {
    /// Builds a row, merging repeated variables and dropping zero coefficients.
    pub fn new(terms: impl IntoIterator<Item = (usize, f64)>, relation: Relation, rhs: f64) -> Self {
        let mut coeffs: Vec<(usize, f64)> = Vec::new();
        for (var, value) in terms {
            match coeffs.iter_mut().find(|(v, _)| *v == var) {
                Some((_, c)) => *c += value,
                None => coeffs.push((var, value)),
            }
        }
        coeffs.retain(|&(_, c)| c != 0.0);
        coeffs.sort_by_key(|&(v, _)| v);
        Self { coeffs, relation, rhs }
    }

    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(v, c)| c * x[v]).sum()
    }

    /// Amount by which `x` violates the row (0 when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let a = self.activity(x);
        match self.relation {
            Relation::Ge => (self.rhs - a).max(0.0),
            Relation::Le => (a - self.rhs).max(0.0),
        }
    }
}

/// `minimize objective·x` subject to `constraints` and `x ≥ var_lower_bounds`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpInstance {
    pub num_vars: usize,
    pub objective: Vec<f64>,
    pub constraints: Vec<LpConstraint>,
    pub var_lower_bounds: Vec<f64>,
}

impl LpInstance {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            objective: vec![0.0; num_vars],
            constraints: Vec::new(),
            var_lower_bounds: vec![0.0; num_vars],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.objective.len() != self.num_vars || self.var_lower_bounds.len() != self.num_vars {
            return Err(QiError::Dimension(format!(
                "LP with {} variables has {} objective coefficients and {} bounds",
                self.num_vars,
                self.objective.len(),
                self.var_lower_bounds.len()
            )));
        }
        for (r, row) in self.constraints.iter().enumerate() {
            if !row.rhs.is_finite() {
                return Err(QiError::Parameter(format!("row {r} has non-finite rhs")));
            }
            if let Some(&(v, _)) = row.coeffs.iter().find(|&&(v, c)| v >= self.num_vars || !c.is_finite()) {
                return Err(QiError::Parameter(format!("row {r} references invalid variable {v}")));
            }
        }
        if self.var_lower_bounds.iter().any(|b| !b.is_finite()) {
            return Err(QiError::Parameter("lower bounds must be finite".into()));
        }
        Ok(())
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest row or bound violation at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let rows = self.constraints.iter().map(|r| r.violation(x));
        let bounds = self.var_lower_bounds.iter().zip(x).map(|(lb, v)| (lb - v).max(0.0));
        rows.chain(bounds).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// One multiplier per constraint row; nonnegative for `≥` rows and
    /// nonpositive for `≤` rows at optimality.
    pub duals: Vec<f64>,
    pub pivots: usize,
}

const PIVOT_EPS: f64 = 1e-9;
const COST_EPS: f64 = 1e-9;
const PIVOT_CAP: usize = 200_000;

struct Tableau {
    width: usize,
    data: Vec<f64>,
    basis: Vec<usize>,
    pivots: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> f64 {
        self.data[r * self.width + self.width - 1]
    }

    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.width + c]
    }

    fn pivot(&mut self, pr: usize, pc: usize, cost: &mut [f64]) {
        let w = self.width;
        let inv = 1.0 / self.at(pr, pc);
        let row: Vec<f64> = self.data[pr * w..(pr + 1) * w].iter().map(|v| v * inv).collect();
        let nz: Vec<usize> = (0..w).filter(|&c| row[c] != 0.0).collect();
        self.data[pr * w..(pr + 1) * w].copy_from_slice(&row);
        self.data[pr * w + pc] = 1.0;
        let m = self.basis.len();
        for r in 0..m {
            if r == pr {
                continue;
            }
            let f = self.data[r * w + pc];
            if f == 0.0 {
                continue;
            }
            let dst = &mut self.data[r * w..(r + 1) * w];
            for &c in &nz {
                dst[c] -= f * row[c];
            }
            dst[pc] = 0.0;
        }
        let f = cost[pc];
        if f != 0.0 {
            for &c in &nz {
                cost[c] -= f * row[c];
            }
            cost[pc] = 0.0;
        }
        self.basis[pr] = pc;
        self.pivots += 1;
    }

    /// Runs Bland pivots on `cost` (reduced costs, last entry = −objective)
    /// over the columns allowed by `eligible`.
    fn optimize(&mut self, cost: &mut [f64], eligible: impl Fn(usize) -> bool) -> Result<()> {
        let ncols = self.width - 1;
        loop {
            let Some(pc) = (0..ncols).find(|&c| eligible(c) && cost[c] < -COST_EPS) else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.basis.len() {
                let a = self.at(r, pc);
                if a <= PIVOT_EPS {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((br, best)) => {
                        if ratio < best - 1e-12
                            || (ratio <= best + 1e-12 && self.basis[r] < self.basis[br])
                        {
                            Some((r, ratio))
                        } else {
                            Some((br, best))
                        }
                    }
                };
            }
            let Some((pr, _)) = leave else {
                return Err(QiError::Unbounded);
            };
            self.pivot(pr, pc, cost);
            if self.pivots > PIVOT_CAP {
                return Err(QiError::Internal(format!("simplex exceeded {PIVOT_CAP} pivots")));
            }
        }
    }
}

/// Solves `lp` with two-phase primal simplex and Bland's rule.
pub fn solve_lp(lp: &LpInstance) -> Result<LpSolution> {
    lp.validate()?;
    let n = lp.num_vars;
    let m = lp.constraints.len();

    // shift x = lb + x', flip rows so every rhs is nonnegative
    let mut flipped = vec![false; m];
    let mut needs_artificial = Vec::new();
    for (r, row) in lp.constraints.iter().enumerate() {
        let shift: f64 = row.coeffs.iter().map(|&(v, c)| c * lp.var_lower_bounds[v]).sum();
        let rhs = row.rhs - shift;
        flipped[r] = rhs < 0.0;
        let slack_sign = match row.relation {
            Relation::Ge => -1.0,
            Relation::Le => 1.0,
        };
        let slack_after = if flipped[r] { -slack_sign } else { slack_sign };
        if slack_after < 0.0 {
            needs_artificial.push(r);
        }
    }
    let art_start = n + m;
    let ncols = art_start + needs_artificial.len();
    let width = ncols + 1;
    let mut data = vec![0.0; m * width];
    let mut basis = vec![0; m];
    for (r, row) in lp.constraints.iter().enumerate() {
        let sign = if flipped[r] { -1.0 } else { 1.0 };
        let shift: f64 = row.coeffs.iter().map(|&(v, c)| c * lp.var_lower_bounds[v]).sum();
        let base = r * width;
        for &(v, c) in &row.coeffs {
            data[base + v] += sign * c;
        }
        let slack_sign = match row.relation {
            Relation::Ge => -1.0,
            Relation::Le => 1.0,
        };
        data[base + n + r] = sign * slack_sign;
        data[base + ncols] = sign * (row.rhs - shift);
        basis[r] = n + r;
    }
    for (a, &r) in needs_artificial.iter().enumerate() {
        data[r * width + art_start + a] = 1.0;
        basis[r] = art_start + a;
    }
    let mut tab = Tableau { width, data, basis, pivots: 0 };

    if !needs_artificial.is_empty() {
        let mut cost = vec![0.0; width];
        for c in art_start..ncols {
            cost[c] = 1.0;
        }
        for &r in &needs_artificial {
            for c in 0..width {
                cost[c] -= tab.at(r, c);
            }
        }
        tab.optimize(&mut cost, |_| true)?;
        let infeasibility = -cost[ncols];
        if infeasibility > 1e-7 {
            return Err(QiError::Infeasible);
        }
        // drive zero-valued artificials out of the basis where possible
        for r in 0..m {
            if tab.basis[r] >= art_start {
                if let Some(c) = (0..art_start).find(|&c| tab.at(r, c).abs() > PIVOT_EPS) {
                    let mut dummy = vec![0.0; width];
                    tab.pivot(r, c, &mut dummy);
                }
            }
        }
    }

    let mut cost = vec![0.0; width];
    cost[..n].copy_from_slice(&lp.objective);
    for r in 0..m {
        let b = tab.basis[r];
        let cb = if b < n { lp.objective[b] } else { 0.0 };
        if cb != 0.0 {
            for c in 0..width {
                cost[c] -= cb * tab.at(r, c);
            }
        }
    }
    tab.optimize(&mut cost, |c| c < art_start)?;

    let mut x = lp.var_lower_bounds.clone();
    for r in 0..m {
        let b = tab.basis[r];
        if b < n {
            x[b] += tab.rhs(r);
        }
    }
    let duals = lp
        .constraints
        .iter()
        .enumerate()
        .map(|(r, row)| match row.relation {
            Relation::Ge => cost[n + r],
            Relation::Le => -cost[n + r],
        })
        .collect();
    Ok(LpSolution { objective: lp.objective_value(&x), x, duals, pivots: tab.pivots })
}
