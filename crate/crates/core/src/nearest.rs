//! Nearest quadratically invariant delay constraints.
//!
//! Given propagation delays `p` and desired transmission delays `t̃`, find
//! QI transmission delays `t ≥ 0` closest to `t̃`:
//!
//! * `superset` (`t ≤ t̃`) has an entrywise-largest solution, computed by a
//!   (min,+) closure that is optimal in every norm;
//! * the 1- and ∞-norm problems are linear programs solved by [`solve_lp`];
//! * the 2-norm problem is a Euclidean projection onto the QI polyhedron,
//!   computed by Dykstra's cyclic projections.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::closure::ceil_log2;
use crate::delay::{Delay, DelayMatrix};
use crate::error::{QiError, Result};
use crate::lp::{solve_lp, LpConstraint, LpInstance, Relation};
use crate::qi::is_qi_delay_with_tolerance;

/// Default feasibility tolerance; overridable from the environment.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Set,
    Subset,
    Superset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    One,
    Two,
    Inf,
}

impl Norm {
    /// `‖v‖` in this norm.
    pub fn apply(self, v: impl IntoIterator<Item = f64>) -> f64 {
        let it = v.into_iter();
        match self {
            Norm::One => it.map(f64::abs).sum(),
            Norm::Two => it.map(|x| x * x).sum::<f64>().sqrt(),
            Norm::Inf => it.map(f64::abs).fold(0.0, f64::max),
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Norm::One => "1",
            Norm::Two => "2",
            Norm::Inf => "inf",
        })
    }
}

impl FromStr for Norm {
    type Err = QiError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" | "one" => Ok(Norm::One),
            "2" | "two" => Ok(Norm::Two),
            "inf" | "infinity" => Ok(Norm::Inf),
            _ => Err(QiError::Parameter(format!("unknown norm {s:?}"))),
        }
    }
}

impl Serialize for Norm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for Mode {
    type Err = QiError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "set" => Ok(Mode::Set),
            "subset" => Ok(Mode::Subset),
            "superset" => Ok(Mode::Superset),
            _ => Err(QiError::Parameter(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NearestQuery {
    pub mode: Mode,
    pub norm: Norm,
    /// Minimize the 1-norm among ∞-norm optima (ignored for other norms).
    pub tiebreak_secondary_one_norm: bool,
    pub tolerance: f64,
}

impl NearestQuery {
    pub fn new(mode: Mode, norm: Norm) -> Self {
        Self { mode, norm, tiebreak_secondary_one_norm: false, tolerance: DEFAULT_TOLERANCE }
    }

    pub fn with_tiebreak(mut self, on: bool) -> Self {
        self.tiebreak_secondary_one_norm = on;
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance <= 1e-2) {
            return Err(QiError::Parameter(format!(
                "tolerance must lie in (0, 1e-2], got {}",
                self.tolerance
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    Minplus,
    Simplex,
    Dykstra,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// LP multipliers, one per row of the instance that was solved.
    Duals(Vec<f64>),
    /// Projection multipliers (one per halfspace) and the stationarity
    /// residual `max |(t* − t̃) − Σ μ_h a_h|`.
    Projection { multipliers: Vec<f64>, stationarity_residual: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NearestResult {
    pub t_out: DelayMatrix,
    /// `t_out − t̃`; `-inf` where an infinite target became finite.
    #[serde(serialize_with = "serialize_extended_rows")]
    pub delta: Vec<Vec<f64>>,
    #[serde(serialize_with = "serialize_extended")]
    pub objective: f64,
    pub mode: Mode,
    pub norm: Norm,
    pub solver: Solver,
    /// Closure steps, simplex pivots, or projection sweeps.
    pub iterations: usize,
    pub certificate: Option<Certificate>,
}

fn extended_value(v: f64) -> serde_json::Value {
    if v.is_finite() {
        serde_json::json!(v)
    } else if v > 0.0 {
        serde_json::json!("inf")
    } else {
        serde_json::json!("-inf")
    }
}

fn serialize_extended<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    extended_value(*v).serialize(s)
}

fn serialize_extended_rows<S: Serializer>(
    rows: &[Vec<f64>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<Vec<serde_json::Value>> =
        rows.iter().map(|r| r.iter().map(|&x| extended_value(x)).collect()).collect();
    v.serialize(s)
}

fn check_conformant(t: &DelayMatrix, p: &DelayMatrix) -> Result<()> {
    if t.rows() != p.cols() || t.cols() != p.rows() {
        return Err(QiError::Dimension(format!(
            "transmission delays {:?} and propagation delays {:?} are not conformant",
            t.shape(),
            p.shape()
        )));
    }
    Ok(())
}

/// Entrywise `t_out − t̃` over the extended reals (`∞ − ∞ = 0`).
fn delta_of(t_out: &DelayMatrix, ttilde: &DelayMatrix) -> Vec<Vec<f64>> {
    (0..t_out.rows())
        .map(|r| {
            (0..t_out.cols())
                .map(|c| match (t_out.get(r, c), ttilde.get(r, c)) {
                    (Delay::Finite(a), Delay::Finite(b)) => a - b,
                    (Delay::Infinite, Delay::Infinite) => 0.0,
                    (Delay::Finite(_), Delay::Infinite) => f64::NEG_INFINITY,
                    (Delay::Infinite, Delay::Finite(_)) => f64::INFINITY,
                })
                .collect()
        })
        .collect()
}

/// Largest QI delays `t ≤ t̃`, by the (min,+) closure
/// `T_{m+1} = min(T_m, T_m ⊗ p ⊗ T_m)`.
///
/// Each entry ends up as the fastest route from measurement to input through
/// any chain of transmissions and propagations. Infinite entries are allowed
/// in both inputs. The objective is reported in the 1-norm.
pub fn minplus_superset(ttilde: &DelayMatrix, p: &DelayMatrix) -> Result<NearestResult> {
    check_conformant(ttilde, p)?;
    let bound = ceil_log2(ttilde.rows().min(ttilde.cols())) + 1;
    let mut current = ttilde.clone();
    let mut steps = 0;
    loop {
        let through = current.min_plus(p)?.min_plus(&current)?;
        let next = current.min_entrywise(&through)?;
        steps += 1;
        if next == current {
            break;
        }
        current = next;
        if steps > bound {
            return Err(QiError::Internal(format!(
                "(min,+) closure still changing after {steps} steps, bound is {bound}"
            )));
        }
    }
    let delta = delta_of(&current, ttilde);
    let objective = Norm::One.apply(delta.iter().flatten().copied());
    Ok(NearestResult {
        t_out: current,
        delta,
        objective,
        mode: Mode::Superset,
        norm: Norm::One,
        solver: Solver::Minplus,
        iterations: steps,
        certificate: None,
    })
}

/// QI rows `t[k][i] + t[j][l] − t[k][l] ≥ −p[i][j]` for every finite
/// `p[i][j]`, in `(k, l, i, j)` order. Variable `k * n_y + l` is `t[k][l]`.
pub(crate) fn qi_rows(p: &DelayMatrix, nu: usize, ny: usize) -> Vec<LpConstraint> {
    let var = |r: usize, c: usize| r * ny + c;
    let mut rows = Vec::new();
    for k in 0..nu {
        for l in 0..ny {
            for i in 0..ny {
                for j in 0..nu {
                    if let Delay::Finite(pij) = p.get(i, j) {
                        rows.push(LpConstraint::new(
                            [(var(k, i), 1.0), (var(j, l), 1.0), (var(k, l), -1.0)],
                            Relation::Ge,
                            -pij,
                        ));
                    }
                }
            }
        }
    }
    rows
}

fn finite_target(ttilde: &DelayMatrix) -> Result<Vec<f64>> {
    ttilde.to_finite_vec().ok_or_else(|| {
        QiError::UnsupportedInput(
            "infinite transmission delays are not supported by the optimization modes; \
             map them to a finite scale first or use the (min,+) superset"
                .into(),
        )
    })
}

fn push_mode_rows(lp: &mut LpInstance, target: &[f64], mode: Mode) {
    let relation = match mode {
        Mode::Set => return,
        Mode::Subset => Relation::Ge,
        Mode::Superset => Relation::Le,
    };
    for (v, &tv) in target.iter().enumerate() {
        lp.constraints.push(LpConstraint::new([(v, 1.0)], relation, tv));
    }
}

/// Linear program for the 1- or ∞-norm problem.
///
/// Variables are the `n_u·n_y` delays followed by one deviation bound per
/// cell (1-norm) or a single global bound (∞-norm). Rows are: QI rows for
/// finite `p`, then deviation rows, then the mode's `t ≥ t̃` or `t ≤ t̃` rows.
pub fn build_lp(ttilde: &DelayMatrix, p: &DelayMatrix, query: &NearestQuery) -> Result<LpInstance> {
    check_conformant(ttilde, p)?;
    let target = finite_target(ttilde)?;
    let (nu, ny) = ttilde.shape();
    let cells = nu * ny;
    let mut lp = match query.norm {
        Norm::One => {
            let mut lp = LpInstance::new(2 * cells);
            lp.objective[cells..].fill(1.0);
            lp.constraints = qi_rows(p, nu, ny);
            for v in 0..cells {
                let s = cells + v;
                lp.constraints.push(LpConstraint::new([(s, 1.0), (v, -1.0)], Relation::Ge, -target[v]));
                lp.constraints.push(LpConstraint::new([(s, 1.0), (v, 1.0)], Relation::Ge, target[v]));
            }
            lp
        }
        Norm::Inf => {
            let u = cells;
            let mut lp = LpInstance::new(cells + 1);
            lp.objective[u] = 1.0;
            lp.constraints = qi_rows(p, nu, ny);
            for v in 0..cells {
                lp.constraints.push(LpConstraint::new([(u, 1.0), (v, -1.0)], Relation::Ge, -target[v]));
                lp.constraints.push(LpConstraint::new([(u, 1.0), (v, 1.0)], Relation::Ge, target[v]));
            }
            lp
        }
        Norm::Two => {
            return Err(QiError::Parameter("the 2-norm problem is not a linear program".into()))
        }
    };
    push_mode_rows(&mut lp, &target, query.mode);
    Ok(lp)
}

fn to_delay_matrix(values: &[f64], rows: usize, cols: usize) -> Result<DelayMatrix> {
    // round off solver noise below zero
    let entries = values.iter().map(|&v| Delay::Finite(v.max(0.0))).collect();
    DelayMatrix::new(rows, cols, entries)
}

/// Solves the nearest-QI problem for `query`.
pub fn solve_closest(ttilde: &DelayMatrix, p: &DelayMatrix, query: &NearestQuery) -> Result<NearestResult> {
    query.validate()?;
    check_conformant(ttilde, p)?;
    let target = finite_target(ttilde)?;
    let (nu, ny) = ttilde.shape();
    let cells = nu * ny;

    let (values, solver, iterations, certificate) = match query.norm {
        Norm::One | Norm::Inf => {
            let lp = build_lp(ttilde, p, query)?;
            let mut sol = solve_lp(&lp).map_err(lp_failure)?;
            let mut pivots = sol.pivots;
            if query.norm == Norm::Inf && query.tiebreak_secondary_one_norm {
                let cap = sol.x[cells] + query.tolerance;
                let mut second = build_lp(ttilde, p, &NearestQuery { norm: Norm::One, ..*query })?;
                for (v, &tv) in target.iter().enumerate() {
                    second.constraints.push(LpConstraint::new([(v, 1.0)], Relation::Le, tv + cap));
                    second.constraints.push(LpConstraint::new([(v, 1.0)], Relation::Ge, tv - cap));
                }
                sol = solve_lp(&second).map_err(lp_failure)?;
                pivots += sol.pivots;
            }
            (sol.x[..cells].to_vec(), Solver::Simplex, pivots, Some(Certificate::Duals(sol.duals)))
        }
        Norm::Two => {
            let halfspaces = projection_halfspaces(p, &target, nu, ny, query.mode);
            let proj = dykstra_projection(&target, &halfspaces, query.tolerance)?;
            let cert = Certificate::Projection {
                stationarity_residual: proj.stationarity_residual,
                multipliers: proj.multipliers,
            };
            (proj.x, Solver::Dykstra, proj.sweeps, Some(cert))
        }
    };

    let t_out = to_delay_matrix(&values, nu, ny)?;
    let report = is_qi_delay_with_tolerance(&t_out, p, query.tolerance)?;
    if !report.is_qi {
        return Err(QiError::Internal(format!(
            "solver output violates {} QI conditions beyond tolerance {}",
            report.violations.len(),
            query.tolerance
        )));
    }
    let out = t_out.to_finite_vec().expect("finite");
    for (v, (&o, &tv)) in out.iter().zip(&target).enumerate() {
        let bad = match query.mode {
            Mode::Set => false,
            Mode::Subset => o < tv - query.tolerance,
            Mode::Superset => o > tv + query.tolerance,
        };
        if bad {
            return Err(QiError::Internal(format!("mode bound violated at variable {v}")));
        }
    }
    let delta = delta_of(&t_out, ttilde);
    let objective = query.norm.apply(delta.iter().flatten().copied());
    Ok(NearestResult {
        t_out,
        delta,
        objective,
        mode: query.mode,
        norm: query.norm,
        solver,
        iterations,
        certificate,
    })
}

fn lp_failure(e: QiError) -> QiError {
    match e {
        // t = a large constant is always feasible, so these signal a bug
        QiError::Infeasible | QiError::Unbounded => {
            QiError::Internal(format!("nearest-QI linear program reported: {e}"))
        }
        other => other,
    }
}

/// A halfspace `a·x ≥ b` with sparse `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
}

impl Halfspace {
    fn from_row(row: LpConstraint) -> Self {
        let sign = match row.relation {
            Relation::Ge => 1.0,
            Relation::Le => -1.0,
        };
        Self {
            coeffs: row.coeffs.into_iter().map(|(v, c)| (v, sign * c)).collect(),
            rhs: sign * row.rhs,
        }
    }

    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(v, c)| c * x[v]).sum()
    }
}

/// Halfspaces of the 2-norm problem: QI rows, `t ≥ 0`, then mode bounds.
pub fn projection_halfspaces(
    p: &DelayMatrix,
    target: &[f64],
    nu: usize,
    ny: usize,
    mode: Mode,
) -> Vec<Halfspace> {
    let mut rows = qi_rows(p, nu, ny);
    for v in 0..nu * ny {
        rows.push(LpConstraint::new([(v, 1.0)], Relation::Ge, 0.0));
    }
    let mut lp = LpInstance::new(nu * ny);
    push_mode_rows(&mut lp, target, mode);
    rows.extend(lp.constraints);
    rows.into_iter().map(Halfspace::from_row).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub x: Vec<f64>,
    pub multipliers: Vec<f64>,
    pub sweeps: usize,
    pub stationarity_residual: f64,
    pub max_violation: f64,
}

/// Sweeps stop once no coordinate moves by this much.
pub const DYKSTRA_STEP_TOL: f64 = 1e-9;
pub const DYKSTRA_SWEEP_CAP: usize = 10_000;

/// Euclidean projection of `start` onto the intersection of `halfspaces` by
/// Dykstra's algorithm.
///
/// For halfspaces each correction term is a nonnegative multiple `μ_h` of the
/// normal `a_h`, so only the scalars are stored. At the limit the `μ_h` are
/// the KKT multipliers of the projection.
pub fn dykstra_projection(start: &[f64], halfspaces: &[Halfspace], tolerance: f64) -> Result<Projection> {
    let mut x = start.to_vec();
    let mut mu = vec![0.0; halfspaces.len()];
    let norms: Vec<f64> = halfspaces
        .iter()
        .map(|h| h.coeffs.iter().map(|(_, c)| c * c).sum())
        .collect();
    let mut sweeps = 0;
    let mut last_change;
    loop {
        sweeps += 1;
        let before = x.clone();
        for (h, half) in halfspaces.iter().enumerate() {
            let gap = (half.rhs - half.activity(&x)) / norms[h];
            let updated = (mu[h] + gap).max(0.0);
            let step = updated - mu[h];
            if step != 0.0 {
                for &(v, c) in &half.coeffs {
                    x[v] += step * c;
                }
                mu[h] = updated;
            }
        }
        last_change = x.iter().zip(&before).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let violation = max_violation(&x, halfspaces);
        if last_change < DYKSTRA_STEP_TOL && violation <= tolerance {
            return Ok(Projection {
                stationarity_residual: stationarity(start, &x, halfspaces, &mu),
                max_violation: violation,
                x,
                multipliers: mu,
                sweeps,
            });
        }
        if sweeps >= DYKSTRA_SWEEP_CAP {
            return Err(QiError::NonConvergence {
                sweeps,
                last_change,
                max_violation: violation,
            });
        }
    }
}

fn max_violation(x: &[f64], halfspaces: &[Halfspace]) -> f64 {
    halfspaces
        .iter()
        .map(|h| (h.rhs - h.activity(x)).max(0.0))
        .fold(0.0, f64::max)
}

fn stationarity(start: &[f64], x: &[f64], halfspaces: &[Halfspace], mu: &[f64]) -> f64 {
    let mut r: Vec<f64> = x.iter().zip(start).map(|(a, b)| a - b).collect();
    for (h, &m) in halfspaces.iter().zip(mu) {
        for &(v, c) in &h.coeffs {
            r[v] -= m * c;
        }
    }
    r.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn example_p() -> DelayMatrix {
        DelayMatrix::from_rows(&[
            [9.0, 0.0, 8.0, 4.0],
            [0.0, 7.0, 8.0, 7.0],
            [3.0, 5.0, 7.0, 1.0],
            [5.0, 5.0, 3.0, 1.0],
        ])
        .unwrap()
    }

    pub(crate) fn example_t() -> DelayMatrix {
        DelayMatrix::from_rows(&[
            [2.0, 3.0, 6.0, 5.0],
            [5.0, 2.0, 2.0, 9.0],
            [9.0, 8.0, 0.0, 0.0],
            [7.0, 9.0, 8.0, 5.0],
        ])
        .unwrap()
    }

    #[test]
    fn minplus_matches_table_superset() {
        let r = minplus_superset(&example_t(), &example_p()).unwrap();
        let mut want = vec![vec![0.0; 4]; 4];
        want[0][2] = -2.0;
        want[1][0] = -1.0;
        want[1][3] = -2.0;
        want[2][0] = -4.0;
        want[2][1] = -2.0;
        assert_eq!(r.delta, want);
        assert_eq!(r.objective, 11.0);
        assert!(r.iterations <= 3);
    }

    #[test]
    fn minplus_without_paths_is_identity() {
        let p = DelayMatrix::filled(4, 4, Delay::Infinite).unwrap();
        let r = minplus_superset(&example_t(), &p).unwrap();
        assert_eq!(r.t_out, example_t());
        assert_eq!(r.objective, 0.0);
    }

    #[test]
    fn minplus_fixed_point_on_qi_input() {
        let first = minplus_superset(&example_t(), &example_p()).unwrap();
        let again = minplus_superset(&first.t_out, &example_p()).unwrap();
        assert_eq!(again.t_out, first.t_out);
        assert_eq!(again.iterations, 1);
    }

    #[test]
    fn minplus_handles_infinite_targets() {
        let t = DelayMatrix::from_rows(&[[0.0, f64::INFINITY], [0.0, 0.0]]).unwrap();
        let p = DelayMatrix::from_rows(&[[0.0, 3.0], [3.0, 0.0]]).unwrap();
        let r = minplus_superset(&t, &p).unwrap();
        // t[0][0] + p[0][1] + t[1][1]
        assert_eq!(r.t_out.get(0, 1), Delay::Finite(3.0));
        assert_eq!(r.delta[0][1], f64::NEG_INFINITY);
        assert_eq!(r.objective, f64::INFINITY);
    }

    #[test]
    fn lp_row_counts() {
        let q = NearestQuery::new(Mode::Set, Norm::One);
        let lp = build_lp(&example_t(), &example_p(), &q).unwrap();
        let qi = lp.constraints.len() - 2 * 16;
        assert_eq!(qi, 256);
        assert_eq!(lp.num_vars, 32);

        let p = DelayMatrix::from_rows(&[[f64::INFINITY, 1.0], [f64::INFINITY, f64::INFINITY]]).unwrap();
        let t = DelayMatrix::from_rows(&[[0.0, 1.0], [2.0, 0.0]]).unwrap();
        let lp = build_lp(&t, &p, &NearestQuery::new(Mode::Set, Norm::Inf)).unwrap();
        assert_eq!(lp.constraints.len() - 2 * 4, 4);
        assert_eq!(lp.num_vars, 5);

        let set = build_lp(&example_t(), &example_p(), &q).unwrap();
        let sup = build_lp(&example_t(), &example_p(), &NearestQuery::new(Mode::Superset, Norm::One)).unwrap();
        assert_eq!(sup.constraints.len() - set.constraints.len(), 16);
        assert!(sup.constraints[set.constraints.len()..].iter().all(|r| r.relation == Relation::Le));
    }

    #[test]
    fn lp_rejects_infinite_target() {
        let t = DelayMatrix::from_rows(&[[0.0, f64::INFINITY], [0.0, 0.0]]).unwrap();
        let p = DelayMatrix::filled(2, 2, Delay::ZERO).unwrap();
        let q = NearestQuery::new(Mode::Set, Norm::One);
        assert!(matches!(build_lp(&t, &p, &q), Err(QiError::UnsupportedInput(_))));
        assert!(matches!(solve_closest(&t, &p, &q), Err(QiError::UnsupportedInput(_))));
    }

    #[test]
    fn tolerance_range() {
        let q = NearestQuery::new(Mode::Set, Norm::One).with_tolerance(0.5);
        assert!(solve_closest(&example_t(), &example_p(), &q).is_err());
    }

    #[test]
    fn superset_lp_equals_closure() {
        let q = NearestQuery::new(Mode::Superset, Norm::One);
        let r = solve_closest(&example_t(), &example_p(), &q).unwrap();
        assert!((r.objective - 11.0).abs() < 1e-6);
        let closure = minplus_superset(&example_t(), &example_p()).unwrap();
        for (a, b) in r.delta.iter().flatten().zip(closure.delta.iter().flatten()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn inf_norm_tiebreak_recovers_closure() {
        let q = NearestQuery::new(Mode::Superset, Norm::Inf).with_tiebreak(true);
        let r = solve_closest(&example_t(), &example_p(), &q).unwrap();
        assert!((r.objective - 4.0).abs() < 1e-6);
        let closure = minplus_superset(&example_t(), &example_p()).unwrap();
        for (a, b) in r.delta.iter().flatten().zip(closure.delta.iter().flatten()) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn dykstra_projects_onto_single_halfspace() {
        let h = vec![Halfspace { coeffs: vec![(0, 1.0), (1, 1.0)], rhs: 2.0 }];
        let p = dykstra_projection(&[0.0, 0.0], &h, 1e-12).unwrap();
        assert!((p.x[0] - 1.0).abs() < 1e-12 && (p.x[1] - 1.0).abs() < 1e-12);
        assert!((p.multipliers[0] - 1.0).abs() < 1e-12);
        assert!(p.stationarity_residual < 1e-12);
    }

    #[test]
    fn two_norm_subset_objective() {
        let q = NearestQuery::new(Mode::Subset, Norm::Two);
        let r = solve_closest(&example_t(), &example_p(), &q).unwrap();
        assert!((r.objective - 11f64.sqrt()).abs() < 1e-6, "{}", r.objective);
        assert_eq!(r.solver, Solver::Dykstra);
    }
}
