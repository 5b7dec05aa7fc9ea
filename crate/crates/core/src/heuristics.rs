//! Heuristics for a close quadratically invariant sparsity *subset*.
//!
//! Unlike the superset, the sparsest-loss subset has no known polynomial
//! algorithm. Both heuristics walk the QI violations `(k, i, j, l)` of the
//! current pattern and break each one by clearing either `K[k][i]` or
//! `K[j][l]`; they differ in the guide used to pick which:
//!
//! * [`Method::Weights`] clears `(k, i)` when `w[k][i] ≤ w[j][l]`, where
//!   `w = K G K` counts 3-hop paths in ordinary arithmetic;
//! * [`Method::RelaxedLp`] maps the patterns to delays in `{0, R}`, solves
//!   the subset LP relaxed to `0 ≤ t ≤ R`, and clears `(k, i)` when
//!   `t*[k][i] ≥ t*[j][l]`.
//!
//! Every step removes one link, so at most `nnz(K)` steps are taken.

use serde::Serialize;

use crate::delay::{sparsity_to_delay, Delay, DelayMatrix};
use crate::error::{QiError, Result};
use crate::lp::{solve_lp, LpConstraint, LpInstance, Relation};
use crate::nearest::qi_rows;
use crate::pattern::BinaryPattern;
use crate::qi::{is_qi_sparsity, QiViolation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    RelaxedLp,
    Weights,
}

/// How often the guide (weights or LP solution) is recomputed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    PerDisconnection,
    PerPass,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeuristicConfig {
    pub method: Method,
    pub schedule: Schedule,
    /// Delay scale for the relaxed LP.
    pub scale: f64,
}

impl HeuristicConfig {
    pub fn new(method: Method) -> Self {
        Self { method, schedule: Schedule::PerDisconnection, scale: 1.0 }
    }

    pub fn with_schedule(mut self, schedule: Schedule) -> Self {
        self.schedule = schedule;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsetResult {
    #[serde(rename = "result")]
    pub z: BinaryPattern,
    /// Cleared links in removal order, 0-based `(k, l)`.
    #[serde(serialize_with = "one_based_pairs")]
    pub removed_links: Vec<(usize, usize)>,
    pub hamming_distance: usize,
    /// Number of times the guide was computed.
    pub guide_updates: usize,
}

pub(crate) fn one_based_pairs<S: serde::Serializer>(
    pairs: &[(usize, usize)],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<[usize; 2]> = pairs.iter().map(|&(a, b)| [a + 1, b + 1]).collect();
    v.serialize(s)
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

/// `w[k][l] = Σ_i Σ_j K[k][i] G[i][j] K[j][l]` as integer counts.
pub fn three_hop_weights(k: &BinaryPattern, g: &BinaryPattern) -> Result<Vec<Vec<u64>>> {
    check_conformant(k, g)?;
    let (nu, ny) = k.shape();
    // kg[k][j] = number of i with K[k][i] G[i][j]
    let mut kg = vec![vec![0u64; nu]; nu];
    for (row, kg_row) in kg.iter_mut().enumerate() {
        for i in (0..ny).filter(|&i| k.get(row, i)) {
            for (j, cell) in kg_row.iter_mut().enumerate() {
                *cell += u64::from(g.get(i, j));
            }
        }
    }
    let mut w = vec![vec![0u64; ny]; nu];
    for (row, w_row) in w.iter_mut().enumerate() {
        for j in 0..nu {
            let c = kg[row][j];
            if c == 0 {
                continue;
            }
            for (l, cell) in w_row.iter_mut().enumerate() {
                if k.get(j, l) {
                    *cell += c;
                }
            }
        }
    }
    Ok(w)
}

/// Which link of a violation to clear: `true` means `(k, i)`.
type Guide = Box<dyn Fn(&QiViolation) -> bool>;

fn weights_guide(k: &BinaryPattern, g: &BinaryPattern) -> Result<Guide> {
    let w = three_hop_weights(k, g)?;
    Ok(Box::new(move |v: &QiViolation| w[v.k][v.i] <= w[v.j][v.l]))
}

/// Solves `min Σ t` subject to QI, `t ≥ t̃` and `t ≤ R`, with `t̃`, `p`
/// the `{0, R}` images of `K`, `G`. Returns `t*` row-major.
pub fn relaxed_subset_delays(k: &BinaryPattern, g: &BinaryPattern, scale: f64) -> Result<Vec<f64>> {
    check_conformant(k, g)?;
    let target = sparsity_to_delay(k, scale)?.to_finite_vec().expect("finite");
    // rows with p = R are implied by the box, so only G = 1 rows are kept
    let p_entries = g
        .entries()
        .iter()
        .map(|&b| if b { Delay::ZERO } else { Delay::Infinite })
        .collect();
    let p = DelayMatrix::new(g.rows(), g.cols(), p_entries)?;
    let (nu, ny) = k.shape();
    let cells = nu * ny;
    let mut lp = LpInstance::new(cells);
    lp.objective.fill(1.0);
    lp.var_lower_bounds = target;
    lp.constraints = qi_rows(&p, nu, ny);
    for v in 0..cells {
        lp.constraints.push(LpConstraint::new([(v, 1.0)], Relation::Le, scale));
    }
    let sol = solve_lp(&lp).map_err(|e| match e {
        QiError::Infeasible | QiError::Unbounded => {
            QiError::Internal(format!("relaxed subset LP reported: {e}"))
        }
        other => other,
    })?;
    Ok(sol.x)
}

fn relaxed_lp_guide(k: &BinaryPattern, g: &BinaryPattern, scale: f64) -> Result<Guide> {
    let ny = k.cols();
    let t = relaxed_subset_delays(k, g, scale)?;
    Ok(Box::new(move |v: &QiViolation| t[v.k * ny + v.i] >= t[v.j * ny + v.l]))
}

fn still_violates(z: &BinaryPattern, v: &QiViolation) -> bool {
    z.get(v.k, v.i) && z.get(v.j, v.l) && !z.get(v.k, v.l)
}

fn run(
    k: &BinaryPattern,
    g: &BinaryPattern,
    schedule: Schedule,
    make_guide: impl Fn(&BinaryPattern) -> Result<Guide>,
) -> Result<SubsetResult> {
    check_conformant(k, g)?;
    let mut z = k.clone();
    let mut removed = Vec::new();
    let mut guide_updates = 0;
    loop {
        let report = is_qi_sparsity(&z, g)?;
        if report.is_qi {
            break;
        }
        let guide = make_guide(&z)?;
        guide_updates += 1;
        let batch = match schedule {
            Schedule::PerDisconnection => &report.violations[..1],
            Schedule::PerPass => &report.violations[..],
        };
        for v in batch {
            if !still_violates(&z, v) {
                continue;
            }
            let link = if guide(v) { (v.k, v.i) } else { (v.j, v.l) };
            z.set(link.0, link.1, false);
            removed.push(link);
        }
        if removed.len() > k.nnz() {
            return Err(QiError::Internal("removed more links than the pattern holds".into()));
        }
    }
    Ok(SubsetResult { hamming_distance: k.nnz() - z.nnz(), z, removed_links: removed, guide_updates })
}

/// Weight-guided disconnection.
pub fn subset_by_weights(k: &BinaryPattern, g: &BinaryPattern, cfg: &HeuristicConfig) -> Result<SubsetResult> {
    if cfg.method != Method::Weights {
        return Err(QiError::Parameter("configuration is not for the weights method".into()));
    }
    run(k, g, cfg.schedule, |z| weights_guide(z, g))
}

/// Relaxed-LP-guided disconnection.
pub fn subset_by_relaxed_lp(
    k: &BinaryPattern,
    g: &BinaryPattern,
    cfg: &HeuristicConfig,
) -> Result<SubsetResult> {
    if cfg.method != Method::RelaxedLp {
        return Err(QiError::Parameter("configuration is not for the relaxed LP method".into()));
    }
    if !(cfg.scale > 0.0) {
        return Err(QiError::Parameter(format!("scale must be positive, got {}", cfg.scale)));
    }
    let scale = cfg.scale;
    run(k, g, cfg.schedule, |z| relaxed_lp_guide(z, g, scale))
}

/// Dispatches on `cfg.method`.
pub fn close_subset(k: &BinaryPattern, g: &BinaryPattern, cfg: &HeuristicConfig) -> Result<SubsetResult> {
    match cfg.method {
        Method::Weights => subset_by_weights(k, g, cfg),
        Method::RelaxedLp => subset_by_relaxed_lp(k, g, cfg),
    }
}
