//! Granular approximation as a structured LP/QP.
//!
//! With `T = T_{L,φ}` every granular-representability constraint becomes
//! linear in `α = φ(Â)`:
//!
//! ```text
//! binary:      α_u − α_v + 1 ≥ R_φ(u,v)
//! multi-class: α_u + α_v ≤ 1 + M_φ(u,v),   M_φ = 1 − R_φ across classes
//! ```
//!
//! Both are projections in disguise. The QP losses project the target onto
//! the feasible polytope; the LP losses are solved through exact
//! regularization (`min c·α + ε/2 ‖α − t‖²`, which for small enough `ε`
//! returns the optimum closest to the target) and certified with a
//! Lagrangian lower bound.

mod oracle;
mod projection;

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::connectives::TripletSpec;
use crate::error::{Error, Result};
use crate::relations::RelationMatrix;

use projection::{Item, Objective, ProjectionResult, Row};

pub use oracle::{dykstra_projection, vertex_enumeration_minimum};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Loss {
    /// Absolute error, reported as `Σ |t − α|`.
    Mae,
    /// Pinball loss `p·(t − α)⁺ + (1 − p)·(α − t)⁺`.
    Quantile { p: f64 },
    /// Squared error `Σ (t − α)²`.
    Mse,
}

impl Loss {
    pub fn quantile(p: f64) -> Result<Self> {
        if p > 0.0 && p < 1.0 {
            Ok(Loss::Quantile { p })
        } else {
            Err(Error::InvalidParameter(format!(
                "quantile p must lie in (0, 1), got {p}"
            )))
        }
    }

    pub fn is_linear(&self) -> bool {
        !matches!(self, Loss::Mse)
    }

    /// Loss of one estimate against its target.
    pub fn value(&self, target: f64, estimate: f64) -> f64 {
        let d = target - estimate;
        match *self {
            Loss::Mae => d.abs(),
            Loss::Quantile { p } => {
                if d > 0.0 {
                    p * d
                } else {
                    (p - 1.0) * d
                }
            }
            Loss::Mse => d * d,
        }
    }

    /// Linear cost of `α_u` equivalent to the loss for a crisp target.
    fn linear_cost(&self, target: f64) -> f64 {
        let (below, above) = match *self {
            Loss::Mae => (1.0, 1.0),
            Loss::Quantile { p } => (p, 1.0 - p),
            Loss::Mse => unreachable!("squared error has no linear form"),
        };
        if target >= 0.5 {
            -below
        } else {
            above
        }
    }
}

impl fmt::Display for Loss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Loss::Mae => f.write_str("mae"),
            Loss::Quantile { p } => write!(f, "quantile:{p}"),
            Loss::Mse => f.write_str("mse"),
        }
    }
}

impl FromStr for Loss {
    type Err = Error;

    /// Parses `mae`, `mse` or `quantile:<p>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "mae" => Ok(Loss::Mae),
            "mse" => Ok(Loss::Mse),
            _ => {
                let p = s
                    .strip_prefix("quantile:")
                    .and_then(|p| p.parse::<f64>().ok())
                    .ok_or_else(|| {
                        Error::InvalidParameter(format!(
                            "unknown loss `{s}` (expected mae, mse or quantile:<p>)"
                        ))
                    })?;
                Loss::quantile(p)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintKind {
    /// `α_u − α_v + 1 ≥ rhs`, with `rhs = R_φ(u,v)`.
    BinaryDifference,
    /// `α_u + α_v ≤ 1 + rhs`, with `rhs = M_φ(u,v)`.
    MulticlassPairsum,
}

impl fmt::Display for ConstraintKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstraintKind::BinaryDifference => "binary_difference",
            ConstraintKind::MulticlassPairsum => "multiclass_pairsum",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub u: usize,
    pub v: usize,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApproximationProblem {
    pub kind: ConstraintKind,
    pub loss: Loss,
    /// Target in φ-space: `φ(Ā(u))` for binary problems, all ones otherwise.
    pub target: Vec<f64>,
    /// Non-vacuous constraints only.
    pub constraints: Vec<Constraint>,
    /// Every ordered pair `(u, v)` kept by the nearest-neighbour reduction.
    pub retained_pairs: Vec<(usize, usize)>,
}

impl ApproximationProblem {
    pub fn len(&self) -> usize {
        self.target.len()
    }

    pub fn is_empty(&self) -> bool {
        self.target.is_empty()
    }

    fn rows(&self) -> Vec<Row> {
        self.constraints
            .iter()
            .map(|c| match self.kind {
                // α_v − α_u ≤ 1 − R_φ(u,v)
                ConstraintKind::BinaryDifference => Row {
                    a: c.v as u32,
                    b: c.u as u32,
                    sa: 1.0,
                    sb: -1.0,
                    rhs: 1.0 - c.rhs,
                },
                ConstraintKind::MulticlassPairsum => Row {
                    a: c.u as u32,
                    b: c.v as u32,
                    sa: 1.0,
                    sb: 1.0,
                    rhs: 1.0 + c.rhs,
                },
            })
            .collect()
    }

    /// Value of the loss at `alpha`.
    pub fn objective(&self, alpha: &[f64]) -> f64 {
        self.target
            .iter()
            .zip(alpha)
            .map(|(&t, &a)| self.loss.value(t, a))
            .sum()
    }

    /// Largest violation of a constraint or of the box `[0, 1]`.
    pub fn feasibility_residual(&self, alpha: &[f64]) -> f64 {
        projection::max_violation(&self.rows(), alpha)
    }

    /// Plain-text dump: a `#` header, then one `u v rhs` line per constraint.
    pub fn write_text<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(
            out,
            "# kind={} loss={} variables={} constraints={} retained_pairs={}",
            self.kind,
            self.loss,
            self.len(),
            self.constraints.len(),
            self.retained_pairs.len()
        )?;
        for c in &self.constraints {
            writeln!(out, "{} {} {}", c.u, c.v, c.rhs)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolverStats {
    /// Active-set iterations, summed over regularization steps.
    pub iterations: usize,
    pub regularization_steps: usize,
    /// Objective gap against the dual certificate, in loss units.
    pub duality_gap: f64,
    /// Number of constraints active at the solution.
    pub active_constraints: usize,
    pub wall_time_secs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    /// Optimal `α` (φ-space degrees).
    pub alpha: Vec<f64>,
    pub objective: f64,
    pub feasibility_residual: f64,
    pub stats: SolverStats,
}

#[derive(Clone, Debug, Default)]
pub struct SolverOptions {
    /// Constraints (indices into `constraints`) to start the active set from.
    pub initial_active: Option<Vec<usize>>,
}

/// For each `u`, the `M = round(nn·n)` references with the largest `R(u,v)`,
/// ties broken by ascending index.
pub fn nearest_neighbours(matrix: &RelationMatrix, nn: f64) -> Result<Vec<Vec<usize>>> {
    if !(nn > 0.0 && nn <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "nn must lie in (0, 1], got {nn}"
        )));
    }
    let n = matrix.cols();
    let mut m = (nn * n as f64).round() as usize;
    if m < 1 {
        log::warn!("nn = {nn} keeps no neighbour out of {n}; using 1");
        m = 1;
    }
    let m = m.min(n);
    Ok((0..matrix.rows())
        .map(|u| {
            let mut idx: Vec<usize> = (0..n).collect();
            if m < n {
                let row = matrix.row(u);
                idx.sort_by(|&x, &y| row[y].total_cmp(&row[x]).then(x.cmp(&y)));
                idx.truncate(m);
                idx.sort_unstable();
            }
            idx
        })
        .collect())
}

fn check_square(labels: usize, matrix: &RelationMatrix) -> Result<()> {
    if !matrix.is_square() {
        return Err(Error::SchemaMismatch("training relation must be square".into()));
    }
    if labels != matrix.rows() {
        return Err(Error::LengthMismatch {
            expected: matrix.rows(),
            actual: labels,
        });
    }
    if labels == 0 {
        return Err(Error::EmptyDataset);
    }
    Ok(())
}

pub fn assemble_binary(
    labels: &[bool],
    matrix: &RelationMatrix,
    spec: &TripletSpec,
    loss: Loss,
    nn: f64,
) -> Result<ApproximationProblem> {
    check_square(labels.len(), matrix)?;
    let neighbours = nearest_neighbours(matrix, nn)?;
    let mut constraints = Vec::new();
    let mut retained_pairs = Vec::new();
    for (u, near) in neighbours.iter().enumerate() {
        for &v in near {
            retained_pairs.push((u, v));
            let r = spec.phi(matrix.get(u, v));
            if u != v && r > 0.0 {
                constraints.push(Constraint { u, v, rhs: r });
            }
        }
    }
    let target = labels
        .iter()
        .map(|&l| spec.phi(if l { 1.0 } else { 0.0 }))
        .collect();
    Ok(ApproximationProblem {
        kind: ConstraintKind::BinaryDifference,
        loss,
        target,
        constraints,
        retained_pairs,
    })
}

pub fn assemble_multiclass(
    class_labels: &[usize],
    matrix: &RelationMatrix,
    spec: &TripletSpec,
    loss: Loss,
    nn: f64,
) -> Result<ApproximationProblem> {
    check_square(class_labels.len(), matrix)?;
    let loss = match loss {
        Loss::Quantile { p: 0.5 } => Loss::Mae,
        Loss::Quantile { p } => {
            return Err(Error::InvalidParameter(format!(
                "multi-class problems support mae and mse only (got quantile p = {p})"
            )))
        }
        l => l,
    };
    let first = class_labels[0];
    if class_labels.iter().all(|&c| c == first) {
        log::warn!("all training instances share one class; no constraints");
    }
    let neighbours = nearest_neighbours(matrix, nn)?;
    let mut retained_pairs = Vec::new();
    // unordered pair -> tightest bound
    let mut bounds: std::collections::BTreeMap<(usize, usize), f64> = Default::default();
    for (u, near) in neighbours.iter().enumerate() {
        for &v in near {
            retained_pairs.push((u, v));
            if u == v || class_labels[u] == class_labels[v] {
                continue;
            }
            let m = 1.0 - spec.phi(matrix.get(u, v));
            if m >= 1.0 {
                continue;
            }
            let key = (u.min(v), u.max(v));
            let e = bounds.entry(key).or_insert(m);
            *e = e.min(m);
        }
    }
    let constraints = bounds
        .into_iter()
        .map(|((u, v), rhs)| Constraint { u, v, rhs })
        .collect();
    Ok(ApproximationProblem {
        kind: ConstraintKind::MulticlassPairsum,
        loss,
        target: vec![1.0; class_labels.len()],
        constraints,
        retained_pairs,
    })
}

const FEASIBILITY_TOL: f64 = 1e-12;

fn initial_items(problem: &ApproximationProblem, options: &SolverOptions) -> Result<Vec<Item>> {
    let Some(active) = &options.initial_active else {
        return Ok(Vec::new());
    };
    active
        .iter()
        .map(|&r| {
            if r < problem.constraints.len() {
                Ok(Item::Row(r))
            } else {
                Err(Error::IndexOutOfRange {
                    index: r,
                    len: problem.constraints.len(),
                })
            }
        })
        .collect()
}

pub fn solve(problem: &ApproximationProblem) -> Result<Solution> {
    if problem.loss.is_linear() {
        solve_lp(problem)
    } else {
        solve_qp(problem)
    }
}

pub fn solve_lp(problem: &ApproximationProblem) -> Result<Solution> {
    solve_lp_with(problem, &SolverOptions::default())
}

pub fn solve_qp(problem: &ApproximationProblem) -> Result<Solution> {
    solve_qp_with(problem, &SolverOptions::default())
}

/// Linear losses. Among optimal points, returns the one closest to the target.
pub fn solve_lp_with(problem: &ApproximationProblem, options: &SolverOptions) -> Result<Solution> {
    if !problem.loss.is_linear() {
        return Err(Error::InvalidParameter("solve_lp needs a linear loss".into()));
    }
    if problem.target.iter().any(|&t| t != 0.0 && t != 1.0) {
        return Err(Error::InvalidParameter("linear losses need crisp targets".into()));
    }
    let started = Instant::now();
    let rows = problem.rows();
    let c: Vec<f64> = problem
        .target
        .iter()
        .map(|&t| problem.loss.linear_cost(t))
        .collect();
    let constant = problem.objective(&vec![0.0; problem.len()]);
    let tol = 1e-9 * (1.0 + constant.abs());

    let mut initial = initial_items(problem, options)?;
    let mut best: Option<(ProjectionResult, f64)> = None;
    let mut steps = 0;
    let mut iterations = 0;
    for k in 0..=12 {
        let eps = 10f64.powi(-k);
        steps += 1;
        let obj = Objective {
            t: &problem.target,
            c: &c,
            scale: 1.0 / eps,
        };
        let res = projection::project(&rows, &obj, &initial, FEASIBILITY_TOL)?;
        iterations += res.iterations;
        let primal: f64 = c.iter().zip(&res.z).map(|(c, z)| c * z).sum();
        let lambda = projection::linear_multipliers(&rows, &res.structure, &c);
        let gap = (primal - projection::lagrangian_bound(&rows, &c, &lambda)).max(0.0);
        log::trace!("regularization ε = {eps:e}: gap {gap:e}");
        initial = res.active.clone();
        let done = gap <= tol;
        if best.as_ref().map_or(true, |(_, g)| gap < *g) {
            best = Some((res, gap));
        }
        if done {
            break;
        }
    }
    let (res, gap) = best.expect("at least one regularization step runs");
    if gap > tol {
        log::warn!("linear program solved with certified gap {gap:e}");
    }
    Ok(finish(problem, res, gap, steps, iterations, started))
}

/// Squared error: the projection of the target onto the feasible set.
pub fn solve_qp_with(problem: &ApproximationProblem, options: &SolverOptions) -> Result<Solution> {
    if problem.loss.is_linear() {
        return Err(Error::InvalidParameter("solve_qp needs the mse loss".into()));
    }
    let started = Instant::now();
    let rows = problem.rows();
    let zeros = vec![0.0; problem.len()];
    let obj = Objective {
        t: &problem.target,
        c: &zeros,
        scale: 0.0,
    };
    let initial = initial_items(problem, options)?;
    let res = projection::project(&rows, &obj, &initial, FEASIBILITY_TOL)?;
    let gap = 2.0 * projection_gap(&rows, &problem.target, &res);
    let iterations = res.iterations;
    Ok(finish(problem, res, gap, 1, iterations, started))
}

/// `P(z) − D(μ)` for the projection of `y` with multipliers from `res`.
fn projection_gap(rows: &[Row], y: &[f64], res: &ProjectionResult) -> f64 {
    let n = y.len();
    let mut at = vec![0.0; n];
    let mut dual_lin = 0.0;
    for (row, &m) in rows.iter().zip(&res.row_mult) {
        if m > 0.0 {
            at[row.a as usize] += m * row.sa;
            at[row.b as usize] += m * row.sb;
            dual_lin += m * (row.lhs(y) - row.rhs);
        }
    }
    for (i, &nu) in res.box_mult.iter().enumerate() {
        if nu > 0.0 {
            at[i] += nu;
            dual_lin += nu * (y[i] - 1.0);
        } else if nu < 0.0 {
            at[i] += nu;
            dual_lin += nu * y[i];
        }
    }
    let primal: f64 = 0.5 * res.z.iter().zip(y).map(|(z, y)| (z - y) * (z - y)).sum::<f64>();
    let dual = dual_lin - 0.5 * at.iter().map(|v| v * v).sum::<f64>();
    (primal - dual).max(0.0)
}

fn finish(
    problem: &ApproximationProblem,
    res: ProjectionResult,
    gap: f64,
    steps: usize,
    iterations: usize,
    started: Instant,
) -> Solution {
    Solution {
        objective: problem.objective(&res.z),
        feasibility_residual: res.max_violation,
        stats: SolverStats {
            iterations,
            regularization_steps: steps,
            duality_gap: gap,
            active_constraints: res.active.len(),
            wall_time_secs: started.elapsed().as_secs_f64(),
        },
        alpha: res.z,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Oracle {
    /// Minimum of the linear objective over all basic feasible points.
    VertexEnumeration,
    /// Dykstra alternating projection for the squared-error objective.
    LongProjection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub feasibility_residual: f64,
    pub objective: f64,
    pub oracle_objective: f64,
    /// `objective − oracle_objective`.
    pub gap: f64,
}

/// Node budget for vertex enumeration.
const VERTEX_BUDGET: usize = 20_000_000;
/// Cycle budget for Dykstra.
const DYKSTRA_BUDGET: usize = 2_000_000;

pub fn verify_solution(
    problem: &ApproximationProblem,
    solution: &Solution,
    oracle: Oracle,
) -> Result<VerificationReport> {
    if solution.alpha.len() != problem.len() {
        return Err(Error::LengthMismatch {
            expected: problem.len(),
            actual: solution.alpha.len(),
        });
    }
    let rows = problem.rows();
    let feasibility_residual = projection::max_violation(&rows, &solution.alpha);
    let objective = problem.objective(&solution.alpha);
    let oracle_objective = match oracle {
        Oracle::VertexEnumeration => {
            if !problem.loss.is_linear() {
                return Err(Error::InvalidParameter(
                    "vertex enumeration checks linear losses".into(),
                ));
            }
            if problem.len() > 8 {
                return Err(Error::InvalidParameter(
                    "vertex enumeration is limited to 8 variables".into(),
                ));
            }
            let c: Vec<f64> = problem
                .target
                .iter()
                .map(|&t| problem.loss.linear_cost(t))
                .collect();
            let (dense, rhs) = dense_rows(&rows, problem.len());
            let (_, min) = vertex_enumeration_minimum(&dense, &rhs, &c, VERTEX_BUDGET)?;
            let constant = problem.objective(&vec![0.0; problem.len()]);
            min + constant
        }
        Oracle::LongProjection => {
            if problem.loss.is_linear() {
                return Err(Error::InvalidParameter(
                    "long projection checks the squared-error loss".into(),
                ));
            }
            let (dense, rhs) = dense_rows(&rows, problem.len());
            let z = dykstra_projection(&dense, &rhs, &problem.target, 1e-10, DYKSTRA_BUDGET)?;
            problem.objective(&z)
        }
    };
    Ok(VerificationReport {
        feasibility_residual,
        objective,
        oracle_objective,
        gap: objective - oracle_objective,
    })
}

fn dense_rows(rows: &[Row], n: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut dense = Vec::with_capacity(rows.len());
    let mut rhs = Vec::with_capacity(rows.len());
    for r in rows {
        let mut a = vec![0.0; n];
        a[r.a as usize] += r.sa;
        a[r.b as usize] += r.sb;
        dense.push(a);
        rhs.push(r.rhs);
    }
    (dense, rhs)
}
