//! Independent reference solvers for small problems.
//!
//! Both work on dense rows `a·z ≤ b` plus the box `[0, 1]^n` and share no
//! code with the production solver.

use crate::error::{Error, Result};

/// Minimizes `c·z` by enumerating every basic feasible point.
///
/// Walks all `n`-subsets of the constraints (rows followed by the `2n` box
/// faces) depth-first, pruning subsets that are already linearly dependent.
/// Returns the minimizing vertex and its objective.
pub fn vertex_enumeration_minimum(
    rows: &[Vec<f64>],
    rhs: &[f64],
    c: &[f64],
    budget: usize,
) -> Result<(Vec<f64>, f64)> {
    let n = c.len();
    let mut all: Vec<(Vec<f64>, f64)> = rows.iter().cloned().zip(rhs.iter().copied()).collect();
    for i in 0..n {
        let mut up = vec![0.0; n];
        up[i] = 1.0;
        all.push((up, 1.0));
        let mut down = vec![0.0; n];
        down[i] = -1.0;
        all.push((down, 0.0));
    }
    let mut search = Search {
        all: &all,
        c,
        n,
        chosen: Vec::with_capacity(n),
        ortho: Vec::with_capacity(n),
        best: None,
        visited: 0,
        budget,
    };
    search.descend(0)?;
    search
        .best
        .ok_or_else(|| Error::Solver("no feasible vertex found".into()))
}

struct Search<'a> {
    all: &'a [(Vec<f64>, f64)],
    c: &'a [f64],
    n: usize,
    chosen: Vec<usize>,
    ortho: Vec<Vec<f64>>,
    best: Option<(Vec<f64>, f64)>,
    visited: usize,
    budget: usize,
}

impl Search<'_> {
    fn descend(&mut self, start: usize) -> Result<()> {
        if self.chosen.len() == self.n {
            self.evaluate();
            return Ok(());
        }
        let remaining = self.n - self.chosen.len();
        for k in start..self.all.len() {
            if self.all.len() - k < remaining {
                break;
            }
            self.visited += 1;
            if self.visited > self.budget {
                return Err(Error::OracleTimeout(format!(
                    "vertex enumeration exceeded {} nodes",
                    self.budget
                )));
            }
            // Gram-Schmidt residual against the chosen normals
            let mut v = self.all[k].0.clone();
            for q in &self.ortho {
                let d: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(q).for_each(|(a, b)| *a -= d * b);
            }
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if norm < 1e-9 {
                continue;
            }
            v.iter_mut().for_each(|a| *a /= norm);
            self.ortho.push(v);
            self.chosen.push(k);
            self.descend(k + 1)?;
            self.chosen.pop();
            self.ortho.pop();
        }
        Ok(())
    }

    fn evaluate(&mut self) {
        let n = self.n;
        let mut m: Vec<Vec<f64>> = self
            .chosen
            .iter()
            .map(|&k| {
                let mut row = self.all[k].0.clone();
                row.push(self.all[k].1);
                row
            })
            .collect();
        let Some(z) = gauss_solve(&mut m, n) else {
            return;
        };
        let feasible = self
            .all
            .iter()
            .all(|(a, b)| a.iter().zip(&z).map(|(x, y)| x * y).sum::<f64>() <= b + 1e-9);
        if !feasible {
            return;
        }
        let value: f64 = self.c.iter().zip(&z).map(|(c, z)| c * z).sum();
        if self.best.as_ref().map_or(true, |(_, b)| value < *b) {
            self.best = Some((z, value));
        }
    }
}

/// Solves the augmented `n × (n+1)` system with partial pivoting.
fn gauss_solve(m: &mut [Vec<f64>], n: usize) -> Option<Vec<f64>> {
    for col in 0..n {
        let pivot = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[pivot][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, pivot);
        for r in 0..n {
            if r != col {
                let f = m[r][col] / m[col][col];
                if f != 0.0 {
                    let pivot = m[col].clone();
                    for (x, p) in m[r][col..=n].iter_mut().zip(&pivot[col..=n]) {
                        *x -= f * p;
                    }
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}

/// Projects `y` onto `{a·z ≤ b} ∩ [0,1]^n` with Dykstra's algorithm.
///
/// Stops once a full cycle moves no coordinate by more than `tol` and the
/// iterate is feasible within `tol`.
pub fn dykstra_projection(
    rows: &[Vec<f64>],
    rhs: &[f64],
    y: &[f64],
    tol: f64,
    budget: usize,
) -> Result<Vec<f64>> {
    let n = y.len();
    let mut x = y.to_vec();
    let mut increments: Vec<Vec<f64>> = vec![vec![0.0; n]; rows.len() + 1];
    for _ in 0..budget {
        let before = x.clone();
        for (k, (a, &b)) in rows.iter().zip(rhs).enumerate() {
            let shifted: Vec<f64> = x.iter().zip(&increments[k]).map(|(x, p)| x + p).collect();
            let projected = halfspace(a, b, &shifted);
            increments[k] = shifted.iter().zip(&projected).map(|(s, p)| s - p).collect();
            x = projected;
        }
        let last = rows.len();
        let shifted: Vec<f64> = x.iter().zip(&increments[last]).map(|(x, p)| x + p).collect();
        let projected: Vec<f64> = shifted.iter().map(|v| v.clamp(0.0, 1.0)).collect();
        increments[last] = shifted.iter().zip(&projected).map(|(s, p)| s - p).collect();
        x = projected;

        let moved = x
            .iter()
            .zip(&before)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        let violation = rows
            .iter()
            .zip(rhs)
            .map(|(a, b)| a.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>() - b)
            .fold(0.0f64, f64::max);
        if moved <= tol && violation <= tol {
            return Ok(x);
        }
    }
    Err(Error::OracleTimeout(format!(
        "Dykstra projection did not settle within {budget} cycles"
    )))
}

fn halfspace(a: &[f64], b: f64, x: &[f64]) -> Vec<f64> {
    let ax: f64 = a.iter().zip(x).map(|(p, q)| p * q).sum();
    if ax <= b {
        return x.to_vec();
    }
    let aa: f64 = a.iter().map(|v| v * v).sum();
    let step = (ax - b) / aa;
    x.iter().zip(a).map(|(x, a)| x - step * a).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_enumeration_on_a_triangle() {
        // maximize z0 + z1 with z0 + z1 ≤ 1.2
        let (z, v) = vertex_enumeration_minimum(&[vec![1.0, 1.0]], &[1.2], &[-1.0, -1.0], 1000).unwrap();
        assert!((v + 1.2).abs() < 1e-12);
        assert!((z[0] + z[1] - 1.2).abs() < 1e-12);
        assert!(matches!(
            vertex_enumeration_minimum(&[vec![1.0, 1.0]], &[1.2], &[-1.0, -1.0], 2),
            Err(Error::OracleTimeout(_))
        ));
    }

    #[test]
    fn dykstra_matches_closed_form() {
        let z = dykstra_projection(&[vec![1.0, -1.0]], &[0.2], &[1.0, 0.0], 1e-12, 10_000).unwrap();
        assert!((z[0] - 0.6).abs() < 1e-10 && (z[1] - 0.4).abs() < 1e-10);
    }
}
