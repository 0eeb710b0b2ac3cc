//! How much accuracy and time the nearest-neighbour constraint reduction
//! trades against the full problem.

use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use super::preprocess::Preprocessor;
use crate::classifier::{self, FgacModel, FitConfig};
use crate::error::{Error, Result};
use crate::relations::SimilarityKind;
use crate::solver::Loss;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxRow {
    pub dataset: String,
    pub gamma: f64,
    pub nn: f64,
    pub loss: Loss,
    pub similarity: SimilarityKind,
    /// Mean over classes and instances of `|Â_k(u) − Â_k^{nn=1}(u)|`.
    pub mean_abs_difference: f64,
    /// Solver time, minimum over repeats.
    pub solve_secs: f64,
    /// Whole fit (relation, assembly, solve), minimum over repeats.
    pub fit_secs: f64,
    /// `solve_secs` relative to the nn = 1 run.
    pub time_ratio: f64,
}

fn timed_fit(
    table: &crate::table::InstanceTable,
    labels: &[usize],
    config: &FitConfig,
    repeats: usize,
) -> Result<(FgacModel, f64, f64)> {
    let mut best: Option<(FgacModel, f64, f64)> = None;
    for _ in 0..repeats.max(1) {
        let started = Instant::now();
        let model = classifier::fit(table, labels, config)?;
        let fit_secs = started.elapsed().as_secs_f64();
        let solve_secs = model.solver_stats.wall_time_secs;
        best = Some(match best {
            Some((m, s, f)) => (m, s.min(solve_secs), f.min(fit_secs)),
            None => (model, solve_secs, fit_secs),
        });
    }
    Ok(best.expect("at least one repeat"))
}

fn mean_abs_difference(a: &FgacModel, b: &FgacModel) -> f64 {
    let mut total = 0.0;
    let mut count = 0usize;
    for (x, y) in a.memberships.iter().zip(&b.memberships) {
        for (p, q) in x.iter().zip(y) {
            total += (p - q).abs();
            count += 1;
        }
    }
    total / count as f64
}

/// Fits every `(γ, loss, similarity, nn)` combination on the whole dataset
/// and compares each fit with the exact (nn = 1) one.
pub fn approx_study(
    dataset: &Dataset,
    gammas: &[f64],
    nns: &[f64],
    losses: &[Loss],
    kinds: &[SimilarityKind],
    base: &FitConfig,
    repeats: usize,
) -> Result<Vec<ApproxRow>> {
    if !nns.contains(&1.0) {
        return Err(Error::InvalidParameter("the nn list must include 1".into()));
    }
    if gammas.is_empty() || losses.is_empty() || kinds.is_empty() {
        return Err(Error::InvalidParameter("empty parameter list".into()));
    }
    let rows: Vec<usize> = (0..dataset.len()).collect();
    let table = Preprocessor::fit(dataset, &rows)?.transform(dataset, &rows)?;
    let mut out = Vec::new();
    for &similarity in kinds {
        for &loss in losses {
            for &gamma in gammas {
                let config = FitConfig {
                    gamma,
                    loss,
                    similarity,
                    nn: 1.0,
                    ..base.clone()
                };
                let (exact, exact_solve, exact_fit) = timed_fit(&table, &dataset.classes, &config, repeats)?;
                for &nn in nns {
                    let (model, solve_secs, fit_secs) = if nn == 1.0 {
                        (exact.clone(), exact_solve, exact_fit)
                    } else {
                        timed_fit(
                            &table,
                            &dataset.classes,
                            &FitConfig { nn, ..config.clone() },
                            repeats,
                        )?
                    };
                    log::info!(
                        "{} {similarity} {loss} gamma={gamma} nn={nn}: {solve_secs:.3}s",
                        dataset.name
                    );
                    out.push(ApproxRow {
                        dataset: dataset.name.clone(),
                        gamma,
                        nn,
                        loss,
                        similarity,
                        mean_abs_difference: mean_abs_difference(&model, &exact),
                        solve_secs,
                        fit_secs,
                        time_ratio: if exact_solve > 0.0 {
                            solve_secs / exact_solve
                        } else {
                            1.0
                        },
                    });
                }
            }
        }
    }
    Ok(out)
}

pub fn write_csv<W: Write>(rows: &[ApproxRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "dataset",
        "similarity",
        "loss",
        "gamma",
        "nn",
        "mean_abs_difference",
        "solve_secs",
        "fit_secs",
        "time_ratio",
    ])?;
    for r in rows {
        w.write_record([
            r.dataset.clone(),
            r.similarity.to_string(),
            r.loss.to_string(),
            r.gamma.to_string(),
            r.nn.to_string(),
            r.mean_abs_difference.to_string(),
            r.solve_secs.to_string(),
            r.fit_secs.to_string(),
            r.time_ratio.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::Io {
        path: "<output>".into(),
        source: e,
    })?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_row_is_zero() {
        let header: Vec<String> = ["a", "y"].iter().map(|s| s.to_string()).collect();
        let records: Vec<Vec<String>> = (0..12)
            .map(|i| vec![((i * 7) % 12).to_string(), (i % 2).to_string()])
            .collect();
        let d = Dataset::from_records("toy", &header, &records, Some("y"), &[]).unwrap();
        let rows = approx_study(
            &d,
            &[1.0],
            &[0.25, 1.0],
            &[Loss::Mse],
            &[SimilarityKind::Euclidean],
            &FitConfig::default(),
            1,
        )
        .unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].mean_abs_difference, 0.0);
        assert_eq!(rows[1].time_ratio, 1.0);
        assert!(approx_study(
            &d,
            &[1.0],
            &[0.5],
            &[Loss::Mse],
            &[SimilarityKind::Euclidean],
            &FitConfig::default(),
            1
        )
        .is_err());
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 3);
    }
}
