//! Stratified cross-validation with a hyperparameter grid.

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use super::metrics::balanced_accuracy;
use super::preprocess::Preprocessor;
use super::resample::{oversample, stratified_folds, sub_seed};
use crate::baselines::{KfrnnModel, KnnModel};
use crate::classifier::{self, FitConfig, OwaPredictionConfig};
use crate::connectives::OwaScheme;
use crate::error::{Error, Result};
use crate::relations::{NominalCount, SimilarityKind};
use crate::table::InstanceTable;

pub const GAMMA_GRID: [f64; 11] = [0.5, 0.7, 0.8, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 7.0, 10.0];
pub const KNN_GRID: [usize; 11] = [1, 3, 5, 7, 10, 15, 20, 25, 30, 40, 50];
pub const KFRNN_GRID: [Option<usize>; 11] = [
    None,
    Some(1),
    Some(3),
    Some(5),
    Some(10),
    Some(15),
    Some(20),
    Some(25),
    Some(30),
    Some(40),
    Some(50),
];

/// One point of a family's hyperparameter grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hyper {
    Gamma(f64),
    K(usize),
    /// kFRNN OWA truncation; `None` keeps every weight.
    Truncation(Option<usize>),
}

impl fmt::Display for Hyper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hyper::Gamma(g) => write!(f, "gamma={g}"),
            Hyper::K(k) => write!(f, "k={k}"),
            Hyper::Truncation(None) => write!(f, "k=all"),
            Hyper::Truncation(Some(k)) => write!(f, "k={k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelFamily {
    /// `config.gamma` is replaced by each grid value.
    Fgac {
        config: FitConfig,
        owa: Option<OwaPredictionConfig>,
    },
    Knn {
        kind: SimilarityKind,
        nominal_count: NominalCount,
    },
    Kfrnn {
        scheme: OwaScheme,
    },
}

impl ModelFamily {
    pub fn name(&self) -> &'static str {
        match self {
            ModelFamily::Fgac { .. } => "fgac",
            ModelFamily::Knn { .. } => "knn",
            ModelFamily::Kfrnn { .. } => "kfrnn",
        }
    }

    pub fn default_grid(&self) -> Vec<Hyper> {
        match self {
            ModelFamily::Fgac { .. } => GAMMA_GRID.iter().map(|&g| Hyper::Gamma(g)).collect(),
            ModelFamily::Knn { .. } => KNN_GRID.iter().map(|&k| Hyper::K(k)).collect(),
            ModelFamily::Kfrnn { .. } => KFRNN_GRID.iter().map(|&k| Hyper::Truncation(k)).collect(),
        }
    }

    /// Trains on `train` and predicts `test`.
    pub fn fit_predict(
        &self,
        hyper: Hyper,
        train: &InstanceTable,
        labels: &[usize],
        test: &InstanceTable,
    ) -> Result<Vec<usize>> {
        match (self, hyper) {
            (ModelFamily::Fgac { config, owa }, Hyper::Gamma(gamma)) => {
                let config = FitConfig {
                    gamma,
                    ..config.clone()
                };
                let model = classifier::fit(train, labels, &config)?;
                Ok(model
                    .predict(test, owa.as_ref())?
                    .into_iter()
                    .map(|p| p.class)
                    .collect())
            }
            (ModelFamily::Knn { kind, nominal_count }, Hyper::K(k)) => {
                let model = KnnModel::fit(train, labels, k.min(train.len()), *kind, *nominal_count)?;
                model.predict(test)
            }
            (ModelFamily::Kfrnn { scheme }, Hyper::Truncation(k)) => {
                let model = KfrnnModel::with_defaults(train, labels, *scheme, k)?;
                Ok(model.predict(test)?.into_iter().map(|p| p.class).collect())
            }
            (family, hyper) => Err(Error::InvalidParameter(format!(
                "{hyper} is not a hyperparameter of {}",
                family.name()
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub folds: usize,
    pub seed: u64,
    /// Oversample minority classes inside each training portion.
    pub oversample: bool,
    /// Empty selects the family's default grid.
    pub grid: Vec<Hyper>,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            folds: 5,
            seed: 0,
            oversample: true,
            grid: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateScore {
    pub hyper: Hyper,
    pub fold_scores: Vec<f64>,
    pub mean: f64,
    pub wall_time_secs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub dataset: String,
    pub family: String,
    pub folds: usize,
    pub seed: u64,
    pub candidates: Vec<CandidateScore>,
    /// Index of the best mean (first on ties).
    pub best: usize,
}

impl CvReport {
    pub fn best_candidate(&self) -> &CandidateScore {
        &self.candidates[self.best]
    }
}

/// Balanced accuracy of every grid point on one train/test split.
///
/// Preprocessing statistics and oversampling use the training rows only.
fn split_scores(
    dataset: &Dataset,
    train_rows: &[usize],
    test_rows: &[usize],
    family: &ModelFamily,
    grid: &[Hyper],
    oversample_seed: Option<u64>,
) -> Result<Vec<(f64, f64)>> {
    let train_rows = match oversample_seed {
        Some(seed) => oversample(train_rows, &dataset.classes, seed),
        None => train_rows.to_vec(),
    };
    let pre = Preprocessor::fit(dataset, &train_rows)?;
    let train = pre.transform(dataset, &train_rows)?;
    let test = pre.transform(dataset, test_rows)?;
    let train_y: Vec<usize> = train_rows.iter().map(|&r| dataset.classes[r]).collect();
    let test_y: Vec<usize> = test_rows.iter().map(|&r| dataset.classes[r]).collect();
    grid.iter()
        .map(|&hyper| {
            let started = Instant::now();
            let predicted = family.fit_predict(hyper, &train, &train_y, &test)?;
            let score = balanced_accuracy(&test_y, &predicted, dataset.n_classes())?;
            Ok((score, started.elapsed().as_secs_f64()))
        })
        .collect()
}

fn check_labelled(dataset: &Dataset) -> Result<()> {
    if dataset.classes.is_empty() {
        return Err(Error::InvalidParameter("dataset has no target column".into()));
    }
    Ok(())
}

/// `k`-fold stratified cross-validation over the grid; reports the mean
/// balanced accuracy of every candidate and picks the best.
pub fn cross_validate(dataset: &Dataset, family: &ModelFamily, config: &EvalConfig) -> Result<CvReport> {
    check_labelled(dataset)?;
    let grid = if config.grid.is_empty() {
        family.default_grid()
    } else {
        config.grid.clone()
    };
    let (assignment, k) = stratified_folds(&dataset.classes, config.folds, config.seed)?;
    let mut fold_scores = vec![Vec::with_capacity(k); grid.len()];
    let mut times = vec![0.0; grid.len()];
    for fold in 0..k {
        let train: Vec<usize> = (0..dataset.len()).filter(|&i| assignment[i] != fold).collect();
        let test: Vec<usize> = (0..dataset.len()).filter(|&i| assignment[i] == fold).collect();
        let seed = config.oversample.then(|| sub_seed(config.seed, fold as u64));
        for (c, (score, secs)) in split_scores(dataset, &train, &test, family, &grid, seed)?
            .into_iter()
            .enumerate()
        {
            log::debug!("{} fold {fold} {}: {score:.4}", family.name(), grid[c]);
            fold_scores[c].push(score);
            times[c] += secs;
        }
    }
    let candidates: Vec<CandidateScore> = grid
        .iter()
        .zip(fold_scores)
        .zip(times)
        .map(|((&hyper, scores), wall_time_secs)| CandidateScore {
            hyper,
            mean: scores.iter().sum::<f64>() / scores.len() as f64,
            fold_scores: scores,
            wall_time_secs,
        })
        .collect();
    let mut best = 0;
    for (i, c) in candidates.iter().enumerate() {
        if c.mean > candidates[best].mean {
            best = i;
        }
    }
    Ok(CvReport {
        dataset: dataset.name.clone(),
        family: family.name().to_string(),
        folds: k,
        seed: config.seed,
        candidates,
        best,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NestedReport {
    pub dataset: String,
    pub family: String,
    pub outer_scores: Vec<f64>,
    /// Hyperparameter picked by the inner loop of each outer fold.
    pub chosen: Vec<Hyper>,
    pub mean: f64,
}

/// Outer folds score a model tuned by an inner cross-validation on the
/// outer training portion only.
pub fn nested_cross_validate(
    dataset: &Dataset,
    family: &ModelFamily,
    config: &EvalConfig,
) -> Result<NestedReport> {
    check_labelled(dataset)?;
    let (assignment, k) = stratified_folds(&dataset.classes, config.folds, config.seed)?;
    let mut outer_scores = Vec::with_capacity(k);
    let mut chosen = Vec::with_capacity(k);
    for fold in 0..k {
        let train: Vec<usize> = (0..dataset.len()).filter(|&i| assignment[i] != fold).collect();
        let test: Vec<usize> = (0..dataset.len()).filter(|&i| assignment[i] == fold).collect();
        let inner_config = EvalConfig {
            seed: sub_seed(config.seed, 1_000 + fold as u64),
            ..config.clone()
        };
        let inner = cross_validate(&dataset.subset(&train), family, &inner_config)?;
        let hyper = inner.best_candidate().hyper;
        let seed = config.oversample.then(|| sub_seed(config.seed, fold as u64));
        let (score, _) = split_scores(dataset, &train, &test, family, &[hyper], seed)?[0];
        outer_scores.push(score);
        chosen.push(hyper);
    }
    Ok(NestedReport {
        dataset: dataset.name.clone(),
        family: family.name().to_string(),
        mean: outer_scores.iter().sum::<f64>() / k as f64,
        outer_scores,
        chosen,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blobs() -> Dataset {
        let header: Vec<String> = ["a", "b", "y"].iter().map(|s| s.to_string()).collect();
        let records: Vec<Vec<String>> = (0..30)
            .map(|i| {
                let class = usize::from(i % 3 == 0);
                let x = class as f64 * 2.0 + (i as f64 * 0.37).sin() * 0.3;
                let y = (i as f64 * 0.71).cos() * 0.3;
                vec![x.to_string(), y.to_string(), class.to_string()]
            })
            .collect();
        Dataset::from_records("blobs", &header, &records, Some("y"), &[]).unwrap()
    }

    #[test]
    fn deterministic_and_separating() {
        let d = blobs();
        let family = ModelFamily::Knn {
            kind: SimilarityKind::Euclidean,
            nominal_count: NominalCount::OneHot,
        };
        let config = EvalConfig {
            grid: vec![Hyper::K(1), Hyper::K(3)],
            ..EvalConfig::default()
        };
        let a = cross_validate(&d, &family, &config).unwrap();
        let b = cross_validate(&d, &family, &config).unwrap();
        assert_eq!(a.candidates[0].fold_scores, b.candidates[0].fold_scores);
        assert_eq!(a.best_candidate().mean, 1.0);

        let fgac = ModelFamily::Fgac {
            config: FitConfig::default(),
            owa: None,
        };
        let config = EvalConfig {
            grid: vec![Hyper::Gamma(1.0)],
            ..EvalConfig::default()
        };
        assert_eq!(
            cross_validate(&d, &fgac, &config).unwrap().best_candidate().mean,
            1.0
        );
        assert!(cross_validate(
            &d,
            &fgac,
            &EvalConfig {
                grid: vec![Hyper::K(3)],
                ..EvalConfig::default()
            }
        )
        .is_err());
    }

    #[test]
    fn nested_runs() {
        let d = blobs();
        let family = ModelFamily::Kfrnn {
            scheme: OwaScheme::Additive,
        };
        let config = EvalConfig {
            folds: 3,
            grid: vec![Hyper::Truncation(None), Hyper::Truncation(Some(3))],
            ..EvalConfig::default()
        };
        let r = nested_cross_validate(&d, &family, &config).unwrap();
        assert_eq!(r.outer_scores.len(), 3);
        assert!(r.mean > 0.9);
    }
}
