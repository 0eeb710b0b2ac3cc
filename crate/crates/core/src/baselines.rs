//! Instance-based reference classifiers: k nearest neighbours and the
//! OWA fuzzy-rough nearest neighbour rule (kFRNN).

use serde::{Deserialize, Serialize};

use crate::classifier::Prediction;
use crate::connectives::{make_owa_weights, OwaDirection, OwaScheme, OwaWeights, TripletSpec};
use crate::error::{Error, Result};
use crate::relations::{cross_relation, NominalCount, SimilarityConfig, SimilarityKind};
use crate::table::InstanceTable;

fn class_count(labels: &[usize], n: usize) -> Result<usize> {
    if labels.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: labels.len(),
        });
    }
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    Ok(labels.iter().max().map_or(0, |m| m + 1))
}

/// Lowest class id among the most frequent ones.
fn majority(votes: &[usize]) -> usize {
    let mut best = 0;
    for k in 1..votes.len() {
        if votes[k] > votes[best] {
            best = k;
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub k: usize,
    pub training: InstanceTable,
    pub labels: Vec<usize>,
    pub n_classes: usize,
    pub similarity: SimilarityConfig,
}

impl KnnModel {
    pub fn fit(
        training: &InstanceTable,
        labels: &[usize],
        k: usize,
        kind: SimilarityKind,
        nominal_count: NominalCount,
    ) -> Result<Self> {
        let n_classes = class_count(labels, training.len())?;
        if k == 0 || k > training.len() {
            return Err(Error::InvalidParameter(format!(
                "k = {k} must lie in 1..={}",
                training.len()
            )));
        }
        if kind == SimilarityKind::Dominance {
            return Err(Error::InvalidParameter("kNN needs a symmetric distance".into()));
        }
        Ok(KnnModel {
            k,
            training: training.clone(),
            labels: labels.to_vec(),
            n_classes,
            similarity: SimilarityConfig::fit(training, 1.0, kind, nominal_count)?,
        })
    }

    /// Majority label of the `k` closest training instances; distance ties
    /// at the cut-off go to the lower index, vote ties to the lower class id.
    pub fn predict_one(&self, queries: &InstanceTable, q: usize) -> usize {
        let mut order: Vec<(f64, usize)> = (0..self.training.len())
            .map(|u| (self.similarity.distance(queries, q, &self.training, u), u))
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut votes = vec![0usize; self.n_classes];
        for &(_, u) in &order[..self.k] {
            votes[self.labels[u]] += 1;
        }
        majority(&votes)
    }

    pub fn predict(&self, queries: &InstanceTable) -> Result<Vec<usize>> {
        if !queries.same_schema(&self.training) {
            return Err(Error::SchemaMismatch(
                "query table differs from the training table".into(),
            ));
        }
        Ok((0..queries.len()).map(|q| self.predict_one(queries, q)).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KfrnnModel {
    pub training: InstanceTable,
    pub labels: Vec<usize>,
    pub n_classes: usize,
    pub similarity: SimilarityConfig,
    pub triplet: TripletSpec,
    pub scheme: OwaScheme,
    /// Non-zero weights per OWA vector; `None` uses all of them.
    pub truncation: Option<usize>,
}

impl KfrnnModel {
    pub fn fit(
        training: &InstanceTable,
        labels: &[usize],
        similarity: SimilarityConfig,
        triplet: TripletSpec,
        scheme: OwaScheme,
        truncation: Option<usize>,
    ) -> Result<Self> {
        let n_classes = class_count(labels, training.len())?;
        if truncation == Some(0) {
            return Err(Error::InvalidWeights(
                "truncation must keep at least one weight".into(),
            ));
        }
        Ok(KfrnnModel {
            training: training.clone(),
            labels: labels.to_vec(),
            n_classes,
            similarity,
            triplet,
            scheme,
            truncation,
        })
    }

    /// Euclidean similarity with `γ = 1`.
    pub fn with_defaults(
        training: &InstanceTable,
        labels: &[usize],
        scheme: OwaScheme,
        truncation: Option<usize>,
    ) -> Result<Self> {
        let similarity =
            SimilarityConfig::fit(training, 1.0, SimilarityKind::Euclidean, NominalCount::OneHot)?;
        Self::fit(
            training,
            labels,
            similarity,
            TripletSpec::LUKASIEWICZ,
            scheme,
            truncation,
        )
    }

    /// `(W_L, W_U)` for the training size.
    pub fn weights(&self) -> Result<(OwaWeights, OwaWeights)> {
        let n = self.training.len();
        let k = self.truncation.map(|k| k.min(n));
        Ok((
            make_owa_weights(
                self.scheme.for_direction(OwaDirection::Lower),
                n,
                OwaDirection::Lower,
                k,
            )?,
            make_owa_weights(
                self.scheme.for_direction(OwaDirection::Upper),
                n,
                OwaDirection::Upper,
                k,
            )?,
        ))
    }

    /// Per-class degree `(lower + upper)/2` of the crisp class indicator,
    /// given `to[v] = R(u†,v)` and `from[v] = R(v,u†)`.
    pub fn degrees(&self, to: &[f64], from: &[f64], weights: &(OwaWeights, OwaWeights)) -> Vec<f64> {
        let (w_lower, w_upper) = weights;
        let spec = &self.triplet;
        let n = self.labels.len();
        let mut lower_terms = vec![0.0; n];
        let mut upper_terms = vec![0.0; n];
        (0..self.n_classes)
            .map(|k| {
                for v in 0..n {
                    let member = if self.labels[v] == k { 1.0 } else { 0.0 };
                    lower_terms[v] = spec.i(from[v], member);
                    upper_terms[v] = spec.t(to[v], member);
                }
                let lower = w_lower
                    .apply(&lower_terms)
                    .expect("weights sized to the training set");
                let upper = w_upper
                    .apply(&upper_terms)
                    .expect("weights sized to the training set");
                0.5 * (lower + upper)
            })
            .collect()
    }

    pub fn predict(&self, queries: &InstanceTable) -> Result<Vec<Prediction>> {
        let relation = cross_relation(queries, &self.training, &self.similarity)?;
        let weights = self.weights()?;
        let symmetric = self.similarity.kind.is_symmetric();
        let back = if symmetric {
            None
        } else {
            Some(cross_relation(&self.training, queries, &self.similarity)?.transpose())
        };
        Ok((0..queries.len())
            .map(|q| {
                let to = relation.row(q);
                let from = back.as_ref().map_or(to, |b| b.row(q));
                let degrees = self.degrees(to, from, &weights);
                let mut class = 0;
                for k in 1..degrees.len() {
                    if degrees[k] > degrees[class] {
                        class = k;
                    }
                }
                Prediction { class, degrees }
            })
            .collect())
    }
}
