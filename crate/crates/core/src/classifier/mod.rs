//! Fuzzy granular approximation classifier.
//!
//! Training solves the granular-approximation problem for the observed
//! classes and stores, per class `k`, the membership table `Â_k` over the
//! training instances. A query `u†` is placed in the interval
//!
//! ```text
//! lower_k = max_{u ∈ Ā_k}  T(R(u†,u), Â_k(u))
//! upper_k = min_{u ∉ Ā_k}  I(R(u,u†), Â_k(u))
//! ```
//!
//! and its degree is the `N`-invariant average of the two bounds.

mod explain;

use serde::{Deserialize, Serialize};

use crate::connectives::{make_owa_weights, OwaDirection, OwaScheme, OwaWeights, TripletSpec};
use crate::error::{Error, Result};
use crate::relations::{
    cross_relation, relation_matrix, NominalCount, RelationMatrix, SimilarityConfig, SimilarityKind,
};
use crate::solver::{self, Loss, SolverStats};
use crate::table::InstanceTable;

pub use explain::{explain, ArgumentAgainst, ArgumentFor, ExplanationReport};

/// Which optimization problem produces the memberships.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formulation {
    /// Pairwise-sum constraints across classes; any number of classes.
    #[default]
    Multiclass,
    /// Difference constraints for class 1 against class 0; supports the
    /// general quantile loss.
    Binary,
}

impl std::str::FromStr for Formulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "multiclass" | "multi-class" => Ok(Formulation::Multiclass),
            "binary" => Ok(Formulation::Binary),
            other => Err(Error::InvalidParameter(format!("unknown formulation `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    pub triplet: TripletSpec,
    pub gamma: f64,
    pub similarity: SimilarityKind,
    pub nominal_count: NominalCount,
    pub loss: Loss,
    pub nn: f64,
    pub formulation: Formulation,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            triplet: TripletSpec::LUKASIEWICZ,
            gamma: 1.0,
            similarity: SimilarityKind::Euclidean,
            nominal_count: NominalCount::OneHot,
            loss: Loss::Mse,
            nn: 1.0,
            formulation: Formulation::Multiclass,
        }
    }
}

/// Lower and upper bound of one class membership, with the training
/// instances attaining them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictionBounds {
    pub lower: f64,
    pub upper: f64,
    pub lower_witness: Option<usize>,
    pub upper_witness: Option<usize>,
}

/// Soft extrema for the bounds: `W_U` replaces the maximum of the lower
/// bound, `W_L` the minimum of the upper bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OwaPredictionConfig {
    pub scheme: OwaScheme,
    /// Non-zero entries of `W_U`.
    pub upper_truncation: Option<usize>,
    /// Non-zero entries of `W_L`.
    pub lower_truncation: Option<usize>,
}

impl OwaPredictionConfig {
    pub fn new(scheme: OwaScheme, truncation: Option<usize>) -> Self {
        OwaPredictionConfig {
            scheme,
            upper_truncation: truncation,
            lower_truncation: truncation,
        }
    }

    /// `(W_U, W_L)` for `n` training instances; truncations are capped at `n`.
    pub fn weights(&self, n: usize) -> Result<(OwaWeights, OwaWeights)> {
        let upper = make_owa_weights(
            self.scheme.for_direction(OwaDirection::Upper),
            n,
            OwaDirection::Upper,
            self.upper_truncation.map(|k| k.min(n)),
        )?;
        let lower = make_owa_weights(
            self.scheme.for_direction(OwaDirection::Lower),
            n,
            OwaDirection::Lower,
            self.lower_truncation.map(|k| k.min(n)),
        )?;
        Ok((upper, lower))
    }
}

impl std::str::FromStr for OwaPredictionConfig {
    type Err = Error;

    /// `scheme` or `scheme:k`.
    fn from_str(s: &str) -> Result<Self> {
        let (scheme, k) = match s.split_once(':') {
            Some((scheme, k)) => {
                let k: usize = k
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad OWA truncation `{k}`")))?;
                (scheme, Some(k))
            }
            None => (s, None),
        };
        Ok(OwaPredictionConfig::new(scheme.parse()?, k))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub class: usize,
    pub degrees: Vec<f64>,
}

/// A fitted classifier. Immutable after [`fit`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FgacModel {
    pub triplet: TripletSpec,
    pub similarity: SimilarityConfig,
    pub training: InstanceTable,
    pub class_labels: Vec<usize>,
    pub n_classes: usize,
    /// Membership of each training instance in its own class.
    pub beta: Vec<f64>,
    /// `memberships[k][u] = Â_k(u)`.
    pub memberships: Vec<Vec<f64>>,
    pub loss: Loss,
    pub nn: f64,
    pub formulation: Formulation,
    pub solver_stats: SolverStats,
}

fn check_classes(class_labels: &[usize]) -> Result<usize> {
    let n_classes = class_labels.iter().max().map_or(0, |m| m + 1);
    let mut counts = vec![0usize; n_classes];
    for &c in class_labels {
        counts[c] += 1;
    }
    let present = counts.iter().filter(|&&c| c > 0).count();
    if present < 2 {
        return Err(Error::SingleClass(present));
    }
    if let Some(k) = counts.iter().position(|&c| c == 0) {
        return Err(Error::InvalidParameter(format!(
            "class ids must be contiguous; class {k} has no training instance"
        )));
    }
    Ok(n_classes)
}

/// The relation the classifier works with: `φ⁻¹` of the base similarity,
/// so that it is `T_{L,φ}`-transitive.
fn transported(matrix: RelationMatrix, spec: &TripletSpec) -> RelationMatrix {
    matrix.through_isomorphism(spec)
}

pub fn fit(training: &InstanceTable, class_labels: &[usize], config: &FitConfig) -> Result<FgacModel> {
    if training.len() != class_labels.len() {
        return Err(Error::LengthMismatch {
            expected: training.len(),
            actual: class_labels.len(),
        });
    }
    if training.len() < 2 {
        return Err(Error::InvalidParameter(
            "at least two training instances are required".into(),
        ));
    }
    if config.similarity == SimilarityKind::Dominance {
        return Err(Error::InvalidParameter(
            "the classifier needs a symmetric similarity (euclidean or supremum)".into(),
        ));
    }
    let n_classes = check_classes(class_labels)?;
    let spec = config.triplet;
    let similarity = SimilarityConfig::fit(training, config.gamma, config.similarity, config.nominal_count)?;
    let relation = transported(relation_matrix(training, &similarity)?, &spec);
    let n = training.len();

    let (beta, memberships, solver_stats) = match config.formulation {
        Formulation::Binary => {
            if n_classes != 2 {
                return Err(Error::InvalidParameter(format!(
                    "the binary formulation needs exactly two classes, found {n_classes}"
                )));
            }
            let labels: Vec<bool> = class_labels.iter().map(|&c| c == 1).collect();
            let problem = solver::assemble_binary(&labels, &relation, &spec, config.loss, config.nn)?;
            let solution = solver::solve(&problem)?;
            let positive: Vec<f64> = solution.alpha.iter().map(|&a| spec.phi_inv(a)).collect();
            let negative: Vec<f64> = positive.iter().map(|&a| spec.n(a)).collect();
            let memberships = vec![negative, positive];
            let beta = (0..n).map(|u| memberships[class_labels[u]][u]).collect();
            (beta, memberships, solution.stats)
        }
        Formulation::Multiclass => {
            let problem =
                solver::assemble_multiclass(class_labels, &relation, &spec, config.loss, config.nn)?;
            let solution = solver::solve(&problem)?;
            let beta: Vec<f64> = solution.alpha.iter().map(|&a| spec.phi_inv(a)).collect();
            let memberships = (0..n_classes)
                .map(|k| {
                    (0..n)
                        .map(|u| {
                            if class_labels[u] == k {
                                beta[u]
                            } else {
                                (0..n)
                                    .filter(|&v| class_labels[v] == k)
                                    .map(|v| spec.t(relation.get(u, v), beta[v]))
                                    .fold(0.0, f64::max)
                            }
                        })
                        .collect()
                })
                .collect();
            (beta, memberships, solution.stats)
        }
    };

    Ok(FgacModel {
        triplet: spec,
        similarity,
        training: training.clone(),
        class_labels: class_labels.to_vec(),
        n_classes,
        beta,
        memberships,
        loss: config.loss,
        nn: config.nn,
        formulation: config.formulation,
        solver_stats,
    })
}

/// Strict maximum with its first (lowest-index) attaining position.
fn arg_extreme(
    values: impl Iterator<Item = (usize, f64)>,
    better: fn(f64, f64) -> bool,
) -> (Option<usize>, Option<f64>) {
    let mut best: (Option<usize>, Option<f64>) = (None, None);
    for (u, v) in values {
        if best.1.map_or(true, |b| better(v, b)) {
            best = (Some(u), Some(v));
        }
    }
    best
}

impl FgacModel {
    pub fn len(&self) -> usize {
        self.beta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beta.is_empty()
    }

    fn check_class(&self, k: usize) -> Result<()> {
        if k >= self.n_classes {
            return Err(Error::IndexOutOfRange {
                index: k,
                len: self.n_classes,
            });
        }
        Ok(())
    }

    fn check_row(&self, row: &[f64]) -> Result<()> {
        if row.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: row.len(),
            });
        }
        Ok(())
    }

    /// `R(u†, u)` for every query against every training instance, in the
    /// model's relation (already carried through `φ⁻¹`).
    pub fn query_relation(&self, queries: &InstanceTable) -> Result<RelationMatrix> {
        Ok(transported(
            cross_relation(queries, &self.training, &self.similarity)?,
            &self.triplet,
        ))
    }

    /// Bounds scanning only the instances that can attain them: the lower
    /// bound over `Ā_k`, the upper bound over the rest.
    ///
    /// `to[u] = R(u†,u)`, `from[u] = R(u,u†)`; for the symmetric relations
    /// the classifier supports these are the same row.
    pub fn membership_bounds(&self, to: &[f64], from: &[f64], k: usize) -> Result<PredictionBounds> {
        self.bounds(to, from, k, true)
    }

    /// Bounds scanning all training instances.
    pub fn membership_bounds_full(&self, to: &[f64], from: &[f64], k: usize) -> Result<PredictionBounds> {
        self.bounds(to, from, k, false)
    }

    fn bounds(&self, to: &[f64], from: &[f64], k: usize, restricted: bool) -> Result<PredictionBounds> {
        self.check_class(k)?;
        self.check_row(to)?;
        self.check_row(from)?;
        let spec = &self.triplet;
        let a = &self.memberships[k];
        let labels = &self.class_labels;
        let (lower_witness, lower) = arg_extreme(
            (0..a.len())
                .filter(|&u| !restricted || labels[u] == k)
                .map(|u| (u, spec.t(to[u], a[u]))),
            |x, best| x > best,
        );
        let (upper_witness, upper) = arg_extreme(
            (0..a.len())
                .filter(|&u| !restricted || labels[u] != k)
                .map(|u| (u, spec.i(from[u], a[u]))),
            |x, best| x < best,
        );
        Ok(PredictionBounds {
            lower: lower.unwrap_or(0.0),
            upper: upper.unwrap_or(1.0),
            lower_witness,
            upper_witness,
        })
    }

    /// OWA-softened bounds over all training instances.
    pub fn owa_bounds(
        &self,
        to: &[f64],
        from: &[f64],
        k: usize,
        weights: &(OwaWeights, OwaWeights),
    ) -> Result<(f64, f64)> {
        self.check_class(k)?;
        self.check_row(to)?;
        self.check_row(from)?;
        let (w_upper, w_lower) = weights;
        for (w, direction) in [(w_upper, OwaDirection::Upper), (w_lower, OwaDirection::Lower)] {
            if w.len() != self.len() || w.direction() != direction {
                return Err(Error::InvalidWeights(format!(
                    "need {direction:?} weights of length {}",
                    self.len()
                )));
            }
        }
        let spec = &self.triplet;
        let a = &self.memberships[k];
        let lower_terms: Vec<f64> = (0..a.len()).map(|u| spec.t(to[u], a[u])).collect();
        let upper_terms: Vec<f64> = (0..a.len()).map(|u| spec.i(from[u], a[u])).collect();
        Ok((w_upper.apply(&lower_terms)?, w_lower.apply(&upper_terms)?))
    }

    /// Averaged degree of membership in class `k`.
    pub fn predict_degree(
        &self,
        to: &[f64],
        from: &[f64],
        k: usize,
        owa: Option<&(OwaWeights, OwaWeights)>,
    ) -> Result<f64> {
        let (lower, upper) = match owa {
            Some(w) => self.owa_bounds(to, from, k, w)?,
            None => {
                let b = self.membership_bounds(to, from, k)?;
                (b.lower, b.upper)
            }
        };
        Ok(self.triplet.avg(lower, upper))
    }

    /// Degrees for every class and the decision.
    ///
    /// Multi-class models take the arg-max (lowest class id on ties). Binary
    /// models predict class 1 iff its degree exceeds `φ⁻¹(0.5)`.
    pub fn predict_class(
        &self,
        to: &[f64],
        from: &[f64],
        owa: Option<&(OwaWeights, OwaWeights)>,
    ) -> Result<Prediction> {
        let degrees = (0..self.n_classes)
            .map(|k| self.predict_degree(to, from, k, owa))
            .collect::<Result<Vec<f64>>>()?;
        let class = match self.formulation {
            Formulation::Binary => usize::from(degrees[1] > self.triplet.threshold()),
            Formulation::Multiclass => {
                let mut best = 0;
                for k in 1..degrees.len() {
                    if degrees[k] > degrees[best] {
                        best = k;
                    }
                }
                best
            }
        };
        Ok(Prediction { class, degrees })
    }

    pub fn predict(
        &self,
        queries: &InstanceTable,
        owa: Option<&OwaPredictionConfig>,
    ) -> Result<Vec<Prediction>> {
        let relation = self.query_relation(queries)?;
        let weights = owa.map(|o| o.weights(self.len())).transpose()?;
        if owa.is_some() && !self.triplet.isomorphism.is_identity() {
            log::warn!("OWA bounds with a non-standard negator: duality of the bounds is not guaranteed");
        }
        (0..queries.len())
            .map(|q| {
                let row = relation.row(q);
                self.predict_class(row, row, weights.as_ref())
            })
            .collect()
    }
}

#[cfg(test)]
pub(crate) mod tests_support {
    use super::*;

    /// Two training instances on a line, `a` at 0 (`Â = 0.9`) and `b` at 1
    /// (`Â = 0.1`), as a binary model for class 1 = {a}; plus the relation
    /// row of a query at `x`.
    pub fn line_model(x: f64) -> (FgacModel, Vec<f64>) {
        const L: TripletSpec = TripletSpec::LUKASIEWICZ;
        let training = InstanceTable::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
        let similarity =
            SimilarityConfig::fit(&training, 1.0, SimilarityKind::Supremum, NominalCount::OneHot).unwrap();
        let positive = vec![0.9, 0.1];
        let negative: Vec<f64> = positive.iter().map(|&a| L.n(a)).collect();
        let model = FgacModel {
            triplet: L,
            similarity,
            training,
            class_labels: vec![1, 0],
            n_classes: 2,
            beta: vec![0.9, negative[1]],
            memberships: vec![negative, positive],
            loss: Loss::Mse,
            nn: 1.0,
            formulation: Formulation::Binary,
            solver_stats: SolverStats::default(),
        };
        let q = InstanceTable::from_rows(&[vec![x]]).unwrap();
        let row = model.query_relation(&q).unwrap().row(0).to_vec();
        (model, row)
    }
}

#[cfg(test)]
mod tests {
    use super::tests_support::line_model;
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn bounds_on_the_line_fixture() {
        let (m, r) = line_model(0.4);
        assert_abs_diff_eq!(r[0], 0.6, epsilon = 1e-15);
        let b = m.membership_bounds(&r, &r, 1).unwrap();
        assert_abs_diff_eq!(b.lower, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(b.upper, 0.7, epsilon = 1e-12);
        assert_eq!((b.lower_witness, b.upper_witness), (Some(0), Some(1)));
        assert_abs_diff_eq!(m.predict_degree(&r, &r, 1, None).unwrap(), 0.6, epsilon = 1e-12);
        assert_eq!(m.predict_class(&r, &r, None).unwrap().class, 1);
    }

    #[test]
    fn query_on_a_training_instance_collapses_the_interval() {
        let (m, r) = line_model(0.0);
        let b = m.membership_bounds_full(&r, &r, 1).unwrap();
        assert_eq!(b.lower, 0.9);
        assert_eq!(b.upper, 0.9);
    }

    #[test]
    fn threshold_tie_goes_to_class_zero() {
        let (mut m, r) = line_model(0.5);
        m.memberships[1] = vec![1.0, 0.0];
        m.memberships[0] = vec![0.0, 1.0];
        let p = m.predict_class(&r, &r, None).unwrap();
        assert_eq!(p.degrees[1], 0.5);
        assert_eq!(p.class, 0);
    }

    #[test]
    fn strict_owa_matches_the_strict_path() {
        let (m, r) = line_model(0.25);
        let w = OwaPredictionConfig::new(OwaScheme::StrictMin, None)
            .weights(2)
            .unwrap();
        let strict = m.membership_bounds_full(&r, &r, 1).unwrap();
        assert_eq!(m.owa_bounds(&r, &r, 1, &w).unwrap(), (strict.lower, strict.upper));
        assert!(m.owa_bounds(&r, &r, 2, &w).is_err());
    }

    #[test]
    fn fit_two_instances_mse() {
        let training = InstanceTable::from_rows(&[vec![0.0], vec![0.2]]).unwrap();
        let config = FitConfig {
            similarity: SimilarityKind::Supremum,
            gamma: 0.2,
            ..FitConfig::default()
        };
        let model = fit(&training, &[0, 1], &config).unwrap();
        // R = 1 − 0.2·1 = 0.8 → β_a + β_b ≤ 1.2, symmetric optimum
        assert_abs_diff_eq!(model.beta[0], 0.6, epsilon = 1e-9);
        assert_abs_diff_eq!(model.beta[1], 0.6, epsilon = 1e-9);
        assert!(fit(&training, &[0, 0], &config).is_err());
        assert!(fit(&training, &[0, 2], &config).is_err());
    }

    #[test]
    fn separated_classes_get_full_membership() {
        let training = InstanceTable::from_rows(&[vec![0.0], vec![0.1], vec![0.9], vec![1.0]]).unwrap();
        let config = FitConfig {
            gamma: 2.0,
            ..FitConfig::default()
        };
        let model = fit(&training, &[0, 0, 1, 1], &config).unwrap();
        for &b in &model.beta {
            assert_abs_diff_eq!(b, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn owa_spec_parsing() {
        let c: OwaPredictionConfig = "additive:5".parse().unwrap();
        assert_eq!(c.scheme, OwaScheme::Additive);
        assert_eq!(c.lower_truncation, Some(5));
        assert!("additive:x".parse::<OwaPredictionConfig>().is_err());
        let (wu, wl) = c.weights(3).unwrap();
        assert_eq!(wu.values(), wl.complement().values());
    }
}
