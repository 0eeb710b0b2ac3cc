//! Arguments for and against a predicted membership.
//!
//! An argument for `u† ∈ A_k` is a training instance `u ∈ Ā_k` with strength
//! `T(R(u†,u), Â_k(u))`; the strongest one attains the lower bound. An
//! argument against is an instance `u ∉ Ā_k` supporting `u† ∈ coA_k`, with
//! strength `T(R(u,u†), N(Â_k(u)))`, which equals `N(I(R(u,u†), Â_k(u)))`;
//! the strongest one attains the upper bound through `N`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{FgacModel, PredictionBounds};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArgumentFor {
    pub instance: usize,
    pub class: usize,
    pub similarity: f64,
    pub beta: f64,
    pub strength: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArgumentAgainst {
    pub instance: usize,
    pub class: usize,
    pub similarity: f64,
    /// `Â_k(u)`.
    pub membership: f64,
    /// `I(R(u,u†), Â_k(u))`, the instance's cap on the degree.
    pub implication: f64,
    pub strength: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplanationReport {
    pub query: usize,
    pub class: usize,
    /// Predicted degree for every class.
    pub degrees: Vec<f64>,
    pub decision: usize,
    pub bounds: PredictionBounds,
    pub arguments_for: Vec<ArgumentFor>,
    pub arguments_against: Vec<ArgumentAgainst>,
    pub notes: Vec<String>,
}

/// Explains the membership of query `query` in class `k`.
///
/// `to[u] = R(u†,u)` and `from[u] = R(u,u†)`. At most `top_n` arguments of
/// each kind are listed, strongest first, ties by instance index.
pub fn explain(
    model: &FgacModel,
    query: usize,
    to: &[f64],
    from: &[f64],
    k: usize,
    top_n: usize,
) -> Result<ExplanationReport> {
    let bounds = model.membership_bounds(to, from, k)?;
    let prediction = model.predict_class(to, from, None)?;
    let spec = &model.triplet;
    let a = &model.memberships[k];
    let labels = &model.class_labels;
    let mut notes = Vec::new();
    if top_n > model.len() {
        notes.push(format!(
            "requested {top_n} arguments, the model has {} training instances",
            model.len()
        ));
    }

    let mut arguments_for: Vec<ArgumentFor> = (0..a.len())
        .filter(|&u| labels[u] == k)
        .map(|u| ArgumentFor {
            instance: u,
            class: labels[u],
            similarity: to[u],
            beta: model.beta[u],
            strength: spec.t(to[u], a[u]),
        })
        .collect();
    arguments_for.sort_by(|x, y| {
        y.strength
            .total_cmp(&x.strength)
            .then(x.instance.cmp(&y.instance))
    });
    arguments_for.truncate(top_n);

    let mut arguments_against: Vec<ArgumentAgainst> = (0..a.len())
        .filter(|&u| labels[u] != k)
        .map(|u| {
            let implication = spec.i(from[u], a[u]);
            ArgumentAgainst {
                instance: u,
                class: labels[u],
                similarity: from[u],
                membership: a[u],
                implication,
                strength: spec.n(implication),
            }
        })
        .collect();
    // weakest cap first; N is decreasing so this is strongest argument first
    arguments_against.sort_by(|x, y| {
        x.implication
            .total_cmp(&y.implication)
            .then(x.instance.cmp(&y.instance))
    });
    arguments_against.truncate(top_n);

    Ok(ExplanationReport {
        query,
        class: k,
        degrees: prediction.degrees,
        decision: prediction.class,
        bounds,
        arguments_for,
        arguments_against,
        notes,
    })
}

impl fmt::Display for ExplanationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "query {} / class {}", self.query, self.class)?;
        writeln!(
            f,
            "  degree {:.4} in [{:.4}, {:.4}]; decision: class {}",
            self.degrees[self.class], self.bounds.lower, self.bounds.upper, self.decision
        )?;
        for (k, d) in self.degrees.iter().enumerate() {
            writeln!(f, "    class {k}: {d:.4}")?;
        }
        writeln!(f, "  arguments for:")?;
        for a in &self.arguments_for {
            writeln!(
                f,
                "    #{:<6} class {}  similarity {:.4}  beta {:.4}  strength {:.4}",
                a.instance, a.class, a.similarity, a.beta, a.strength
            )?;
        }
        writeln!(f, "  arguments against:")?;
        for a in &self.arguments_against {
            writeln!(
                f,
                "    #{:<6} class {}  similarity {:.4}  membership {:.4}  strength {:.4}",
                a.instance, a.class, a.similarity, a.membership, a.strength
            )?;
        }
        for note in &self.notes {
            writeln!(f, "  note: {note}")?;
        }
        Ok(())
    }
}
