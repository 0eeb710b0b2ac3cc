//! Fuzzy granules, granular representability and fuzzy rough approximations.
//!
//! With `R` a T-preorder on `U`:
//!
//! ```text
//! lower(A)(u) = min_v I(R(v,u), A(v))
//! upper(A)(u) = max_v T(R(u,v), A(v))
//! ```
//!
//! `A` is granularly representable (GR) w.r.t. `R` when
//! `T(R(v,u), A(u)) ≤ A(v)` for all `u, v`. The lower approximation is the
//! largest GR set contained in `A` and the upper approximation the smallest
//! GR set containing it.

use serde::{Deserialize, Serialize};

use crate::connectives::{OwaDirection, OwaWeights, TripletSpec};
use crate::error::{check_degree, Error, Result};
use crate::relations::RelationMatrix;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzySet {
    membership: Vec<f64>,
}

impl FuzzySet {
    pub fn new(membership: Vec<f64>) -> Result<Self> {
        for &m in &membership {
            check_degree("membership", m)?;
        }
        Ok(FuzzySet { membership })
    }

    pub fn crisp(members: &[bool]) -> Self {
        FuzzySet {
            membership: members.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect(),
        }
    }

    pub fn membership(&self) -> &[f64] {
        &self.membership
    }

    pub fn into_membership(self) -> Vec<f64> {
        self.membership
    }

    pub fn len(&self) -> usize {
        self.membership.len()
    }

    pub fn is_empty(&self) -> bool {
        self.membership.is_empty()
    }

    pub fn complement(&self, spec: &TripletSpec) -> FuzzySet {
        FuzzySet {
            membership: self.membership.iter().map(|&a| spec.n(a)).collect(),
        }
    }

    /// Pointwise `self ≤ other + tol`.
    pub fn is_subset_of(&self, other: &FuzzySet, tol: f64) -> bool {
        self.len() == other.len()
            && self
                .membership
                .iter()
                .zip(&other.membership)
                .all(|(a, b)| *a <= b + tol)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GranuleDirection {
    /// `v ↦ T(R(v,u), λ)`
    Forward,
    /// `v ↦ T(R(u,v), λ)`
    Inverse,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Granule {
    pub center: usize,
    pub weight: f64,
    pub direction: GranuleDirection,
    pub membership: Vec<f64>,
}

pub fn granule(
    matrix: &RelationMatrix,
    spec: &TripletSpec,
    u: usize,
    lambda: f64,
    direction: GranuleDirection,
) -> Result<Granule> {
    if !matrix.is_square() {
        return Err(Error::SchemaMismatch("granules need a square relation".into()));
    }
    if u >= matrix.rows() {
        return Err(Error::IndexOutOfRange {
            index: u,
            len: matrix.rows(),
        });
    }
    check_degree("lambda", lambda)?;
    let membership = (0..matrix.rows())
        .map(|v| {
            let r = match direction {
                GranuleDirection::Forward => matrix.get(v, u),
                GranuleDirection::Inverse => matrix.get(u, v),
            };
            spec.t(r, lambda)
        })
        .collect();
    Ok(Granule {
        center: u,
        weight: lambda,
        direction,
        membership,
    })
}

/// A pair `(u, v)` with `T(R(v,u), A(u)) > A(v) + tol`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrViolation {
    pub u: usize,
    pub v: usize,
    pub excess: f64,
}

pub fn is_granularly_representable(
    set: &FuzzySet,
    matrix: &RelationMatrix,
    spec: &TripletSpec,
    tol: f64,
) -> Result<Vec<GrViolation>> {
    check_square(set, matrix)?;
    let a = set.membership();
    let mut out = Vec::new();
    for u in 0..a.len() {
        if a[u] == 0.0 {
            continue;
        }
        for v in 0..a.len() {
            let excess = spec.t(matrix.get(v, u), a[u]) - a[v];
            if excess > tol {
                out.push(GrViolation { u, v, excess });
            }
        }
    }
    Ok(out)
}

fn check_square(set: &FuzzySet, matrix: &RelationMatrix) -> Result<()> {
    if !matrix.is_square() {
        return Err(Error::SchemaMismatch(
            "approximations need a square relation".into(),
        ));
    }
    if set.len() != matrix.rows() {
        return Err(Error::LengthMismatch {
            expected: matrix.rows(),
            actual: set.len(),
        });
    }
    Ok(())
}

fn check_weights(weights: Option<&OwaWeights>, n: usize, direction: OwaDirection) -> Result<()> {
    if let Some(w) = weights {
        if w.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: w.len(),
            });
        }
        if w.direction() != direction {
            return Err(Error::InvalidWeights(format!(
                "expected {direction:?} weights, got {:?}",
                w.direction()
            )));
        }
    }
    Ok(())
}

/// Strict (`min`) or OWA-softened (`W_L`) lower approximation.
pub fn lower_approximation(
    set: &FuzzySet,
    matrix: &RelationMatrix,
    spec: &TripletSpec,
    weights: Option<&OwaWeights>,
) -> Result<FuzzySet> {
    check_square(set, matrix)?;
    let n = set.len();
    check_weights(weights, n, OwaDirection::Lower)?;
    let a = set.membership();
    let mut scratch = vec![0.0; n];
    let membership = (0..n)
        .map(|u| {
            for v in 0..n {
                scratch[v] = spec.i(matrix.get(v, u), a[v]);
            }
            aggregate(&mut scratch, weights, f64::min, 1.0)
        })
        .collect();
    Ok(FuzzySet { membership })
}

/// Strict (`max`) or OWA-softened (`W_U`) upper approximation.
pub fn upper_approximation(
    set: &FuzzySet,
    matrix: &RelationMatrix,
    spec: &TripletSpec,
    weights: Option<&OwaWeights>,
) -> Result<FuzzySet> {
    check_square(set, matrix)?;
    let n = set.len();
    check_weights(weights, n, OwaDirection::Upper)?;
    let a = set.membership();
    let mut scratch = vec![0.0; n];
    let membership = (0..n)
        .map(|u| {
            for v in 0..n {
                scratch[v] = spec.t(matrix.get(u, v), a[v]);
            }
            aggregate(&mut scratch, weights, f64::max, 0.0)
        })
        .collect();
    Ok(FuzzySet { membership })
}

fn aggregate(
    values: &mut [f64],
    weights: Option<&OwaWeights>,
    strict: fn(f64, f64) -> f64,
    identity: f64,
) -> f64 {
    match weights {
        Some(w) => w.apply_in_place(values).clamp(0.0, 1.0),
        None => values.iter().copied().fold(identity, strict),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectives::{make_owa_weights, OwaScheme};
    use crate::relations::RelationProperties;
    use approx::assert_abs_diff_eq;

    const L: TripletSpec = TripletSpec::LUKASIEWICZ;

    fn two_point() -> RelationMatrix {
        RelationMatrix::from_degrees(2, 2, vec![1.0, 0.6, 0.6, 1.0], RelationProperties::EQUIVALENCE).unwrap()
    }

    #[test]
    fn granule_examples() {
        let m = two_point();
        let g = granule(&m, &L, 0, 0.0, GranuleDirection::Forward).unwrap();
        assert_eq!(g.membership, vec![0.0, 0.0]);
        let g = granule(&m, &L, 1, 1.0, GranuleDirection::Forward).unwrap();
        assert_eq!(g.membership[1], 1.0);
        let m8 =
            RelationMatrix::from_degrees(2, 2, vec![1.0, 0.8, 0.8, 1.0], RelationProperties::EQUIVALENCE)
                .unwrap();
        let g = granule(&m8, &L, 0, 0.5, GranuleDirection::Forward).unwrap();
        assert_abs_diff_eq!(g.membership[1], 0.3, epsilon = 1e-15);
        assert!(granule(&m, &L, 2, 0.5, GranuleDirection::Inverse).is_err());
        assert!(granule(&m, &L, 0, 1.5, GranuleDirection::Inverse).is_err());
    }

    #[test]
    fn representability_examples() {
        let m = two_point();
        let constant = FuzzySet::new(vec![0.4, 0.4]).unwrap();
        assert!(is_granularly_representable(&constant, &m, &L, 1e-12)
            .unwrap()
            .is_empty());
        let full = RelationMatrix::from_degrees(2, 2, vec![1.0; 4], RelationProperties::EQUIVALENCE).unwrap();
        let split = FuzzySet::new(vec![1.0, 0.0]).unwrap();
        let report = is_granularly_representable(&split, &full, &L, 1e-12).unwrap();
        assert_eq!(
            report,
            vec![GrViolation {
                u: 0,
                v: 1,
                excess: 1.0
            }]
        );
    }

    #[test]
    fn approximation_examples() {
        let m = two_point();
        let a = FuzzySet::new(vec![1.0, 0.2]).unwrap();
        let lower = lower_approximation(&a, &m, &L, None).unwrap();
        assert_abs_diff_eq!(lower.membership()[0], 0.6, epsilon = 1e-15);
        let upper = upper_approximation(&a, &m, &L, None).unwrap();
        assert_abs_diff_eq!(upper.membership()[1], 0.6, epsilon = 1e-15);

        let crisp = FuzzySet::crisp(&[true, true, false]);
        let blocks = RelationMatrix::from_degrees(
            3,
            3,
            vec![1.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0],
            RelationProperties::EQUIVALENCE,
        )
        .unwrap();
        assert_eq!(lower_approximation(&crisp, &blocks, &L, None).unwrap(), crisp);
        assert_eq!(upper_approximation(&crisp, &blocks, &L, None).unwrap(), crisp);
    }

    #[test]
    fn weight_checks() {
        let m = two_point();
        let a = FuzzySet::new(vec![1.0, 0.2]).unwrap();
        let w3 = make_owa_weights(OwaScheme::Additive, 3, OwaDirection::Lower, None).unwrap();
        assert!(lower_approximation(&a, &m, &L, Some(&w3)).is_err());
        let wu = make_owa_weights(OwaScheme::Additive, 2, OwaDirection::Upper, None).unwrap();
        assert!(lower_approximation(&a, &m, &L, Some(&wu)).is_err());
        let wl = make_owa_weights(OwaScheme::Additive, 2, OwaDirection::Lower, None).unwrap();
        // values {1.0, 0.6}: 1/3·1.0 + 2/3·0.6
        let soft = lower_approximation(&a, &m, &L, Some(&wl)).unwrap();
        assert_abs_diff_eq!(soft.membership()[0], 1.0 / 3.0 + 0.4, epsilon = 1e-12);
    }
}
