//! Ordered weighted averaging.
//!
//! `OWA_W(V) = Σ w_i v_(i)` with `v_(i)` the i-th largest value. Weights
//! that soften a minimum (`W_L`) put their mass on the last positions, weights
//! that soften a maximum (`W_U`) on the first; the two are complementary,
//! `(W_L)_i = (W_U)_{n-i+1}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OwaScheme {
    StrictMin,
    StrictMax,
    Additive,
    Exponential,
    InverseAdditive,
}

impl OwaScheme {
    pub fn is_strict(self) -> bool {
        matches!(self, OwaScheme::StrictMin | OwaScheme::StrictMax)
    }

    /// The strict schemes only exist in one direction; for the soft schemes
    /// this is the identity.
    pub fn for_direction(self, direction: OwaDirection) -> OwaScheme {
        match (self.is_strict(), direction) {
            (true, OwaDirection::Lower) => OwaScheme::StrictMin,
            (true, OwaDirection::Upper) => OwaScheme::StrictMax,
            (false, _) => self,
        }
    }
}

impl fmt::Display for OwaScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OwaScheme::StrictMin => "strict_min",
            OwaScheme::StrictMax => "strict_max",
            OwaScheme::Additive => "additive",
            OwaScheme::Exponential => "exponential",
            OwaScheme::InverseAdditive => "inverse_additive",
        })
    }
}

impl FromStr for OwaScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "strict" | "strict_min" | "min" => OwaScheme::StrictMin,
            "strict_max" | "max" => OwaScheme::StrictMax,
            "add" | "additive" => OwaScheme::Additive,
            "exp" | "exponential" => OwaScheme::Exponential,
            "invadd" | "inverse_additive" | "inverse-additive" => OwaScheme::InverseAdditive,
            other => {
                return Err(Error::InvalidWeights(format!("unknown OWA scheme `{other}`")));
            }
        })
    }
}

/// Which extremum the weights replace: `Lower` = `W_L` (soft minimum),
/// `Upper` = `W_U` (soft maximum).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OwaDirection {
    Lower,
    Upper,
}

impl OwaDirection {
    pub fn flip(self) -> Self {
        match self {
            OwaDirection::Lower => OwaDirection::Upper,
            OwaDirection::Upper => OwaDirection::Lower,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OwaWeights {
    values: Vec<f64>,
    scheme: OwaScheme,
    direction: OwaDirection,
    truncation: Option<usize>,
}

impl OwaWeights {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scheme(&self) -> OwaScheme {
        self.scheme
    }

    pub fn direction(&self) -> OwaDirection {
        self.direction
    }

    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    /// The complementary vector (reversed, opposite direction).
    pub fn complement(&self) -> OwaWeights {
        let scheme = match self.scheme {
            OwaScheme::StrictMin => OwaScheme::StrictMax,
            OwaScheme::StrictMax => OwaScheme::StrictMin,
            s => s,
        };
        OwaWeights {
            values: self.values.iter().rev().copied().collect(),
            scheme,
            direction: self.direction.flip(),
            truncation: self.truncation,
        }
    }

    /// Applies the weights; see [`owa`].
    pub fn apply(&self, values: &[f64]) -> Result<f64> {
        owa(self, values)
    }

    /// Like [`apply`](Self::apply) but sorts `scratch` in place.
    pub(crate) fn apply_in_place(&self, scratch: &mut [f64]) -> f64 {
        debug_assert_eq!(scratch.len(), self.values.len());
        scratch.sort_by(|a, b| b.total_cmp(a));
        self.values
            .iter()
            .zip(scratch.iter())
            .filter(|(w, _)| **w != 0.0)
            .map(|(w, v)| w * v)
            .sum()
    }
}

/// Weights of `scheme` for `n` values in the `W_L` orientation (increasing).
fn lower_profile(scheme: OwaScheme, n: usize) -> Vec<f64> {
    let nf = n as f64;
    match scheme {
        OwaScheme::StrictMin | OwaScheme::StrictMax => {
            let mut w = vec![0.0; n];
            w[n - 1] = 1.0;
            w
        }
        OwaScheme::Additive => {
            let denom = nf * (nf + 1.0);
            (1..=n).map(|i| 2.0 * i as f64 / denom).collect()
        }
        OwaScheme::Exponential => {
            // 2^{i-1} / (2^n - 1), written so that large n does not overflow.
            let tail = 1.0 - (-nf).exp2();
            (1..=n).map(|i| (i as f64 - 1.0 - nf).exp2() / tail).collect()
        }
        OwaScheme::InverseAdditive => {
            let harmonic: f64 = (1..=n).map(|i| 1.0 / i as f64).sum();
            (1..=n).map(|i| 1.0 / ((n - i + 1) as f64 * harmonic)).collect()
        }
    }
}

pub fn make_owa_weights(
    scheme: OwaScheme,
    n: usize,
    direction: OwaDirection,
    truncation: Option<usize>,
) -> Result<OwaWeights> {
    if n == 0 {
        return Err(Error::InvalidWeights("weight vector length must be ≥ 1".into()));
    }
    match (scheme, direction) {
        (OwaScheme::StrictMin, OwaDirection::Upper) => {
            return Err(Error::InvalidWeights(
                "strict_min weights replace a minimum; use the lower direction".into(),
            ));
        }
        (OwaScheme::StrictMax, OwaDirection::Lower) => {
            return Err(Error::InvalidWeights(
                "strict_max weights replace a maximum; use the upper direction".into(),
            ));
        }
        _ => {}
    }
    let k = match truncation {
        Some(0) => {
            return Err(Error::InvalidWeights(
                "truncation must keep at least one weight".into(),
            ));
        }
        Some(k) if k > n => {
            return Err(Error::InvalidWeights(format!(
                "truncation {k} exceeds weight vector length {n}"
            )));
        }
        Some(k) => k,
        None => n,
    };

    let mut values = vec![0.0; n];
    values[n - k..].copy_from_slice(&lower_profile(scheme, k));
    if direction == OwaDirection::Upper {
        values.reverse();
    }
    Ok(OwaWeights {
        values,
        scheme,
        direction,
        truncation,
    })
}

/// `Σ w_i v_(i)` over the values sorted in descending order.
pub fn owa(weights: &OwaWeights, values: &[f64]) -> Result<f64> {
    if values.len() != weights.len() {
        return Err(Error::LengthMismatch {
            expected: weights.len(),
            actual: values.len(),
        });
    }
    let mut sorted = values.to_vec();
    Ok(weights.apply_in_place(&mut sorted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    const SOFT: [OwaScheme; 3] = [
        OwaScheme::Additive,
        OwaScheme::Exponential,
        OwaScheme::InverseAdditive,
    ];

    fn assert_slice_eq(actual: &[f64], expected: &[f64]) {
        assert_eq!(actual.len(), expected.len());
        for (a, e) in actual.iter().zip(expected) {
            assert_abs_diff_eq!(a, e, epsilon = 1e-15);
        }
    }

    #[test]
    fn weight_formulas() {
        let add = make_owa_weights(OwaScheme::Additive, 3, OwaDirection::Lower, None).unwrap();
        assert_slice_eq(add.values(), &[1.0 / 6.0, 1.0 / 3.0, 0.5]);

        let min = make_owa_weights(OwaScheme::StrictMin, 4, OwaDirection::Lower, None).unwrap();
        assert_eq!(min.values(), &[0.0, 0.0, 0.0, 1.0]);

        let exp = make_owa_weights(OwaScheme::Exponential, 3, OwaDirection::Lower, None).unwrap();
        assert_slice_eq(exp.values(), &[1.0 / 7.0, 2.0 / 7.0, 4.0 / 7.0]);

        let inv = make_owa_weights(OwaScheme::InverseAdditive, 3, OwaDirection::Lower, None).unwrap();
        let d = 1.0 + 0.5 + 1.0 / 3.0;
        assert_slice_eq(inv.values(), &[1.0 / (3.0 * d), 1.0 / (2.0 * d), 1.0 / d]);

        let max = make_owa_weights(OwaScheme::StrictMax, 3, OwaDirection::Upper, None).unwrap();
        assert_eq!(max.values(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn truncation_keeps_most_influential_positions() {
        let lower = make_owa_weights(OwaScheme::Additive, 5, OwaDirection::Lower, Some(2)).unwrap();
        assert_slice_eq(lower.values(), &[0.0, 0.0, 0.0, 1.0 / 3.0, 2.0 / 3.0]);
        let upper = make_owa_weights(OwaScheme::Additive, 5, OwaDirection::Upper, Some(2)).unwrap();
        assert_slice_eq(upper.values(), &[2.0 / 3.0, 1.0 / 3.0, 0.0, 0.0, 0.0]);
        assert!(make_owa_weights(OwaScheme::Additive, 3, OwaDirection::Lower, Some(4)).is_err());
        assert!(make_owa_weights(OwaScheme::Additive, 3, OwaDirection::Lower, Some(0)).is_err());
    }

    #[test]
    fn invalid_combinations() {
        assert!(make_owa_weights(OwaScheme::Additive, 0, OwaDirection::Lower, None).is_err());
        assert!(make_owa_weights(OwaScheme::StrictMin, 3, OwaDirection::Upper, None).is_err());
        assert!(make_owa_weights(OwaScheme::StrictMax, 3, OwaDirection::Lower, None).is_err());
    }

    #[test]
    fn owa_examples() {
        let max = make_owa_weights(OwaScheme::StrictMax, 3, OwaDirection::Upper, None).unwrap();
        assert_eq!(owa(&max, &[0.2, 0.5, 0.9]).unwrap(), 0.9);
        let add = make_owa_weights(OwaScheme::Additive, 3, OwaDirection::Lower, None).unwrap();
        let expected = 0.9 / 6.0 + 0.5 / 3.0 + 0.2 / 2.0;
        assert_abs_diff_eq!(owa(&add, &[0.9, 0.5, 0.2]).unwrap(), expected, epsilon = 1e-15);
        assert_abs_diff_eq!(
            owa(&add, &[0.2, 0.9, 0.5]).unwrap(),
            0.416_666_666_666_666_7,
            epsilon = 1e-12
        );
        assert!(owa(&add, &[0.1, 0.2]).is_err());
    }

    #[test]
    fn exponential_weights_survive_large_n() {
        let w = make_owa_weights(OwaScheme::Exponential, 2000, OwaDirection::Lower, None).unwrap();
        assert!(w.values().iter().all(|v| v.is_finite() && *v >= 0.0));
        assert_abs_diff_eq!(w.values().iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn scheme_names_parse() {
        assert_eq!("add".parse::<OwaScheme>().unwrap(), OwaScheme::Additive);
        assert_eq!("invadd".parse::<OwaScheme>().unwrap(), OwaScheme::InverseAdditive);
        assert_eq!("strict".parse::<OwaScheme>().unwrap(), OwaScheme::StrictMin);
        assert!("median".parse::<OwaScheme>().is_err());
    }

    proptest! {
        #[test]
        fn weights_sum_to_one_and_are_complementary(
            n in 1usize..200,
            scheme_idx in 0usize..3,
            trunc in proptest::option::of(1usize..200),
        ) {
            let scheme = SOFT[scheme_idx];
            let trunc = trunc.map(|k| k.min(n));
            let lower = make_owa_weights(scheme, n, OwaDirection::Lower, trunc).unwrap();
            let upper = make_owa_weights(scheme, n, OwaDirection::Upper, trunc).unwrap();
            prop_assert!((lower.values().iter().sum::<f64>() - 1.0).abs() < 1e-12);
            prop_assert!(lower.values().iter().all(|w| (0.0..=1.0).contains(w)));
            for i in 0..n {
                prop_assert_eq!(lower.values()[i], upper.values()[n - 1 - i]);
            }
            prop_assert_eq!(lower.complement(), upper);
        }

        #[test]
        fn owa_lies_between_extrema_and_ignores_tie_order(
            values in proptest::collection::vec(0.0f64..=1.0, 1..40),
            scheme_idx in 0usize..3,
            rotate in 0usize..40,
        ) {
            let n = values.len();
            let w = make_owa_weights(SOFT[scheme_idx], n, OwaDirection::Lower, None).unwrap();
            let out = owa(&w, &values).unwrap();
            let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(out >= lo - 1e-12 && out <= hi + 1e-12);
            let mut rotated = values.clone();
            rotated.rotate_left(rotate % n);
            prop_assert_eq!(owa(&w, &rotated).unwrap(), out);
            let constant = vec![values[0]; n];
            prop_assert!((owa(&w, &constant).unwrap() - values[0]).abs() < 1e-12);
        }
    }
}
