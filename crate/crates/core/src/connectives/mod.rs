//! Fuzzy logic connectives over `[0, 1]`.
//!
//! Every classifier-facing connective is the Łukasiewicz residual triplet,
//! optionally transported through an order isomorphism `φ`:
//!
//! ```text
//! T(x, y) = φ⁻¹(max(0, φ(x) + φ(y) − 1))
//! I(x, y) = φ⁻¹(min(1, 1 − φ(x) + φ(y)))
//! N(x)    = φ⁻¹(1 − φ(x))
//! ```
//!
//! The triplet is IMTL, so the induced negator is involutive and `φ` is also
//! the isomorphism carrying `N` to the standard negator. That is what the
//! averaging operator and the defuzzification threshold are built on.

pub mod owa;
pub mod reference;

use serde::{Deserialize, Serialize};

use crate::error::{check_degree, Error, Result};

pub use owa::{make_owa_weights, owa, OwaDirection, OwaScheme, OwaWeights};

/// Monotone bijection of `[0, 1]` used to transport the Łukasiewicz triplet.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Isomorphism {
    #[default]
    Identity,
    /// `φ(x) = x^exponent`, `exponent > 0`.
    Power { exponent: f64 },
}

impl Isomorphism {
    pub fn power(exponent: f64) -> Result<Self> {
        if exponent.is_finite() && exponent > 0.0 {
            Ok(Isomorphism::Power { exponent })
        } else {
            Err(Error::InvalidParameter(format!(
                "power isomorphism needs a positive finite exponent, got {exponent}"
            )))
        }
    }

    #[inline]
    pub fn apply(&self, x: f64) -> f64 {
        match *self {
            Isomorphism::Identity => x,
            Isomorphism::Power { exponent } => x.powf(exponent),
        }
    }

    #[inline]
    pub fn inverse(&self, y: f64) -> f64 {
        match *self {
            Isomorphism::Identity => y,
            Isomorphism::Power { exponent } => y.powf(exponent.recip()),
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Isomorphism::Identity)
            || matches!(self, Isomorphism::Power { exponent } if *exponent == 1.0)
    }
}

impl std::str::FromStr for Isomorphism {
    type Err = Error;

    /// Parses `identity` or `power:<c>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("identity") || s.eq_ignore_ascii_case("id") {
            return Ok(Isomorphism::Identity);
        }
        if let Some(c) = s.strip_prefix("power:") {
            let c: f64 = c
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad exponent in `{s}`")))?;
            return Isomorphism::power(c);
        }
        Err(Error::InvalidParameter(format!(
            "unknown isomorphism `{s}` (expected identity or power:<c>)"
        )))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseTNorm {
    #[default]
    Lukasiewicz,
}

/// Sums in the φ domain below this are rounding noise of `φ(x) + φ(y) − 1`
/// and are read as 0; otherwise `φ⁻¹ = y^{1/c}` with `c > 1` would turn
/// noise of order ε into values of order ε^{1/c}.
const PHI_ROUNDING_FLOOR: f64 = 4.0 * f64::EPSILON;

/// A residual triplet `(T, I, N)` isomorphic to the Łukasiewicz one.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TripletSpec {
    pub base: BaseTNorm,
    pub isomorphism: Isomorphism,
}

impl TripletSpec {
    pub const LUKASIEWICZ: TripletSpec = TripletSpec {
        base: BaseTNorm::Lukasiewicz,
        isomorphism: Isomorphism::Identity,
    };

    pub fn with_isomorphism(isomorphism: Isomorphism) -> Self {
        TripletSpec {
            base: BaseTNorm::Lukasiewicz,
            isomorphism,
        }
    }

    #[inline]
    pub fn phi(&self, x: f64) -> f64 {
        self.isomorphism.apply(x)
    }

    #[inline]
    pub fn phi_inv(&self, y: f64) -> f64 {
        self.isomorphism.inverse(y)
    }

    /// Unchecked t-norm; inputs are assumed to lie in `[0, 1]`.
    ///
    /// The unit element is handled exactly, so `T(1, y)` returns `y` bit for bit.
    #[inline]
    pub fn t(&self, x: f64, y: f64) -> f64 {
        if x == 1.0 {
            return y;
        }
        if y == 1.0 {
            return x;
        }
        match self.isomorphism {
            Isomorphism::Identity => (x + y - 1.0).max(0.0),
            iso => {
                let s = iso.apply(x) + iso.apply(y) - 1.0;
                if s <= PHI_ROUNDING_FLOOR {
                    0.0
                } else {
                    iso.inverse(s)
                }
            }
        }
    }

    /// Unchecked residual implicator; exact for `x ≤ y` and `x = 1`.
    #[inline]
    pub fn i(&self, x: f64, y: f64) -> f64 {
        if x <= y {
            return 1.0;
        }
        if x == 1.0 {
            return y;
        }
        match self.isomorphism {
            Isomorphism::Identity => (1.0 - x + y).min(1.0),
            iso => iso.inverse((1.0 - iso.apply(x) + iso.apply(y)).min(1.0)),
        }
    }

    /// Unchecked induced negator `N(x) = I(x, 0)`.
    #[inline]
    pub fn n(&self, x: f64) -> f64 {
        match self.isomorphism {
            Isomorphism::Identity => 1.0 - x,
            iso => iso.inverse(1.0 - iso.apply(x)),
        }
    }

    /// Unchecked N-invariant averaging operator.
    #[inline]
    pub fn avg(&self, x: f64, y: f64) -> f64 {
        if x == y {
            return x;
        }
        match self.isomorphism {
            Isomorphism::Identity => 0.5 * (x + y),
            iso => iso.inverse(0.5 * (iso.apply(x) + iso.apply(y))),
        }
    }

    /// Degree above which the positive class is predicted: `φ⁻¹(1/2)`.
    pub fn threshold(&self) -> f64 {
        self.phi_inv(0.5)
    }
}

pub fn t_norm(spec: &TripletSpec, x: f64, y: f64) -> Result<f64> {
    check_degree("x", x)?;
    check_degree("y", y)?;
    Ok(spec.t(x, y))
}

pub fn implicator(spec: &TripletSpec, x: f64, y: f64) -> Result<f64> {
    check_degree("x", x)?;
    check_degree("y", y)?;
    Ok(spec.i(x, y))
}

pub fn negator(spec: &TripletSpec, x: f64) -> Result<f64> {
    check_degree("x", x)?;
    Ok(spec.n(x))
}

pub fn averaging(spec: &TripletSpec, x: f64, y: f64) -> Result<f64> {
    check_degree("x", x)?;
    check_degree("y", y)?;
    Ok(spec.avg(x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn squared() -> TripletSpec {
        TripletSpec::with_isomorphism(Isomorphism::power(2.0).unwrap())
    }

    #[test]
    fn lukasiewicz_table_values() {
        let s = TripletSpec::LUKASIEWICZ;
        assert_abs_diff_eq!(t_norm(&s, 0.7, 0.6).unwrap(), 0.3, epsilon = 1e-15);
        assert_eq!(t_norm(&s, 0.4, 0.5).unwrap(), 0.0);
        assert_abs_diff_eq!(implicator(&s, 0.7, 0.4).unwrap(), 0.7, epsilon = 1e-15);
        assert_eq!(implicator(&s, 1.0, 0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(negator(&s, 0.3).unwrap(), 0.7, epsilon = 1e-15);
        assert_abs_diff_eq!(averaging(&s, 0.4, 0.8).unwrap(), 0.6, epsilon = 1e-15);
        assert_eq!(averaging(&s, 0.0, 1.0).unwrap(), 0.5);
    }

    #[test]
    fn boundary_conditions_hold_for_power_family() {
        for s in [TripletSpec::LUKASIEWICZ, squared()] {
            for k in 0..=20 {
                let x = k as f64 / 20.0;
                assert_abs_diff_eq!(s.t(x, 1.0), x, epsilon = 1e-12);
                assert_eq!(s.i(x, (x + 0.1).min(1.0)), 1.0);
                assert_abs_diff_eq!(s.avg(x, x), x, epsilon = 1e-12);
            }
            assert_eq!(s.n(0.0), 1.0);
        }
    }

    #[test]
    fn squared_negator_matches_hand_value() {
        // sqrt(1 - 0.25)
        let expected = 0.75f64.sqrt();
        assert_abs_diff_eq!(negator(&squared(), 0.5).unwrap(), expected, epsilon = 1e-15);
        assert_abs_diff_eq!(expected, 0.866_025_403_784_438_6, epsilon = 1e-15);
    }

    #[test]
    fn domain_errors() {
        let s = TripletSpec::LUKASIEWICZ;
        assert!(t_norm(&s, 1.2, 0.5).is_err());
        assert!(implicator(&s, 0.5, -0.1).is_err());
        assert!(negator(&s, f64::NAN).is_err());
        assert!(averaging(&s, 0.5, 2.0).is_err());
    }

    #[test]
    fn power_isomorphism_round_trips() {
        for c in [0.5, 2.0, 3.7] {
            let iso = Isomorphism::power(c).unwrap();
            assert_eq!(iso.apply(0.0), 0.0);
            assert_eq!(iso.apply(1.0), 1.0);
            let mut prev = -1.0;
            for k in 0..=200 {
                let x = k as f64 / 200.0;
                let y = iso.apply(x);
                assert!(y > prev);
                prev = y;
                assert_abs_diff_eq!(iso.inverse(y), x, epsilon = 1e-12);
            }
        }
        assert!(Isomorphism::power(0.0).is_err());
        assert!(Isomorphism::power(-1.0).is_err());
    }

    #[test]
    fn parses_isomorphism_names() {
        assert_eq!("identity".parse::<Isomorphism>().unwrap(), Isomorphism::Identity);
        assert_eq!(
            "power:2".parse::<Isomorphism>().unwrap(),
            Isomorphism::Power { exponent: 2.0 }
        );
        assert!("cubic".parse::<Isomorphism>().is_err());
    }

    #[test]
    fn threshold_is_phi_inverse_of_half() {
        assert_eq!(TripletSpec::LUKASIEWICZ.threshold(), 0.5);
        assert_abs_diff_eq!(squared().threshold(), 0.5f64.sqrt(), epsilon = 1e-15);
    }
}
