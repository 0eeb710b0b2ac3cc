//! The common t-norms and their R-implicators, for reference evaluation.
//!
//! None of these feed the classifier: its LP/QP reductions only exist for
//! t-norms isomorphic to Łukasiewicz, which [`super::TripletSpec`] covers.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceTNorm {
    Minimum,
    Product,
    Lukasiewicz,
    Drastic,
    NilpotentMinimum,
}

impl ReferenceTNorm {
    pub const ALL: [ReferenceTNorm; 5] = [
        ReferenceTNorm::Minimum,
        ReferenceTNorm::Product,
        ReferenceTNorm::Lukasiewicz,
        ReferenceTNorm::Drastic,
        ReferenceTNorm::NilpotentMinimum,
    ];

    pub fn t_norm(self, x: f64, y: f64) -> f64 {
        match self {
            ReferenceTNorm::Minimum => x.min(y),
            ReferenceTNorm::Product => x * y,
            ReferenceTNorm::Lukasiewicz => (x + y - 1.0).max(0.0),
            ReferenceTNorm::Drastic => {
                if x.max(y) == 1.0 {
                    x.min(y)
                } else {
                    0.0
                }
            }
            ReferenceTNorm::NilpotentMinimum => {
                if x + y > 1.0 {
                    x.min(y)
                } else {
                    0.0
                }
            }
        }
    }

    pub fn r_implicator(self, x: f64, y: f64) -> f64 {
        match self {
            ReferenceTNorm::Minimum => {
                if x <= y {
                    1.0
                } else {
                    y
                }
            }
            ReferenceTNorm::Product => {
                if x <= y {
                    1.0
                } else {
                    y / x
                }
            }
            ReferenceTNorm::Lukasiewicz => (1.0 - x + y).min(1.0),
            ReferenceTNorm::Drastic => {
                if x == 1.0 {
                    y
                } else {
                    1.0
                }
            }
            ReferenceTNorm::NilpotentMinimum => {
                if x <= y {
                    1.0
                } else {
                    (1.0 - x).max(y)
                }
            }
        }
    }

    /// Whether residuation `T(x,y) ≤ z ⇔ x ≤ I(y,z)` holds (left continuity).
    pub fn is_residuated(self) -> bool {
        !matches!(self, ReferenceTNorm::Drastic)
    }

    /// Whether the induced negator `I(x, 0)` is involutive.
    pub fn is_imtl(self) -> bool {
        matches!(
            self,
            ReferenceTNorm::Lukasiewicz | ReferenceTNorm::NilpotentMinimum
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> impl Iterator<Item = f64> + Clone {
        (0..=20).map(|k| k as f64 / 20.0)
    }

    #[test]
    fn residuation_holds_except_for_drastic() {
        for t in ReferenceTNorm::ALL {
            let mut holds = true;
            for x in grid() {
                for y in grid() {
                    for z in grid() {
                        let lhs = t.t_norm(x, y) <= z + 1e-12;
                        let rhs = x <= t.r_implicator(y, z) + 1e-12;
                        holds &= lhs == rhs;
                    }
                }
            }
            assert_eq!(holds, t.is_residuated(), "{t:?}");
        }
    }

    #[test]
    fn induced_negator_involutive_only_for_imtl() {
        for t in ReferenceTNorm::ALL {
            let involutive = grid().all(|x| {
                let n = |v: f64| t.r_implicator(v, 0.0);
                (n(n(x)) - x).abs() < 1e-12
            });
            assert_eq!(involutive, t.is_imtl(), "{t:?}");
        }
    }

    #[test]
    fn boundary_condition() {
        for t in ReferenceTNorm::ALL {
            for x in grid() {
                assert!((t.t_norm(x, 1.0) - x).abs() < 1e-15);
            }
        }
    }
}
