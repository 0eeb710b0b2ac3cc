//! Fuzzy similarity and dominance relations between instances.
//!
//! Per attribute `q` with range `range(q)`:
//!
//! ```text
//! similarity  R_q(u,v) = max(1 − γ·|u_q − v_q| / range(q), 0)
//! dominance   R_q(u,v) = max(min(1 − γ·(v_q − u_q) / range(q), 1), 0)
//! ```
//!
//! The supremum relation is the minimum over attributes. The Euclidean
//! relation is `max(1 − γ·d(u,v)/√|Q|, 0)` with `d` the Euclidean distance on
//! range-scaled attributes. A nominal attribute contributes a single 0/1
//! coordinate (0 when the categories agree); `|Q|` counts its one-hot columns
//! unless [`NominalCount::Original`] is selected.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::connectives::TripletSpec;
use crate::error::{Error, Result};
use crate::table::InstanceTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimilarityKind {
    Supremum,
    Euclidean,
    Dominance,
}

impl SimilarityKind {
    pub fn is_symmetric(self) -> bool {
        !matches!(self, SimilarityKind::Dominance)
    }
}

impl fmt::Display for SimilarityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SimilarityKind::Supremum => "supremum",
            SimilarityKind::Euclidean => "euclidean",
            SimilarityKind::Dominance => "dominance",
        })
    }
}

impl FromStr for SimilarityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "supremum" | "sup" => Ok(SimilarityKind::Supremum),
            "euclidean" | "euc" => Ok(SimilarityKind::Euclidean),
            "dominance" => Ok(SimilarityKind::Dominance),
            other => Err(Error::InvalidParameter(format!("unknown similarity `{other}`"))),
        }
    }
}

/// How nominal attributes enter the `|Q|` averaging factor.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NominalCount {
    /// One column per category, as after one-hot encoding.
    #[default]
    OneHot,
    /// One column per original nominal attribute.
    Original,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimilarityConfig {
    pub gamma: f64,
    pub kind: SimilarityKind,
    /// Range of each numeric column at fit time; zero marks a dropped column.
    pub attribute_ranges: Vec<f64>,
    /// Nominal columns taking part in the relation.
    pub nominal_active: Vec<bool>,
    /// `|Q|` used by the Euclidean averaging factor.
    pub attribute_count_for_averaging: usize,
    pub nominal_count: NominalCount,
}

impl SimilarityConfig {
    /// Captures attribute ranges from `table` (the training split).
    pub fn fit(
        table: &InstanceTable,
        gamma: f64,
        kind: SimilarityKind,
        nominal_count: NominalCount,
    ) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "γ must be positive, got {gamma}"
            )));
        }
        if table.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let mut ranges = Vec::with_capacity(table.numeric_width());
        for q in 0..table.numeric_width() {
            let (lo, hi) = (0..table.len())
                .map(|i| table.numeric_row(i)[q])
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                    (lo.min(v), hi.max(v))
                });
            let range = hi - lo;
            if range <= 0.0 {
                log::warn!("numeric attribute {q} is constant on the training data; dropped");
                ranges.push(0.0);
            } else {
                ranges.push(range);
            }
        }
        let mut nominal_active = Vec::with_capacity(table.nominal_width());
        for j in 0..table.nominal_width() {
            let first = table.nominal_row(0)[j];
            let varies = (1..table.len()).any(|i| table.nominal_row(i)[j] != first);
            if !varies {
                log::warn!("nominal attribute {j} is constant on the training data; dropped");
            }
            nominal_active.push(varies);
        }
        Ok(Self::with_ranges(
            gamma,
            kind,
            ranges,
            nominal_active,
            table.nominal_levels(),
            nominal_count,
        ))
    }

    /// Builds a config from explicit ranges; zero ranges mark dropped columns.
    pub fn with_ranges(
        gamma: f64,
        kind: SimilarityKind,
        attribute_ranges: Vec<f64>,
        nominal_active: Vec<bool>,
        nominal_levels: &[usize],
        nominal_count: NominalCount,
    ) -> Self {
        let numeric = attribute_ranges.iter().filter(|r| **r > 0.0).count();
        let nominal: usize = nominal_active
            .iter()
            .zip(nominal_levels)
            .filter(|(active, _)| **active)
            .map(|(_, levels)| match nominal_count {
                NominalCount::OneHot => *levels,
                NominalCount::Original => 1,
            })
            .sum();
        SimilarityConfig {
            gamma,
            kind,
            attribute_ranges,
            nominal_active,
            attribute_count_for_averaging: numeric + nominal,
            nominal_count,
        }
    }

    pub fn with_gamma(&self, gamma: f64) -> Self {
        SimilarityConfig {
            gamma,
            ..self.clone()
        }
    }

    fn check_schema(&self, table: &InstanceTable) -> Result<()> {
        if table.numeric_width() != self.attribute_ranges.len()
            || table.nominal_width() != self.nominal_active.len()
        {
            return Err(Error::SchemaMismatch(format!(
                "table has {}+{} attributes, relation was fitted on {}+{}",
                table.numeric_width(),
                table.nominal_width(),
                self.attribute_ranges.len(),
                self.nominal_active.len()
            )));
        }
        Ok(())
    }

    /// `R(a_i, b_j)`, with `a` the first and `b` the second argument.
    pub fn degree(&self, a: &InstanceTable, i: usize, b: &InstanceTable, j: usize) -> f64 {
        let (xa, xb) = (a.numeric_row(i), b.numeric_row(j));
        let (ca, cb) = (a.nominal_row(i), b.nominal_row(j));
        let g = self.gamma;
        let nominal_mismatch = || {
            ca.iter()
                .zip(cb)
                .zip(&self.nominal_active)
                .any(|((p, q), active)| *active && p != q)
        };
        match self.kind {
            SimilarityKind::Supremum | SimilarityKind::Dominance => {
                let mut worst: f64 = 0.0;
                for ((&u, &v), &range) in xa.iter().zip(xb).zip(&self.attribute_ranges) {
                    if range > 0.0 {
                        let gap = match self.kind {
                            SimilarityKind::Dominance => v - u,
                            _ => (u - v).abs(),
                        };
                        worst = worst.max(gap / range);
                    }
                }
                if nominal_mismatch() {
                    worst = worst.max(1.0);
                }
                (1.0 - g * worst).clamp(0.0, 1.0)
            }
            SimilarityKind::Euclidean => {
                let mut sq = 0.0;
                for ((&u, &v), &range) in xa.iter().zip(xb).zip(&self.attribute_ranges) {
                    if range > 0.0 {
                        let d = (u - v) / range;
                        sq += d * d;
                    }
                }
                for ((p, q), active) in ca.iter().zip(cb).zip(&self.nominal_active) {
                    if *active && p != q {
                        sq += 1.0;
                    }
                }
                let q = self.attribute_count_for_averaging.max(1) as f64;
                (1.0 - g * sq.sqrt() / q.sqrt()).max(0.0)
            }
        }
    }
}

impl SimilarityConfig {
    /// The `γ`-free distance behind [`degree`](Self::degree): the largest
    /// range-scaled gap for the supremum kinds, `d(a,b)/√|Q|` for Euclidean.
    pub fn distance(&self, a: &InstanceTable, i: usize, b: &InstanceTable, j: usize) -> f64 {
        let (xa, xb) = (a.numeric_row(i), b.numeric_row(j));
        let (ca, cb) = (a.nominal_row(i), b.nominal_row(j));
        let mismatches = ca
            .iter()
            .zip(cb)
            .zip(&self.nominal_active)
            .filter(|((p, q), active)| **active && p != q)
            .count();
        let scaled = xa
            .iter()
            .zip(xb)
            .zip(&self.attribute_ranges)
            .filter(|(_, range)| **range > 0.0)
            .map(|((&u, &v), &range)| match self.kind {
                SimilarityKind::Dominance => (v - u) / range,
                _ => (u - v).abs() / range,
            });
        match self.kind {
            SimilarityKind::Supremum | SimilarityKind::Dominance => {
                let worst = scaled.fold(0.0f64, f64::max);
                if mismatches > 0 {
                    worst.max(1.0)
                } else {
                    worst
                }
            }
            SimilarityKind::Euclidean => {
                let sq: f64 = scaled.map(|d| d * d).sum::<f64>() + mismatches as f64;
                sq.sqrt() / (self.attribute_count_for_averaging.max(1) as f64).sqrt()
            }
        }
    }
}

/// Per-attribute indiscernibility degree.
pub fn attribute_similarity(config: &SimilarityConfig, a: f64, b: f64, range: f64) -> Result<f64> {
    if range.is_nan() || range <= 0.0 {
        return Err(Error::ConstantAttribute(format!("range {range}")));
    }
    Ok((1.0 - config.gamma * (a - b).abs() / range).max(0.0))
}

/// Per-attribute dominance degree of `a` over `b`.
pub fn attribute_dominance(config: &SimilarityConfig, a: f64, b: f64, range: f64) -> Result<f64> {
    if range.is_nan() || range <= 0.0 {
        return Err(Error::ConstantAttribute(format!("range {range}")));
    }
    Ok((1.0 - config.gamma * (b - a) / range).clamp(0.0, 1.0))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationProperties {
    pub reflexive: bool,
    pub symmetric: bool,
    pub t_transitive: bool,
}

impl RelationProperties {
    pub const EQUIVALENCE: RelationProperties = RelationProperties {
        reflexive: true,
        symmetric: true,
        t_transitive: true,
    };
    pub const PREORDER: RelationProperties = RelationProperties {
        reflexive: true,
        symmetric: false,
        t_transitive: true,
    };
}

/// Dense `rows × cols` matrix of relation degrees.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationMatrix {
    rows: usize,
    cols: usize,
    degrees: Vec<f64>,
    declared: RelationProperties,
}

impl RelationMatrix {
    pub fn from_degrees(
        rows: usize,
        cols: usize,
        degrees: Vec<f64>,
        declared: RelationProperties,
    ) -> Result<Self> {
        if degrees.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                actual: degrees.len(),
            });
        }
        if let Some(&bad) = degrees.iter().find(|d| !(0.0..=1.0).contains(*d)) {
            return Err(Error::Domain {
                what: "relation degree",
                value: bad,
            });
        }
        Ok(RelationMatrix {
            rows,
            cols,
            degrees,
            declared,
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut degrees = vec![0.0; n * n];
        for i in 0..n {
            degrees[i * n + i] = 1.0;
        }
        RelationMatrix {
            rows: n,
            cols: n,
            degrees,
            declared: RelationProperties::EQUIVALENCE,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn declared_properties(&self) -> RelationProperties {
        self.declared
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.degrees[u * self.cols + v]
    }

    pub fn row(&self, u: usize) -> &[f64] {
        &self.degrees[u * self.cols..(u + 1) * self.cols]
    }

    pub fn column(&self, v: usize) -> Vec<f64> {
        (0..self.rows).map(|u| self.get(u, v)).collect()
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn transpose(&self) -> RelationMatrix {
        let mut degrees = vec![0.0; self.degrees.len()];
        for u in 0..self.rows {
            for v in 0..self.cols {
                degrees[v * self.rows + u] = self.get(u, v);
            }
        }
        RelationMatrix {
            rows: self.cols,
            cols: self.rows,
            degrees,
            declared: self.declared,
        }
    }

    /// Applies `φ⁻¹` entrywise. A `T_L`-transitive matrix becomes
    /// `T_{L,φ}`-transitive, which is what the solver reductions need.
    pub fn through_isomorphism(&self, spec: &TripletSpec) -> RelationMatrix {
        if spec.isomorphism.is_identity() {
            return self.clone();
        }
        RelationMatrix {
            degrees: self.degrees.iter().map(|&d| spec.phi_inv(d)).collect(),
            ..self.clone()
        }
    }
}

/// Pairwise relation on the instances of `data`.
pub fn relation_matrix(data: &InstanceTable, config: &SimilarityConfig) -> Result<RelationMatrix> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    config.check_schema(data)?;
    let n = data.len();
    let mut degrees = vec![0.0; n * n];
    let symmetric = config.kind.is_symmetric();
    for u in 0..n {
        degrees[u * n + u] = 1.0;
        for v in 0..n {
            if v == u || (symmetric && v < u) {
                continue;
            }
            let d = config.degree(data, u, data, v);
            degrees[u * n + v] = d;
            if symmetric {
                degrees[v * n + u] = d;
            }
        }
    }
    let declared = if symmetric {
        RelationProperties::EQUIVALENCE
    } else {
        RelationProperties::PREORDER
    };
    Ok(RelationMatrix {
        rows: n,
        cols: n,
        degrees,
        declared,
    })
}

/// `|queries| × |references|` matrix of `R(query, reference)`.
pub fn cross_relation(
    queries: &InstanceTable,
    references: &InstanceTable,
    config: &SimilarityConfig,
) -> Result<RelationMatrix> {
    if !queries.same_schema(references) {
        return Err(Error::SchemaMismatch(
            "query and reference tables have different attributes".into(),
        ));
    }
    config.check_schema(references)?;
    let (n, m) = (queries.len(), references.len());
    let mut degrees = Vec::with_capacity(n * m);
    for u in 0..n {
        for v in 0..m {
            degrees.push(config.degree(queries, u, references, v));
        }
    }
    Ok(RelationMatrix {
        rows: n,
        cols: m,
        degrees,
        declared: RelationProperties::default(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RelationViolation {
    Reflexivity {
        u: usize,
        degree: f64,
    },
    Symmetry {
        u: usize,
        v: usize,
    },
    Transitivity {
        u: usize,
        v: usize,
        w: usize,
        excess: f64,
    },
    NotSquare,
}

/// Brute-force check of reflexivity, symmetry and `T`-transitivity.
pub fn verify_t_equivalence(matrix: &RelationMatrix, spec: &TripletSpec, tol: f64) -> Vec<RelationViolation> {
    verify(matrix, spec, tol, true)
}

/// Same as [`verify_t_equivalence`] without the symmetry requirement.
pub fn verify_t_preorder(matrix: &RelationMatrix, spec: &TripletSpec, tol: f64) -> Vec<RelationViolation> {
    verify(matrix, spec, tol, false)
}

fn verify(matrix: &RelationMatrix, spec: &TripletSpec, tol: f64, symmetric: bool) -> Vec<RelationViolation> {
    if !matrix.is_square() {
        return vec![RelationViolation::NotSquare];
    }
    let n = matrix.rows();
    let mut out = Vec::new();
    for u in 0..n {
        let d = matrix.get(u, u);
        if (d - 1.0).abs() > tol {
            out.push(RelationViolation::Reflexivity { u, degree: d });
        }
        if symmetric {
            for v in u + 1..n {
                if (matrix.get(u, v) - matrix.get(v, u)).abs() > tol {
                    out.push(RelationViolation::Symmetry { u, v });
                }
            }
        }
    }
    for u in 0..n {
        for v in 0..n {
            let ruv = matrix.get(u, v);
            if ruv == 0.0 {
                continue;
            }
            for w in 0..n {
                let excess = spec.t(ruv, matrix.get(v, w)) - matrix.get(u, w);
                if excess > tol {
                    out.push(RelationViolation::Transitivity { u, v, w, excess });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn config(gamma: f64, kind: SimilarityKind) -> SimilarityConfig {
        SimilarityConfig::with_ranges(gamma, kind, vec![1.0], vec![], &[], NominalCount::OneHot)
    }

    #[test]
    fn attribute_level_degrees() {
        let c1 = config(1.0, SimilarityKind::Supremum);
        assert_abs_diff_eq!(
            attribute_similarity(&c1, 3.0, 5.0, 10.0).unwrap(),
            0.8,
            epsilon = 1e-15
        );
        assert_eq!(attribute_similarity(&c1, 4.2, 4.2, 10.0).unwrap(), 1.0);
        let c2 = config(2.0, SimilarityKind::Supremum);
        assert_eq!(attribute_similarity(&c2, 0.0, 6.0, 10.0).unwrap(), 0.0);
        assert!(attribute_similarity(&c1, 0.0, 1.0, 0.0).is_err());

        assert_eq!(attribute_dominance(&c1, 7.0, 3.0, 10.0).unwrap(), 1.0);
        assert_eq!(attribute_dominance(&c1, 0.0, 10.0, 10.0).unwrap(), 0.0);
        let half = config(0.5, SimilarityKind::Dominance);
        assert_abs_diff_eq!(
            attribute_dominance(&half, 1.0, 5.0, 10.0).unwrap(),
            0.8,
            epsilon = 1e-15
        );
        assert!(attribute_dominance(&c1, 0.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn small_matrices() {
        let one = InstanceTable::from_rows(&[vec![0.3]]).unwrap();
        let m = relation_matrix(&one, &config(1.0, SimilarityKind::Euclidean)).unwrap();
        assert_eq!(m.degrees(), &[1.0]);

        let same = InstanceTable::from_rows(&[vec![0.3, 2.0], vec![0.3, 2.0]]).unwrap();
        let c = SimilarityConfig::with_ranges(
            1.0,
            SimilarityKind::Supremum,
            vec![1.0, 1.0],
            vec![],
            &[],
            NominalCount::OneHot,
        );
        assert!(relation_matrix(&same, &c)
            .unwrap()
            .degrees()
            .iter()
            .all(|d| *d == 1.0));

        let ends = InstanceTable::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
        let m = relation_matrix(&ends, &config(1.0, SimilarityKind::Supremum)).unwrap();
        assert_eq!(m.get(0, 1), 0.0);
        assert_eq!(m.get(1, 0), 0.0);
        assert!(relation_matrix(&InstanceTable::from_rows(&[]).unwrap(), &c).is_err());
    }

    #[test]
    fn cross_relation_examples() {
        let c = config(1.0, SimilarityKind::Supremum);
        let refs = InstanceTable::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
        let q = InstanceTable::from_rows(&[vec![0.4], vec![1.0]]).unwrap();
        let m = cross_relation(&q, &refs, &c).unwrap();
        assert_abs_diff_eq!(m.get(0, 0), 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(m.get(0, 1), 0.4, epsilon = 1e-15);
        assert_eq!(m.get(1, 1), 1.0);
        assert_eq!(cross_relation(&refs, &q, &c).unwrap(), {
            let mut t = m.transpose();
            t.declared = RelationProperties::default();
            t
        });
        let wide = InstanceTable::from_rows(&[vec![0.0, 1.0]]).unwrap();
        assert!(cross_relation(&wide, &refs, &c).is_err());
    }

    #[test]
    fn nominal_attributes_count_one_hot_columns() {
        // one numeric column, one nominal with 3 categories
        let t = InstanceTable::new(2, 1, vec![0.0, 0.0], vec![3], vec![0, 2]).unwrap();
        let c = SimilarityConfig::fit(&t, 1.0, SimilarityKind::Euclidean, NominalCount::OneHot).unwrap();
        // numeric column is constant and dropped, nominal contributes 3 to |Q|
        assert_eq!(c.attribute_count_for_averaging, 3);
        let m = relation_matrix(&t, &c).unwrap();
        assert_abs_diff_eq!(m.get(0, 1), 1.0 - 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        let c = c.with_gamma(0.5);
        let c = SimilarityConfig::with_ranges(
            c.gamma,
            c.kind,
            c.attribute_ranges.clone(),
            c.nominal_active.clone(),
            &[3],
            NominalCount::Original,
        );
        assert_eq!(c.attribute_count_for_averaging, 1);
        assert_eq!(relation_matrix(&t, &c).unwrap().get(0, 1), 0.5);
    }

    #[test]
    fn verification_reports() {
        let spec = TripletSpec::LUKASIEWICZ;
        assert!(verify_t_equivalence(&RelationMatrix::identity(4), &spec, 1e-12).is_empty());
        let m = RelationMatrix::from_degrees(
            3,
            3,
            vec![1.0, 1.0, 0.5, 1.0, 1.0, 1.0, 0.5, 1.0, 1.0],
            RelationProperties::EQUIVALENCE,
        )
        .unwrap();
        let report = verify_t_equivalence(&m, &spec, 1e-12);
        assert!(report.contains(&RelationViolation::Transitivity {
            u: 0,
            v: 1,
            w: 2,
            excess: 0.5
        }));
        assert!(RelationMatrix::from_degrees(1, 1, vec![1.5], RelationProperties::default()).is_err());
    }

    #[test]
    fn dominance_is_a_preorder() {
        let t = InstanceTable::from_rows(&[vec![0.1, 0.7], vec![0.4, 0.2], vec![0.9, 0.9], vec![0.5, 0.5]])
            .unwrap();
        let c = SimilarityConfig::fit(&t, 1.3, SimilarityKind::Dominance, NominalCount::OneHot).unwrap();
        let m = relation_matrix(&t, &c).unwrap();
        let spec = TripletSpec::LUKASIEWICZ;
        assert!(verify_t_preorder(&m, &spec, 1e-12).is_empty());
        assert!(!verify_t_equivalence(&m, &spec, 1e-12).is_empty());
        assert_eq!(m.declared_properties(), RelationProperties::PREORDER);
    }

    #[test]
    fn distances_by_kind() {
        let t = InstanceTable::new(3, 2, vec![0.0, 0.0, 3.0, 4.0, 3.0, 4.0], vec![2], vec![0, 1, 0]).unwrap();
        let make = |kind| {
            SimilarityConfig::with_ranges(
                1.0,
                kind,
                vec![10.0, 10.0],
                vec![true],
                &[2],
                NominalCount::OneHot,
            )
        };

        let euclid = make(SimilarityKind::Euclidean);
        // |Q| = 2 numeric + 2 one-hot columns
        assert_abs_diff_eq!(
            euclid.distance(&t, 0, &t, 1),
            1.25f64.sqrt() / 2.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            euclid.distance(&t, 0, &t, 2),
            0.25f64.sqrt() / 2.0,
            epsilon = 1e-15
        );
        assert_eq!(euclid.distance(&t, 1, &t, 1), 0.0);

        let sup = make(SimilarityKind::Supremum);
        assert_eq!(sup.distance(&t, 0, &t, 1), 1.0);
        assert_abs_diff_eq!(sup.distance(&t, 0, &t, 2), 0.4, epsilon = 1e-15);

        let dom = make(SimilarityKind::Dominance);
        assert_abs_diff_eq!(dom.distance(&t, 0, &t, 2), 0.4, epsilon = 1e-15);
        assert_eq!(dom.distance(&t, 2, &t, 0), 0.0);

        let dropped = SimilarityConfig::with_ranges(
            1.0,
            SimilarityKind::Supremum,
            vec![0.0, 10.0],
            vec![false],
            &[2],
            NominalCount::OneHot,
        );
        assert_abs_diff_eq!(dropped.distance(&t, 0, &t, 1), 0.4, epsilon = 1e-15);
    }
}
