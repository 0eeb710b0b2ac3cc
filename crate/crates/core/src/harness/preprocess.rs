//! Min–max scaling and categorical coding, fitted on a training split.

use serde::{Deserialize, Serialize};

use super::dataset::{AttributeKind, Dataset, Value};
use crate::error::{Error, Result};
use crate::table::InstanceTable;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ColumnStats {
    Numeric {
        name: String,
        min: f64,
        max: f64,
    },
    /// Categories seen in the fit split; their count is the one-hot width.
    Nominal {
        name: String,
        categories: Vec<String>,
    },
}

impl ColumnStats {
    pub fn name(&self) -> &str {
        match self {
            ColumnStats::Numeric { name, .. } | ColumnStats::Nominal { name, .. } => name,
        }
    }
}

/// Frozen preprocessing statistics. Attributes constant on the fit split
/// are left out.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Preprocessor {
    pub columns: Vec<ColumnStats>,
}

impl Preprocessor {
    pub fn fit(dataset: &Dataset, rows: &[usize]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let columns = dataset
            .attributes
            .iter()
            .enumerate()
            .filter_map(|(j, attr)| match &attr.kind {
                AttributeKind::Numeric => {
                    let (min, max) = rows
                        .iter()
                        .map(|&r| match dataset.rows[r][j] {
                            Value::Number(v) => v,
                            Value::Category(_) => unreachable!("numeric column holds numbers"),
                        })
                        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                            (lo.min(v), hi.max(v))
                        });
                    if max <= min {
                        log::warn!(
                            "dropping attribute `{}`: constant on the training split",
                            attr.name
                        );
                        return None;
                    }
                    Some(ColumnStats::Numeric {
                        name: attr.name.clone(),
                        min,
                        max,
                    })
                }
                AttributeKind::Nominal { .. } => {
                    let mut categories: Vec<String> = Vec::new();
                    for &r in rows {
                        let name = dataset
                            .category_name(j, dataset.rows[r][j])
                            .expect("nominal column holds categories");
                        if !categories.iter().any(|c| c == name) {
                            categories.push(name.to_string());
                        }
                    }
                    if categories.len() < 2 {
                        log::warn!(
                            "dropping attribute `{}`: constant on the training split",
                            attr.name
                        );
                        return None;
                    }
                    Some(ColumnStats::Nominal {
                        name: attr.name.clone(),
                        categories,
                    })
                }
            })
            .collect::<Vec<_>>();
        if columns.is_empty() {
            return Err(Error::SchemaMismatch(
                "every attribute is constant on the fit split".into(),
            ));
        }
        Ok(Preprocessor { columns })
    }

    pub fn nominal_names(&self) -> Vec<String> {
        self.columns
            .iter()
            .filter(|c| matches!(c, ColumnStats::Nominal { .. }))
            .map(|c| c.name().to_string())
            .collect()
    }

    /// Scales numeric attributes by the fitted range (no clamping) and maps
    /// categories to their fitted index. Categories unseen at fit time get
    /// an index past the fitted ones. Columns are matched by name.
    pub fn transform(&self, dataset: &Dataset, rows: &[usize]) -> Result<InstanceTable> {
        let lookup: Vec<usize> = self
            .columns
            .iter()
            .map(|c| {
                dataset
                    .attributes
                    .iter()
                    .position(|a| a.name == c.name())
                    .ok_or_else(|| Error::MissingColumn(c.name().to_string()))
            })
            .collect::<Result<_>>()?;
        let numeric_width = self
            .columns
            .iter()
            .filter(|c| matches!(c, ColumnStats::Numeric { .. }))
            .count();
        let mut numeric = Vec::with_capacity(rows.len() * numeric_width);
        let mut nominal = Vec::new();
        let mut levels = Vec::new();
        for c in &self.columns {
            if let ColumnStats::Nominal { categories, .. } = c {
                levels.push(categories.len());
            }
        }
        for &r in rows {
            for (c, &j) in self.columns.iter().zip(&lookup) {
                match (c, dataset.rows[r][j]) {
                    (ColumnStats::Numeric { min, max, .. }, Value::Number(v)) => {
                        numeric.push((v - min) / (max - min));
                    }
                    (ColumnStats::Nominal { categories, .. }, value @ Value::Category(_)) => {
                        let name = dataset.category_name(j, value).expect("category in range");
                        let idx = categories
                            .iter()
                            .position(|k| k == name)
                            .unwrap_or(categories.len());
                        nominal.push(idx as u32);
                    }
                    (c, _) => {
                        return Err(Error::SchemaMismatch(format!(
                            "attribute `{}` has a different type than at fit time",
                            c.name()
                        )));
                    }
                }
            }
        }
        InstanceTable::new(rows.len(), numeric_width, numeric, levels, nominal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data() -> Dataset {
        let header: Vec<String> = ["x", "c", "y"].iter().map(|s| s.to_string()).collect();
        let records: Vec<Vec<String>> = [
            ["0", "r", "p"],
            ["10", "g", "q"],
            ["5", "b", "p"],
            ["12", "w", "q"],
        ]
        .iter()
        .map(|r| r.iter().map(|s| s.to_string()).collect())
        .collect();
        Dataset::from_records("t", &header, &records, Some("y"), &[]).unwrap()
    }

    #[test]
    fn scaling_uses_the_fit_split() {
        let d = data();
        let p = Preprocessor::fit(&d, &[0, 1, 2]).unwrap();
        let t = p.transform(&d, &[0, 1, 2, 3]).unwrap();
        assert_eq!(t.numeric_row(2), &[0.5]);
        assert_eq!(t.numeric_row(3), &[1.2]);
        assert_eq!(t.nominal_levels(), &[3]);
        // unseen category sits past the fitted ones
        assert_eq!(t.nominal_row(3), &[3]);
        assert_eq!(p.nominal_names(), vec!["c".to_string()]);
        assert!(Preprocessor::fit(&d, &[]).is_err());
        // a repeated row leaves every attribute constant
        assert!(Preprocessor::fit(&d, &[0, 0]).is_err());
        let q = Preprocessor::fit(&d, &[0, 3]).unwrap();
        assert_eq!(q.columns.len(), 2);
    }
}
