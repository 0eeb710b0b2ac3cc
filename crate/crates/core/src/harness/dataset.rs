//! CSV ingestion with per-column type inference.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttributeKind {
    Numeric,
    Nominal { categories: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Attribute {
    pub name: String,
    pub kind: AttributeKind,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Value {
    Number(f64),
    /// Index into the attribute's category list.
    Category(u32),
}

/// A labelled (or unlabelled) table of raw attribute values.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub attributes: Vec<Attribute>,
    pub rows: Vec<Vec<Value>>,
    /// Class id per row; empty when the file has no target column.
    pub classes: Vec<usize>,
    /// Class names in order of first appearance.
    pub class_names: Vec<String>,
    pub target: Option<String>,
    /// Rows skipped because of missing values.
    pub dropped_rows: usize,
}

const MISSING: [&str; 6] = ["", "?", "na", "nan", "null", "none"];

fn is_missing(cell: &str) -> bool {
    let c = cell.trim();
    MISSING.iter().any(|m| c.eq_ignore_ascii_case(m))
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes()];
        for &c in &self.classes {
            counts[c] += 1;
        }
        counts
    }

    /// The given rows (duplicates allowed), with the schema unchanged.
    pub fn subset(&self, rows: &[usize]) -> Dataset {
        Dataset {
            rows: rows.iter().map(|&r| self.rows[r].clone()).collect(),
            classes: if self.classes.is_empty() {
                Vec::new()
            } else {
                rows.iter().map(|&r| self.classes[r]).collect()
            },
            dropped_rows: 0,
            ..self.clone()
        }
    }

    pub fn category_name(&self, attribute: usize, value: Value) -> Option<&str> {
        match (&self.attributes[attribute].kind, value) {
            (AttributeKind::Nominal { categories }, Value::Category(c)) => {
                categories.get(c as usize).map(String::as_str)
            }
            _ => None,
        }
    }

    /// Builds a dataset from string records.
    ///
    /// Columns named in `nominal` are categorical; other columns are numeric
    /// when every present value parses as a finite number. Rows with a
    /// missing value are dropped. Class ids follow first appearance.
    pub fn from_records(
        name: &str,
        header: &[String],
        records: &[Vec<String>],
        target: Option<&str>,
        nominal: &[String],
    ) -> Result<Dataset> {
        let target_index = match target {
            Some(t) => Some(
                header
                    .iter()
                    .position(|h| h == t)
                    .ok_or_else(|| Error::MissingColumn(t.to_string()))?,
            ),
            None => None,
        };
        for n in nominal {
            if !header.contains(n) {
                return Err(Error::MissingColumn(n.clone()));
            }
        }
        for (i, r) in records.iter().enumerate() {
            if r.len() != header.len() {
                return Err(Error::SchemaMismatch(format!(
                    "record {} has {} fields, header has {}",
                    i + 1,
                    r.len(),
                    header.len()
                )));
            }
        }
        let complete: Vec<&Vec<String>> = records
            .iter()
            .filter(|r| !r.iter().any(|c| is_missing(c)))
            .collect();
        let dropped_rows = records.len() - complete.len();
        if dropped_rows > 0 {
            log::warn!("{name}: dropped {dropped_rows} rows with missing values");
        }
        if complete.is_empty() {
            return Err(Error::EmptyDataset);
        }

        let mut attributes = Vec::new();
        let mut columns: Vec<Vec<Value>> = Vec::new();
        for (j, col_name) in header.iter().enumerate() {
            if Some(j) == target_index {
                continue;
            }
            let cells: Vec<&str> = complete.iter().map(|r| r[j].trim()).collect();
            let numbers: Option<Vec<f64>> = if nominal.contains(col_name) {
                None
            } else {
                cells
                    .iter()
                    .map(|c| c.parse::<f64>().ok().filter(|v| v.is_finite()))
                    .collect()
            };
            match numbers {
                Some(values) => {
                    attributes.push(Attribute {
                        name: col_name.clone(),
                        kind: AttributeKind::Numeric,
                    });
                    columns.push(values.into_iter().map(Value::Number).collect());
                }
                None => {
                    let mut categories: Vec<String> = Vec::new();
                    let values = cells
                        .iter()
                        .map(|c| {
                            let idx = categories.iter().position(|k| k == c).unwrap_or_else(|| {
                                categories.push(c.to_string());
                                categories.len() - 1
                            });
                            Value::Category(idx as u32)
                        })
                        .collect();
                    attributes.push(Attribute {
                        name: col_name.clone(),
                        kind: AttributeKind::Nominal { categories },
                    });
                    columns.push(values);
                }
            }
        }

        let mut class_names: Vec<String> = Vec::new();
        let classes = match target_index {
            Some(t) => complete
                .iter()
                .map(|r| {
                    let label = r[t].trim();
                    class_names.iter().position(|k| k == label).unwrap_or_else(|| {
                        class_names.push(label.to_string());
                        class_names.len() - 1
                    })
                })
                .collect(),
            None => Vec::new(),
        };
        if target.is_some() && class_names.len() < 2 {
            return Err(Error::SingleClass(class_names.len()));
        }

        let rows = (0..complete.len())
            .map(|i| columns.iter().map(|c| c[i]).collect())
            .collect();
        Ok(Dataset {
            name: name.to_string(),
            attributes,
            rows,
            classes,
            class_names,
            target: target.map(str::to_string),
            dropped_rows,
        })
    }
}

/// Reads a headed CSV file. See [`Dataset::from_records`] for typing rules.
pub fn load_csv(path: &Path, target: Option<&str>, nominal: &[String]) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => Error::Io {
                path: path.to_path_buf(),
                source: std::io::Error::other(e.to_string()),
            },
            _ => Error::Csv(e),
        })?;
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let mut records = Vec::new();
    for record in reader.records() {
        records.push(record?.iter().map(str::to_string).collect());
    }
    let name = path
        .file_stem()
        .map_or_else(|| "dataset".to_string(), |s| s.to_string_lossy().into_owned());
    Dataset::from_records(&name, &header, &records, target, nominal)
}
