//! Self-describing JSON model documents.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use super::preprocess::Preprocessor;
use crate::baselines::{KfrnnModel, KnnModel};
use crate::classifier::{FgacModel, OwaPredictionConfig, Prediction};
use crate::error::{Error, Result};
use crate::table::InstanceTable;

pub const FORMAT: &str = "fgac-model";
pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum StoredModel {
    Fgac {
        model: FgacModel,
        owa: Option<OwaPredictionConfig>,
    },
    Knn {
        model: KnnModel,
    },
    Kfrnn {
        model: KfrnnModel,
    },
}

impl StoredModel {
    pub fn n_classes(&self) -> usize {
        match self {
            StoredModel::Fgac { model, .. } => model.n_classes,
            StoredModel::Knn { model } => model.n_classes,
            StoredModel::Kfrnn { model } => model.n_classes,
        }
    }

    /// kNN reports a one-hot degree vector.
    pub fn predict(&self, queries: &InstanceTable) -> Result<Vec<Prediction>> {
        match self {
            StoredModel::Fgac { model, owa } => model.predict(queries, owa.as_ref()),
            StoredModel::Knn { model } => Ok(model
                .predict(queries)?
                .into_iter()
                .map(|class| {
                    let mut degrees = vec![0.0; model.n_classes];
                    degrees[class] = 1.0;
                    Prediction { class, degrees }
                })
                .collect()),
            StoredModel::Kfrnn { model } => model.predict(queries),
        }
    }
}

/// Everything needed to predict raw rows: preprocessing statistics, class
/// names and the fitted model with its training table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub format: String,
    pub version: u32,
    pub target: Option<String>,
    pub class_names: Vec<String>,
    pub preprocessing: Preprocessor,
    pub model: StoredModel,
}

impl ModelDocument {
    pub fn new(
        target: Option<String>,
        class_names: Vec<String>,
        preprocessing: Preprocessor,
        model: StoredModel,
    ) -> Self {
        ModelDocument {
            format: FORMAT.to_string(),
            version: VERSION,
            target,
            class_names,
            preprocessing,
            model,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDocument = serde_json::from_str(text)?;
        if doc.format != FORMAT {
            return Err(Error::Model(format!("unexpected format `{}`", doc.format)));
        }
        if doc.version != VERSION {
            return Err(Error::Model(format!("unsupported version {}", doc.version)));
        }
        if doc.class_names.len() != doc.model.n_classes() {
            return Err(Error::Model(format!(
                "{} class names for a model with {} classes",
                doc.class_names.len(),
                doc.model.n_classes()
            )));
        }
        Ok(doc)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Preprocesses `rows` of `dataset` with the stored statistics.
    pub fn transform(&self, dataset: &Dataset, rows: &[usize]) -> Result<InstanceTable> {
        self.preprocessing.transform(dataset, rows)
    }

    pub fn predict(&self, dataset: &Dataset) -> Result<Vec<Prediction>> {
        let rows: Vec<usize> = (0..dataset.len()).collect();
        self.model.predict(&self.transform(dataset, &rows)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::{self, FitConfig};

    #[test]
    fn round_trip_is_exact() {
        let header: Vec<String> = ["a", "b", "y"].iter().map(|s| s.to_string()).collect();
        let records: Vec<Vec<String>> = (0..16)
            .map(|i| {
                vec![
                    (i as f64 * 0.37).sin().to_string(),
                    ["u", "v", "w"][i % 3].to_string(),
                    (i % 2).to_string(),
                ]
            })
            .collect();
        let d = Dataset::from_records("t", &header, &records, Some("y"), &[]).unwrap();
        let rows: Vec<usize> = (0..d.len()).collect();
        let pre = Preprocessor::fit(&d, &rows).unwrap();
        let table = pre.transform(&d, &rows).unwrap();
        let model = classifier::fit(
            &table,
            &d.classes,
            &FitConfig {
                gamma: 1.7,
                ..FitConfig::default()
            },
        )
        .unwrap();
        let doc = ModelDocument::new(
            Some("y".into()),
            d.class_names.clone(),
            pre,
            StoredModel::Fgac { model, owa: None },
        );
        let back = ModelDocument::from_json(&doc.to_json().unwrap()).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.predict(&d).unwrap(), doc.predict(&d).unwrap());

        let mut wrong = doc.clone();
        wrong.format = "other".into();
        assert!(ModelDocument::from_json(&wrong.to_json().unwrap()).is_err());
    }
}
