use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Preprocessed condition attributes of a set of instances.
///
/// Numeric attributes are stored row-major as reals; nominal attributes as
/// category indices. `nominal_levels[j]` is the number of categories of
/// nominal column `j`, i.e. its one-hot width.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceTable {
    n_rows: usize,
    numeric_width: usize,
    numeric: Vec<f64>,
    nominal_levels: Vec<usize>,
    nominal: Vec<u32>,
}

impl InstanceTable {
    pub fn new(
        n_rows: usize,
        numeric_width: usize,
        numeric: Vec<f64>,
        nominal_levels: Vec<usize>,
        nominal: Vec<u32>,
    ) -> Result<Self> {
        if numeric.len() != n_rows * numeric_width {
            return Err(Error::LengthMismatch {
                expected: n_rows * numeric_width,
                actual: numeric.len(),
            });
        }
        if nominal.len() != n_rows * nominal_levels.len() {
            return Err(Error::LengthMismatch {
                expected: n_rows * nominal_levels.len(),
                actual: nominal.len(),
            });
        }
        if numeric.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite attribute value".into()));
        }
        Ok(InstanceTable {
            n_rows,
            numeric_width,
            numeric,
            nominal_levels,
            nominal,
        })
    }

    /// A purely numeric table from row vectors.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let width = rows.first().map_or(0, Vec::len);
        let mut numeric = Vec::with_capacity(rows.len() * width);
        for row in rows {
            if row.len() != width {
                return Err(Error::LengthMismatch {
                    expected: width,
                    actual: row.len(),
                });
            }
            numeric.extend_from_slice(row);
        }
        InstanceTable::new(rows.len(), width, numeric, Vec::new(), Vec::new())
    }

    pub fn len(&self) -> usize {
        self.n_rows
    }

    pub fn is_empty(&self) -> bool {
        self.n_rows == 0
    }

    pub fn numeric_width(&self) -> usize {
        self.numeric_width
    }

    pub fn nominal_width(&self) -> usize {
        self.nominal_levels.len()
    }

    pub fn nominal_levels(&self) -> &[usize] {
        &self.nominal_levels
    }

    #[inline]
    pub fn numeric_row(&self, i: usize) -> &[f64] {
        &self.numeric[i * self.numeric_width..(i + 1) * self.numeric_width]
    }

    #[inline]
    pub fn nominal_row(&self, i: usize) -> &[u32] {
        let w = self.nominal_levels.len();
        &self.nominal[i * w..(i + 1) * w]
    }

    /// New table holding the given rows, in order (duplicates allowed).
    pub fn select(&self, rows: &[usize]) -> InstanceTable {
        let mut numeric = Vec::with_capacity(rows.len() * self.numeric_width);
        let mut nominal = Vec::with_capacity(rows.len() * self.nominal_levels.len());
        for &r in rows {
            numeric.extend_from_slice(self.numeric_row(r));
            nominal.extend_from_slice(self.nominal_row(r));
        }
        InstanceTable {
            n_rows: rows.len(),
            numeric_width: self.numeric_width,
            numeric,
            nominal_levels: self.nominal_levels.clone(),
            nominal,
        }
    }

    pub fn same_schema(&self, other: &InstanceTable) -> bool {
        self.numeric_width == other.numeric_width && self.nominal_levels == other.nominal_levels
    }

    /// Multiplies every numeric value by `factor`.
    pub fn scaled(&self, factor: f64) -> InstanceTable {
        let mut out = self.clone();
        out.numeric.iter_mut().for_each(|v| *v *= factor);
        out
    }
}
