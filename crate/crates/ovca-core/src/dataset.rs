//! Dataset containers: feature matrix with an explicit missing marker,
//! class labels, and the labeled-dataset pairing.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::schema::Schema;

pub const NUM_CLASSES: usize = 3;

/// Target classes, encoded in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassLabel {
    Negative = 0,
    AbnormalSuspicious = 1,
    AbnormalNonSuspicious = 2,
}

impl ClassLabel {
    pub const ALL: [ClassLabel; NUM_CLASSES] = [
        ClassLabel::Negative,
        ClassLabel::AbnormalSuspicious,
        ClassLabel::AbnormalNonSuspicious,
    ];

    pub fn id(self) -> usize {
        self as usize
    }

    pub fn from_id(id: usize) -> Option<ClassLabel> {
        ClassLabel::ALL.get(id).copied()
    }

    pub fn display(self) -> &'static str {
        match self {
            ClassLabel::Negative => "Negative",
            ClassLabel::AbnormalSuspicious => "Abnormal, suspicious",
            ClassLabel::AbnormalNonSuspicious => "Abnormal, non-suspicious",
        }
    }

    pub fn from_display(s: &str) -> Option<ClassLabel> {
        ClassLabel::ALL.iter().copied().find(|c| c.display() == s)
    }
}

/// Row-major numeric table bound to a schema.
///
/// Missing values are stored as NaN internally but that never leaks through
/// the public API: reads go through [`FeatureMatrix::get`], which returns
/// `None` for a missing cell, or [`FeatureMatrix::is_missing`].
#[derive(Debug, Clone)]
pub struct FeatureMatrix {
    schema: Schema,
    n_rows: usize,
    values: Vec<f64>,
}

// bitwise equality so missing markers (NaN) compare equal to themselves
impl PartialEq for FeatureMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.schema == other.schema
            && self.n_rows == other.n_rows
            && self.values.len() == other.values.len()
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

const MISSING: f64 = f64::NAN;

impl FeatureMatrix {
    /// Builds a matrix from row-major cells, `None` marking missing values.
    pub fn from_cells(schema: Schema, n_rows: usize, cells: Vec<Option<f64>>) -> Result<Self> {
        if cells.len() != n_rows * schema.len() {
            return Err(Error::LengthMismatch {
                left: cells.len(),
                right: n_rows * schema.len(),
            });
        }
        let mut values = Vec::with_capacity(cells.len());
        for (i, cell) in cells.into_iter().enumerate() {
            match cell {
                Some(v) if v.is_finite() => values.push(v),
                Some(_) => {
                    return Err(Error::InvalidParameter {
                        what: alloc::format!("non-finite value at flat index {i}"),
                    })
                }
                None => values.push(MISSING),
            }
        }
        Ok(FeatureMatrix { schema, n_rows, values })
    }

    /// Convenience constructor for fully observed row-major data.
    pub fn dense(schema: Schema, rows: &[Vec<f64>]) -> Result<Self> {
        let n_rows = rows.len();
        let mut cells = Vec::with_capacity(n_rows * schema.len());
        for row in rows {
            if row.len() != schema.len() {
                return Err(Error::LengthMismatch { left: row.len(), right: schema.len() });
            }
            cells.extend(row.iter().map(|&v| Some(v)));
        }
        FeatureMatrix::from_cells(schema, n_rows, cells)
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.schema.len()
    }

    pub fn is_missing(&self, row: usize, col: usize) -> bool {
        self.values[row * self.n_cols() + col].is_nan()
    }

    /// Observed value at (row, col), or `None` if the cell is missing.
    pub fn get(&self, row: usize, col: usize) -> Option<f64> {
        let v = self.values[row * self.n_cols() + col];
        if v.is_nan() {
            None
        } else {
            Some(v)
        }
    }

    pub fn missing_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_nan()).count()
    }

    pub fn has_missing(&self) -> bool {
        self.values.iter().any(|v| v.is_nan())
    }

    /// A fully observed row as a slice. Panics if any cell is missing.
    pub fn row(&self, row: usize) -> &[f64] {
        let w = self.n_cols();
        let slice = &self.values[row * w..(row + 1) * w];
        debug_assert!(slice.iter().all(|v| !v.is_nan()));
        slice
    }

    /// Row cells as options, missing-aware.
    pub fn row_cells(&self, row: usize) -> Vec<Option<f64>> {
        (0..self.n_cols()).map(|c| self.get(row, c)).collect()
    }

    /// New matrix containing the given rows, in the given order.
    pub fn take_rows(&self, indices: &[usize]) -> FeatureMatrix {
        let w = self.n_cols();
        let mut values = Vec::with_capacity(indices.len() * w);
        for &r in indices {
            values.extend_from_slice(&self.values[r * w..(r + 1) * w]);
        }
        FeatureMatrix {
            schema: self.schema.clone(),
            n_rows: indices.len(),
            values,
        }
    }

    /// New matrix keeping only the given columns (ascending indices).
    pub fn select_columns(&self, cols: &[usize]) -> FeatureMatrix {
        let w = self.n_cols();
        let mut values = Vec::with_capacity(self.n_rows * cols.len());
        for r in 0..self.n_rows {
            for &c in cols {
                values.push(self.values[r * w + c]);
            }
        }
        FeatureMatrix {
            schema: self.schema.select(cols),
            n_rows: self.n_rows,
            values,
        }
    }

    /// Appends fully observed rows; schema widths must match.
    pub fn append_rows(&self, rows: &[Vec<f64>]) -> Result<FeatureMatrix> {
        let mut out = self.clone();
        for row in rows {
            if row.len() != self.n_cols() {
                return Err(Error::LengthMismatch { left: row.len(), right: self.n_cols() });
            }
            out.values.extend_from_slice(row);
            out.n_rows += 1;
        }
        Ok(out)
    }

    pub(crate) fn raw(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn from_raw(schema: Schema, n_rows: usize, values: Vec<f64>) -> FeatureMatrix {
        debug_assert_eq!(values.len(), n_rows * schema.len());
        FeatureMatrix { schema, n_rows, values }
    }
}

/// Feature matrix plus an aligned class-label vector.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub features: FeatureMatrix,
    pub labels: Vec<ClassLabel>,
}

impl LabeledDataset {
    pub fn new(features: FeatureMatrix, labels: Vec<ClassLabel>) -> Result<Self> {
        if labels.len() != features.n_rows() {
            return Err(Error::LengthMismatch {
                left: labels.len(),
                right: features.n_rows(),
            });
        }
        Ok(LabeledDataset { features, labels })
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn take_rows(&self, indices: &[usize]) -> LabeledDataset {
        LabeledDataset {
            features: self.features.take_rows(indices),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    /// Per-class row counts, indexed by class id. Sums to `n_rows`.
    pub fn class_counts(&self) -> [usize; NUM_CLASSES] {
        let mut counts = [0usize; NUM_CLASSES];
        for label in &self.labels {
            counts[label.id()] += 1;
        }
        counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn label_mapping_is_bijective() {
        for c in ClassLabel::ALL {
            assert_eq!(ClassLabel::from_id(c.id()), Some(c));
            assert_eq!(ClassLabel::from_display(c.display()), Some(c));
        }
        assert_eq!(ClassLabel::from_id(3), None);
        assert_eq!(ClassLabel::from_display("negative"), None);
    }

    #[test]
    fn missing_marker_not_observable_as_number() {
        let schema = Schema::canonical().select(&[0, 1]);
        let m = FeatureMatrix::from_cells(schema, 2, vec![Some(1.0), None, Some(3.0), Some(4.0)])
            .unwrap();
        assert!(m.is_missing(0, 1));
        assert_eq!(m.get(0, 1), None);
        assert_eq!(m.get(1, 0), Some(3.0));
        assert_eq!(m.missing_count(), 1);
    }

    #[test]
    fn non_finite_input_rejected() {
        let schema = Schema::canonical().select(&[0]);
        assert!(FeatureMatrix::from_cells(schema, 1, vec![Some(f64::INFINITY)]).is_err());
    }

    #[test]
    fn class_counts_sum_to_rows() {
        let schema = Schema::canonical().select(&[0]);
        let m = FeatureMatrix::dense(schema, &[vec![1.0], vec![2.0], vec![3.0], vec![4.0]]).unwrap();
        let d = LabeledDataset::new(
            m,
            vec![
                ClassLabel::Negative,
                ClassLabel::Negative,
                ClassLabel::AbnormalSuspicious,
                ClassLabel::AbnormalNonSuspicious,
            ],
        )
        .unwrap();
        assert_eq!(d.class_counts(), [2, 1, 1]);
    }

    #[test]
    fn empty_dataset_counts_are_zero() {
        let schema = Schema::canonical().select(&[0]);
        let m = FeatureMatrix::dense(schema, &[]).unwrap();
        let d = LabeledDataset::new(m, vec![]).unwrap();
        assert_eq!(d.class_counts(), [0, 0, 0]);
    }
}
