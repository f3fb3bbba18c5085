//! k-nearest-neighbor classifier with Euclidean distance and vote-fraction
//! probabilities.

use alloc::vec::Vec;

use crate::dataset::{ClassLabel, FeatureMatrix, LabeledDataset, NUM_CLASSES};
use crate::error::{Error, Result};
use crate::models::ClassProbabilities;

pub const DEFAULT_K: usize = 9;

#[derive(Debug, Clone)]
pub struct KnnClassifier {
    k: usize,
    train_features: FeatureMatrix,
    train_labels: Vec<ClassLabel>,
}

/// Stores the training set verbatim. Requires 1 <= k <= n_train and a fully
/// observed training matrix.
pub fn knn_fit(train: &LabeledDataset, k: usize) -> Result<KnnClassifier> {
    if k == 0 {
        return Err(Error::InvalidParameter { what: "knn k must be >= 1".into() });
    }
    if k > train.n_rows() {
        return Err(Error::KTooLarge { k, n: train.n_rows() });
    }
    if train.features.has_missing() {
        return Err(Error::InvalidParameter { what: "knn requires fully observed training data".into() });
    }
    Ok(KnnClassifier {
        k,
        train_features: train.features.clone(),
        train_labels: train.labels.clone(),
    })
}

impl KnnClassifier {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_train(&self) -> usize {
        self.train_labels.len()
    }

    pub(crate) fn parts(&self) -> (usize, &FeatureMatrix, &[ClassLabel]) {
        (self.k, &self.train_features, &self.train_labels)
    }

    pub(crate) fn from_parts(
        k: usize,
        train_features: FeatureMatrix,
        train_labels: Vec<ClassLabel>,
    ) -> KnnClassifier {
        KnnClassifier { k, train_features, train_labels }
    }

    /// Vote fractions among the k nearest training rows. Distance ties break
    /// toward the lower training-row index.
    pub fn predict_proba(&self, x: &[f64]) -> ClassProbabilities {
        debug_assert_eq!(x.len(), self.train_features.n_cols());
        let mut ranked: Vec<(f64, usize)> = (0..self.n_train())
            .map(|i| {
                let row = self.train_features.row(i);
                let d2: f64 = row.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
                (d2, i)
            })
            .collect();
        ranked.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));

        let mut votes = [0usize; NUM_CLASSES];
        for &(_, i) in ranked.iter().take(self.k) {
            votes[self.train_labels[i].id()] += 1;
        }
        let mut probas = [0.0; NUM_CLASSES];
        for c in 0..NUM_CLASSES {
            probas[c] = votes[c] as f64 / self.k as f64;
        }
        probas
    }
}
