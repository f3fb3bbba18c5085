//! The three classifiers: k-nearest-neighbor voting, random forest, and
//! gradient-boosted trees. All expose per-class probability prediction over
//! fully observed, scaled feature rows.

pub mod forest;
pub mod gbt;
pub mod knn;
pub mod persist;
pub mod tree;

use crate::dataset::NUM_CLASSES;

/// Per-class probability vector: entries nonnegative, summing to 1.
pub type ClassProbabilities = [f64; NUM_CLASSES];

/// Predicted class id: argmax of the probabilities, ties broken toward the
/// lower class id.
pub fn argmax_class(probas: &ClassProbabilities) -> usize {
    let mut best = 0;
    for c in 1..NUM_CLASSES {
        if probas[c] > probas[best] {
            best = c;
        }
    }
    best
}
