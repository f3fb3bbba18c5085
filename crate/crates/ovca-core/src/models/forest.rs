//! Random forest: bagged Gini trees with per-split feature subsampling and
//! soft voting (mean of leaf class distributions).

use alloc::vec::Vec;

use crate::dataset::{LabeledDataset, NUM_CLASSES};
use crate::error::{Error, Result};
use crate::models::tree::{DecisionTree, TreeParams};
use crate::models::ClassProbabilities;
use crate::rng::Rng;

#[derive(Debug, Clone, Copy)]
pub struct ForestParams {
    pub n_trees: usize,
    /// `None` selects floor(sqrt(n_features)) at fit time.
    pub features_per_split: Option<usize>,
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    pub bootstrap: bool,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_trees: 100,
            features_per_split: None,
            max_depth: None,
            min_samples_leaf: 1,
            bootstrap: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RandomForestModel {
    pub trees: Vec<DecisionTree>,
    pub params: ForestParams,
    pub seed: u64,
}

/// Trains `n_trees` trees, each on a bootstrap sample of n rows drawn with
/// replacement, with split candidates restricted to a fresh random feature
/// subset at every node. Per-tree seeds derive from the master seed, so the
/// result is independent of training order.
pub fn rf_fit(train: &LabeledDataset, params: ForestParams, seed: u64) -> Result<RandomForestModel> {
    if params.n_trees == 0 {
        return Err(Error::InvalidParameter { what: "forest needs at least one tree".into() });
    }
    if train.features.has_missing() {
        return Err(Error::InvalidParameter { what: "forest requires fully observed training data".into() });
    }
    let counts = train.class_counts();
    if counts.iter().filter(|&&c| c > 0).count() < 2 {
        return Err(Error::SingleClass);
    }

    let n = train.n_rows();
    let n_features = train.features.n_cols();
    let features_per_split = params
        .features_per_split
        .unwrap_or_else(|| libm::floor(libm::sqrt(n_features as f64)) as usize)
        .clamp(1, n_features);
    let tree_params = TreeParams {
        max_depth: params.max_depth,
        min_samples_leaf: params.min_samples_leaf,
        features_per_split: Some(features_per_split),
    };

    let master = Rng::new(seed);
    let trees = (0..params.n_trees)
        .map(|i| {
            let mut rng = master.derive(i as u64);
            let rows: Vec<usize> = if params.bootstrap {
                (0..n).map(|_| rng.next_below(n)).collect()
            } else {
                (0..n).collect()
            };
            DecisionTree::fit(&train.features, &train.labels, &rows, tree_params, Some(&mut rng))
        })
        .collect();

    Ok(RandomForestModel { trees, params, seed })
}

impl RandomForestModel {
    /// Mean of per-tree leaf distributions.
    pub fn predict_proba(&self, x: &[f64]) -> ClassProbabilities {
        let mut acc = [0.0; NUM_CLASSES];
        for tree in &self.trees {
            let p = tree.predict_proba(x);
            for c in 0..NUM_CLASSES {
                acc[c] += p[c];
            }
        }
        let n = self.trees.len() as f64;
        for v in &mut acc {
            *v /= n;
        }
        acc
    }
}
