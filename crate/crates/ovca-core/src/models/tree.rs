//! Binary classification tree with Gini-impurity splits, used by the random
//! forest. Split thresholds are midpoints between consecutive distinct sorted
//! feature values (exact greedy search, no binning).

use alloc::vec::Vec;

use crate::dataset::{ClassLabel, FeatureMatrix, NUM_CLASSES};
use crate::models::ClassProbabilities;
use crate::rng::Rng;

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        /// Index of the left child in the node array; right is `left + 1`
        /// only by accident — both indices are stored explicitly.
        left: usize,
        right: usize,
    },
    Leaf {
        distribution: ClassProbabilities,
    },
}

/// Flat node array; node 0 is the root.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    pub nodes: Vec<TreeNode>,
}

#[derive(Debug, Clone, Copy)]
pub struct TreeParams {
    /// `None` means unlimited depth.
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    /// Number of candidate features examined per split; `None` means all.
    pub features_per_split: Option<usize>,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams { max_depth: None, min_samples_leaf: 1, features_per_split: None }
    }
}

fn gini(counts: &[u64; NUM_CLASSES], total: f64) -> f64 {
    let mut sum_sq = 0.0;
    for &c in counts {
        let p = c as f64 / total;
        sum_sq += p * p;
    }
    1.0 - sum_sq
}

struct Builder<'a> {
    features: &'a FeatureMatrix,
    labels: &'a [ClassLabel],
    params: TreeParams,
    nodes: Vec<TreeNode>,
}

impl Builder<'_> {
    /// Best (feature, threshold, gini decrease) over a feature subset, or
    /// `None` when no split strictly decreases impurity. Ties resolve to the
    /// first candidate examined: lowest feature index, then lowest threshold.
    fn best_split(&self, rows: &[usize], feature_subset: &[usize]) -> Option<(usize, f64)> {
        let n = rows.len() as f64;
        let mut parent_counts = [0u64; NUM_CLASSES];
        for &r in rows {
            parent_counts[self.labels[r].id()] += 1;
        }
        let parent_gini = gini(&parent_counts, n);
        if parent_gini == 0.0 {
            return None;
        }

        let mut best: Option<(usize, f64, f64)> = None;
        for &f in feature_subset {
            let mut sorted: Vec<(f64, usize)> = rows
                .iter()
                .map(|&r| (self.features.get(r, f).unwrap(), self.labels[r].id()))
                .collect();
            sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

            let mut left_counts = [0u64; NUM_CLASSES];
            let mut right_counts = parent_counts;
            for i in 0..sorted.len() - 1 {
                left_counts[sorted[i].1] += 1;
                right_counts[sorted[i].1] -= 1;
                if sorted[i].0 == sorted[i + 1].0 {
                    continue;
                }
                let n_left = (i + 1) as f64;
                let n_right = n - n_left;
                if (n_left as usize) < self.params.min_samples_leaf
                    || (n_right as usize) < self.params.min_samples_leaf
                {
                    continue;
                }
                let weighted = (n_left / n) * gini(&left_counts, n_left)
                    + (n_right / n) * gini(&right_counts, n_right);
                let decrease = parent_gini - weighted;
                if decrease > 0.0 && best.map_or(true, |(_, _, d)| decrease > d) {
                    let threshold = (sorted[i].0 + sorted[i + 1].0) / 2.0;
                    best = Some((f, threshold, decrease));
                }
            }
        }
        best.map(|(f, t, _)| (f, t))
    }

    fn build(&mut self, rows: &[usize], depth: usize, rng: &mut Option<&mut Rng>) -> usize {
        let mut counts = [0u64; NUM_CLASSES];
        for &r in rows {
            counts[self.labels[r].id()] += 1;
        }
        let make_leaf = |counts: [u64; NUM_CLASSES]| {
            let total = rows.len() as f64;
            let mut distribution = [0.0; NUM_CLASSES];
            for c in 0..NUM_CLASSES {
                distribution[c] = counts[c] as f64 / total;
            }
            TreeNode::Leaf { distribution }
        };

        let depth_exhausted = self.params.max_depth.is_some_and(|d| depth >= d);
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        if depth_exhausted || pure || rows.len() < 2 * self.params.min_samples_leaf {
            self.nodes.push(make_leaf(counts));
            return self.nodes.len() - 1;
        }

        let n_features = self.features.n_cols();
        let subset: Vec<usize> = match (self.params.features_per_split, rng.as_deref_mut()) {
            (Some(m), Some(rng)) if m < n_features => rng.sample_indices(n_features, m),
            _ => (0..n_features).collect(),
        };

        match self.best_split(rows, &subset) {
            Some((feature, threshold)) => {
                let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = rows
                    .iter()
                    .partition(|&&r| self.features.get(r, feature).unwrap() <= threshold);
                let index = self.nodes.len();
                self.nodes.push(TreeNode::Split { feature, threshold, left: 0, right: 0 });
                let left = self.build(&left_rows, depth + 1, rng);
                let right = self.build(&right_rows, depth + 1, rng);
                if let TreeNode::Split { left: l, right: r, .. } = &mut self.nodes[index] {
                    *l = left;
                    *r = right;
                }
                index
            }
            None => {
                self.nodes.push(make_leaf(counts));
                self.nodes.len() - 1
            }
        }
    }
}

impl DecisionTree {
    /// Fits a tree on the given rows. `rng` drives per-split feature
    /// subsampling and may be omitted when all features are examined.
    pub fn fit(
        features: &FeatureMatrix,
        labels: &[ClassLabel],
        rows: &[usize],
        params: TreeParams,
        mut rng: Option<&mut Rng>,
    ) -> DecisionTree {
        debug_assert!(!rows.is_empty());
        let mut builder = Builder { features, labels, params, nodes: Vec::new() };
        builder.build(rows, 0, &mut rng);
        DecisionTree { nodes: builder.nodes }
    }

    /// Class distribution at the leaf reached by `x`.
    pub fn predict_proba(&self, x: &[f64]) -> ClassProbabilities {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                TreeNode::Split { feature, threshold, left, right } => {
                    i = if x[*feature] <= *threshold { *left } else { *right };
                }
                TreeNode::Leaf { distribution } => return *distribution,
            }
        }
    }
}
