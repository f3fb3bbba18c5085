//! SMOTE oversampling to a fully balanced class distribution.
//!
//! Each synthetic row is `x + g * (nn - x)` where `x` is a uniformly chosen
//! minority row, `nn` one of its k nearest same-class neighbors under
//! Euclidean distance, and `g` uniform on [0, 1]. Original rows pass through
//! unchanged; synthetic rows carry their seed point's label.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::dataset::{ClassLabel, LabeledDataset, NUM_CLASSES};
use crate::error::{Error, Result};
use crate::rng::Rng;

#[derive(Debug, Clone)]
pub struct SmoteConfig {
    pub k_neighbors: usize,
    pub seed: u64,
}

pub const DEFAULT_K: usize = 5;

impl SmoteConfig {
    pub fn new(k_neighbors: usize, seed: u64) -> Self {
        SmoteConfig { k_neighbors, seed }
    }
}

#[derive(Debug, Clone)]
pub struct SmoteOutcome {
    pub data: LabeledDataset,
    /// KClamped notices for classes smaller than k_neighbors + 1.
    pub warnings: Vec<String>,
}

/// One row of the before/after class-count table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ImbalanceRow {
    pub class: ClassLabel,
    pub before: usize,
    pub after: usize,
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

/// Oversamples every non-majority class independently until all class counts
/// equal the majority count. Deterministic in `config.seed`.
pub fn smote_oversample(data: &LabeledDataset, config: &SmoteConfig) -> Result<SmoteOutcome> {
    if config.k_neighbors == 0 {
        return Err(Error::InvalidParameter {
            what: "smote k_neighbors must be >= 1".into(),
        });
    }
    if data.features.has_missing() {
        return Err(Error::InvalidParameter {
            what: "SMOTE requires a fully observed matrix".into(),
        });
    }
    let counts = data.class_counts();
    let majority = *counts.iter().max().unwrap();
    let mut warnings = Vec::new();
    let mut new_rows: Vec<Vec<f64>> = Vec::new();
    let mut new_labels: Vec<ClassLabel> = Vec::new();

    for class in 0..NUM_CLASSES {
        let n_c = counts[class];
        if n_c == 0 || n_c == majority {
            continue;
        }
        if n_c < 2 {
            return Err(Error::TooFewMembers { class, count: n_c });
        }
        let k = if config.k_neighbors > n_c - 1 {
            warnings.push(format!(
                "KClamped: class {class} has {n_c} members; k clamped from {} to {}",
                config.k_neighbors,
                n_c - 1
            ));
            n_c - 1
        } else {
            config.k_neighbors
        };

        let members: Vec<usize> = (0..data.n_rows())
            .filter(|&i| data.labels[i].id() == class)
            .collect();
        // k nearest same-class neighbors per member, ties toward lower index.
        let neighbors: Vec<Vec<usize>> = members
            .iter()
            .map(|&i| {
                let mut ranked: Vec<(f64, usize)> = members
                    .iter()
                    .filter(|&&j| j != i)
                    .map(|&j| (euclidean(data.features.row(i), data.features.row(j)), j))
                    .collect();
                ranked.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
                ranked.into_iter().take(k).map(|(_, j)| j).collect()
            })
            .collect();

        let mut rng = Rng::new(config.seed).derive(class as u64);
        for _ in 0..(majority - n_c) {
            let pick = rng.next_below(members.len());
            let x = data.features.row(members[pick]);
            let nn = data.features.row(neighbors[pick][rng.next_below(k)]);
            let g = rng.next_f64();
            new_rows.push(x.iter().zip(nn).map(|(a, b)| a + g * (b - a)).collect());
            new_labels.push(ClassLabel::from_id(class).unwrap());
        }
    }

    let features = data.features.append_rows(&new_rows)?;
    let mut labels = data.labels.clone();
    labels.extend(new_labels);
    Ok(SmoteOutcome {
        data: LabeledDataset::new(features, labels)?,
        warnings,
    })
}

/// Before/after class-count table. Fails if a class present before is absent
/// after.
pub fn imbalance_report(
    before: &LabeledDataset,
    after: &LabeledDataset,
) -> Result<Vec<ImbalanceRow>> {
    if before.features.schema() != after.features.schema() {
        return Err(Error::InvalidParameter {
            what: "before/after schemas differ".into(),
        });
    }
    let b = before.class_counts();
    let a = after.class_counts();
    for class in 0..NUM_CLASSES {
        if b[class] > 0 && a[class] == 0 {
            return Err(Error::InvalidParameter {
                what: format!("class {class} present before resampling but absent after"),
            });
        }
    }
    Ok(ClassLabel::ALL
        .iter()
        .map(|&c| ImbalanceRow { class: c, before: b[c.id()], after: a[c.id()] })
        .collect())
}
