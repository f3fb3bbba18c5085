//! Stratified train/test splitting.

use alloc::vec::Vec;

use crate::dataset::{LabeledDataset, NUM_CLASSES};
use crate::error::{Error, Result};
use crate::rng::Rng;

#[derive(Debug, Clone)]
pub struct SplitPair {
    pub train: LabeledDataset,
    pub test: LabeledDataset,
    pub seed: u64,
    pub train_fraction: f64,
    /// Source row indices assigned to each partition, ascending.
    pub train_indices: Vec<usize>,
    pub test_indices: Vec<usize>,
}

fn round_half_up(x: f64) -> usize {
    libm::floor(x + 0.5) as usize
}

/// Splits per class: each class contributes round(train_fraction * n_c) rows
/// to the train partition, clamped so both partitions keep at least one
/// member of every class present. Row assignment is a deterministic function
/// of `seed`.
pub fn stratified_split(
    data: &LabeledDataset,
    train_fraction: f64,
    seed: u64,
) -> Result<SplitPair> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidParameter {
            what: alloc::format!("train_fraction must be in (0,1), got {train_fraction}"),
        });
    }
    let counts = data.class_counts();
    for (class, &count) in counts.iter().enumerate() {
        if count == 1 {
            return Err(Error::DegenerateClass { class, count });
        }
    }

    let mut rng = Rng::new(seed);
    let mut train_indices = Vec::new();
    let mut test_indices = Vec::new();
    for class in 0..NUM_CLASSES {
        let members: Vec<usize> = (0..data.n_rows())
            .filter(|&i| data.labels[i].id() == class)
            .collect();
        if members.is_empty() {
            continue;
        }
        let n_c = members.len();
        let n_train = round_half_up(train_fraction * n_c as f64).clamp(1, n_c - 1);
        let mut shuffled = members;
        rng.shuffle(&mut shuffled);
        train_indices.extend_from_slice(&shuffled[..n_train]);
        test_indices.extend_from_slice(&shuffled[n_train..]);
    }
    train_indices.sort_unstable();
    test_indices.sort_unstable();

    Ok(SplitPair {
        train: data.take_rows(&train_indices),
        test: data.take_rows(&test_indices),
        seed,
        train_fraction,
        train_indices,
        test_indices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{ClassLabel, FeatureMatrix};
    use crate::schema::Schema;
    use alloc::vec;

    fn dataset(labels: &[usize]) -> LabeledDataset {
        let schema = Schema::canonical().select(&[0]);
        let rows: Vec<Vec<f64>> = (0..labels.len()).map(|i| vec![i as f64]).collect();
        LabeledDataset::new(
            FeatureMatrix::dense(schema, &rows).unwrap(),
            labels.iter().map(|&l| ClassLabel::from_id(l).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn per_class_rounding() {
        // counts {A:6, B:4}, fraction 0.8 -> train {A:5, B:3}, test {A:1, B:1}
        let data = dataset(&[0, 0, 0, 0, 0, 0, 1, 1, 1, 1]);
        let pair = stratified_split(&data, 0.8, 11).unwrap();
        assert_eq!(pair.train.class_counts(), [5, 3, 0]);
        assert_eq!(pair.test.class_counts(), [1, 1, 0]);
    }

    #[test]
    fn single_class_rounding() {
        let data = dataset(&[0; 10]);
        let pair = stratified_split(&data, 0.8, 5).unwrap();
        assert_eq!(pair.train.n_rows(), 8);
        assert_eq!(pair.test.n_rows(), 2);
    }

    #[test]
    fn same_seed_same_partition() {
        let data = dataset(&[0, 0, 0, 1, 1, 1, 2, 2, 2, 0, 1, 2]);
        let a = stratified_split(&data, 0.7, 99).unwrap();
        let b = stratified_split(&data, 0.7, 99).unwrap();
        assert_eq!(a.train_indices, b.train_indices);
        assert_eq!(a.test_indices, b.test_indices);
        assert_eq!(a.train, b.train);
    }

    #[test]
    fn degenerate_class_rejected() {
        let data = dataset(&[0, 0, 0, 1]);
        assert!(matches!(
            stratified_split(&data, 0.8, 0),
            Err(Error::DegenerateClass { class: 1, count: 1 })
        ));
    }

    #[test]
    fn bad_fraction_rejected() {
        let data = dataset(&[0, 0]);
        assert!(stratified_split(&data, 0.0, 0).is_err());
        assert!(stratified_split(&data, 1.0, 0).is_err());
    }

    #[test]
    fn partitions_cover_source_exactly() {
        let data = dataset(&[0, 1, 2, 0, 1, 2, 0, 0, 1, 2, 2, 1, 0, 0]);
        for seed in 0..20u64 {
            let pair = stratified_split(&data, 0.75, seed).unwrap();
            let mut all: Vec<usize> = pair
                .train_indices
                .iter()
                .chain(pair.test_indices.iter())
                .copied()
                .collect();
            all.sort_unstable();
            assert_eq!(all, (0..data.n_rows()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn stratification_within_one_of_rounded_target() {
        let data = dataset(&[0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 2, 2, 2]);
        let counts = data.class_counts();
        for seed in 0..10u64 {
            let pair = stratified_split(&data, 0.8, seed).unwrap();
            let train_counts = pair.train.class_counts();
            for c in 0..3 {
                let target = round_half_up(0.8 * counts[c] as f64) as i64;
                assert!((train_counts[c] as i64 - target).abs() <= 1);
            }
        }
    }
}
