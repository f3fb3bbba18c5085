//! Deterministic generator of schema-compatible synthetic screening datasets
//! with controllable class imbalance, class-conditional signal, and
//! missingness. Stands in for the access-controlled source data.
//!
//! Feature semantics are modeled loosely: volumes scale roughly with diameter
//! cubed plus noise, left/right column pairs share a per-row latent so they
//! come out positively correlated, and the ordinal morphology, outline, solid
//! and summary columns use placeholder small-integer ranges {0..3} — no claim
//! of clinical fidelity.

use alloc::vec::Vec;

use crate::dataset::{ClassLabel, FeatureMatrix, LabeledDataset, NUM_CLASSES};
use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::schema::Schema;

#[derive(Debug, Clone, Copy)]
pub struct GeneratorSpec {
    pub n_rows: usize,
    pub class_priors: [f64; NUM_CLASSES],
    /// Separation scale between class-conditional feature means; 0 removes
    /// all signal.
    pub signal_strength: f64,
    pub missing_rate: f64,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        let sum: f64 = self.class_priors.iter().sum();
        if (sum - 1.0).abs() > 1e-9 || self.class_priors.iter().any(|&p| p < 0.0) {
            return Err(Error::InvalidParameter {
                what: "class_priors must be nonnegative and sum to 1".into(),
            });
        }
        if !(0.0..1.0).contains(&self.missing_rate) {
            return Err(Error::InvalidParameter { what: "missing_rate must be in [0,1)".into() });
        }
        if self.signal_strength < 0.0 {
            return Err(Error::InvalidParameter { what: "signal_strength must be >= 0".into() });
        }
        Ok(())
    }
}

/// Additive mean shift per class, scaled by signal_strength. Class 0 sits at
/// the origin; the two abnormal classes shift in distinct directions so all
/// three are mutually separable.
fn class_shift(class: usize, signal: f64) -> f64 {
    match class {
        0 => 0.0,
        1 => signal,
        _ => -0.6 * signal,
    }
}

fn ordinal(level: f64) -> f64 {
    libm::round(level).clamp(0.0, 3.0)
}

/// Generates `spec.n_rows` rows over the canonical 18-column schema, then
/// applies `spec.missing_rate` via [`inject_missing`]. Fully deterministic in
/// `spec.seed`.
pub fn generate(spec: &GeneratorSpec) -> Result<LabeledDataset> {
    spec.validate()?;
    let schema = Schema::canonical();
    let mut rng = Rng::new(spec.seed);
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(spec.n_rows);
    let mut labels: Vec<ClassLabel> = Vec::with_capacity(spec.n_rows);

    for _ in 0..spec.n_rows {
        let u = rng.next_f64();
        let mut class = NUM_CLASSES - 1;
        let mut cumulative = 0.0;
        for (c, &p) in spec.class_priors.iter().enumerate() {
            cumulative += p;
            if u < cumulative {
                class = c;
                break;
            }
        }
        let shift = class_shift(class, spec.signal_strength);

        // shared latent couples the left/right column pairs
        let latent = rng.next_gaussian();

        let mut row = [0.0f64; 18];
        let mut cyst_diams = [0.0f64; 2];
        for side in 0..2 {
            let side_noise = rng.next_gaussian();

            let ovary_diam =
                (25.0 + 2.0 * shift + 2.5 * latent + 3.0 * side_noise).max(1.0);
            let ovary_vol =
                (0.0005 * ovary_diam * ovary_diam * ovary_diam * (1.0 + 0.1 * rng.next_gaussian()))
                    .max(0.0);
            let cyst_diam =
                (4.0 + 4.0 * shift + 1.5 * latent + 2.0 * rng.next_gaussian()).max(0.0);
            let cyst_vol =
                (0.0005 * cyst_diam * cyst_diam * cyst_diam * (1.0 + 0.1 * rng.next_gaussian()))
                    .max(0.0);
            let morph = ordinal(0.8 + 0.8 * shift + 0.3 * latent + 0.7 * rng.next_gaussian());
            let outline = ordinal(0.6 + 0.7 * shift + 0.3 * latent + 0.7 * rng.next_gaussian());
            let solid = ordinal(0.4 + 0.9 * shift + 0.2 * latent + 0.6 * rng.next_gaussian());
            let sum_score = ordinal((morph + outline + solid) / 3.0 + 0.3 * rng.next_gaussian());

            row[2 + side] = ovary_diam; // ovary_diaml / ovary_diamr
            row[4 + side] = ovary_vol; // ovary_voll / ovary_volr
            row[6 + side] = cyst_diam; // ovcyst_diaml / ovcyst_diamr
            row[8 + side] = morph; // ovcyst_morphl / ovcyst_morphr
            row[10 + side] = outline;
            row[12 + side] = solid;
            row[14 + side] = sum_score;
            row[16 + side] = cyst_vol; // ovcyst_voll / ovcyst_volr
            cyst_diams[side] = cyst_diam;
        }
        let count_left =
            libm::round((0.8 + 0.4 * shift + 0.25 * cyst_diams[0] / 4.0 + 0.6 * rng.next_gaussian()).max(0.0));
        let count_right =
            libm::round((0.8 + 0.4 * shift + 0.25 * cyst_diams[1] / 4.0 + 0.6 * rng.next_gaussian()).max(0.0));
        row[0] = count_left; // numcystl
        row[1] = count_left + count_right; // numcyst

        rows.push(row.to_vec());
        labels.push(ClassLabel::from_id(class).unwrap());
    }

    let data = LabeledDataset::new(FeatureMatrix::dense(schema, &rows)?, labels)?;
    if spec.missing_rate > 0.0 {
        inject_missing(&data, spec.missing_rate, spec.seed.wrapping_add(1))
    } else {
        Ok(data)
    }
}

/// Replaces each feature cell independently with the missing marker with
/// probability `rate`, keeping at least one observed value per column.
/// Labels are untouched.
pub fn inject_missing(data: &LabeledDataset, rate: f64, seed: u64) -> Result<LabeledDataset> {
    if !(0.0..1.0).contains(&rate) {
        return Err(Error::InvalidParameter { what: "rate must be in [0,1)".into() });
    }
    if rate == 0.0 {
        return Ok(data.clone());
    }
    let n_rows = data.features.n_rows();
    let n_cols = data.features.n_cols();
    let mut rng = Rng::new(seed);
    let mut cells: Vec<Option<f64>> = Vec::with_capacity(n_rows * n_cols);
    for r in 0..n_rows {
        for c in 0..n_cols {
            let original = data.features.get(r, c);
            cells.push(if rng.next_f64() < rate { None } else { original });
        }
    }
    // columns that lost every value get one cell resampled back
    for c in 0..n_cols {
        if n_rows > 0 && (0..n_rows).all(|r| cells[r * n_cols + c].is_none()) {
            let r = rng.next_below(n_rows);
            cells[r * n_cols + c] = data.features.get(r, c);
        }
    }
    let features = FeatureMatrix::from_cells(data.features.schema().clone(), n_rows, cells)?;
    LabeledDataset::new(features, data.labels.clone())
}
