//! KNN missing-value imputation.
//!
//! A missing cell (r, c) is filled with the uniform mean of column c over the
//! k nearest donor rows under a missing-aware Euclidean distance: squared
//! differences are summed over coordinates observed in both rows, rescaled by
//! n_cols / n_shared, then square-rooted. Donors missing column c are skipped
//! in favor of the next nearest; ties break toward the lower donor row index.
//! Donors sharing no observed coordinate with the query rank after every
//! donor with a defined distance.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::dataset::FeatureMatrix;
use crate::error::{Error, Result};

/// Fitted imputer: a donor-pool snapshot plus the neighbor count.
#[derive(Debug, Clone)]
pub struct KnnImputerModel {
    k: usize,
    donors: FeatureMatrix,
}

pub const DEFAULT_K: usize = 5;

impl KnnImputerModel {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn donors(&self) -> &FeatureMatrix {
        &self.donors
    }
}

/// Stores the donor pool. Fails if a column has zero observed values or k is
/// out of range (1 ..= n_rows - 1).
pub fn fit_imputer(data: &FeatureMatrix, k: usize) -> Result<KnnImputerModel> {
    if k == 0 {
        return Err(Error::InvalidParameter { what: "imputer k must be >= 1".to_string() });
    }
    if data.n_rows() < 2 || k > data.n_rows() - 1 {
        return Err(Error::KTooLarge { k, n: data.n_rows() });
    }
    for c in 0..data.n_cols() {
        if (0..data.n_rows()).all(|r| data.is_missing(r, c)) {
            return Err(Error::AllMissingColumn {
                column: data.schema().name(c).to_string(),
            });
        }
    }
    Ok(KnnImputerModel { k, donors: data.clone() })
}

/// Missing-aware Euclidean distance between two rows given as option-cells.
/// Returns `None` when the rows share no observed coordinate.
pub fn nan_distance(a: &[Option<f64>], b: &[Option<f64>]) -> Option<f64> {
    debug_assert_eq!(a.len(), b.len());
    let mut sum = 0.0;
    let mut shared = 0usize;
    for (x, y) in a.iter().zip(b) {
        if let (Some(x), Some(y)) = (x, y) {
            sum += (x - y) * (x - y);
            shared += 1;
        }
    }
    if shared == 0 {
        None
    } else {
        Some(libm::sqrt(sum * a.len() as f64 / shared as f64))
    }
}

/// Fills every missing cell of `data` from the model's donor pool. Observed
/// cells pass through unchanged. If fewer than k donors observe the target
/// column, the mean is over all that do.
pub fn impute(model: &KnnImputerModel, data: &FeatureMatrix) -> Result<FeatureMatrix> {
    if data.schema() != model.donors.schema() {
        return Err(Error::InvalidParameter {
            what: "schema does not match the fitted donor pool".to_string(),
        });
    }
    if !data.has_missing() {
        return Ok(data.clone());
    }

    let n_cols = data.n_cols();
    let donors = &model.donors;
    let donor_cells: Vec<Vec<Option<f64>>> =
        (0..donors.n_rows()).map(|r| donors.row_cells(r)).collect();

    let mut out = data.raw().to_vec();
    for r in 0..data.n_rows() {
        let query = data.row_cells(r);
        if query.iter().all(|c| c.is_some()) {
            continue;
        }
        // Donor ordering for this query row: defined distances ascending,
        // then donors with no shared observed coordinate, all tie-broken by
        // lower donor index.
        let mut ranked: Vec<(f64, usize)> = donor_cells
            .iter()
            .enumerate()
            .map(|(i, cells)| (nan_distance(&query, cells).unwrap_or(f64::INFINITY), i))
            .collect();
        ranked.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));

        for c in 0..n_cols {
            if query[c].is_some() {
                continue;
            }
            let values: Vec<f64> = ranked
                .iter()
                .filter_map(|&(_, i)| donor_cells[i][c])
                .take(model.k)
                .collect();
            if values.is_empty() {
                return Err(Error::NoValidDonor {
                    column: data.schema().name(c).to_string(),
                });
            }
            out[r * n_cols + c] = values.iter().sum::<f64>() / values.len() as f64;
        }
    }
    Ok(FeatureMatrix::from_raw(data.schema().clone(), data.n_rows(), out))
}
