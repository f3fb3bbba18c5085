//! Column statistics: Pearson correlation matrix.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::FeatureMatrix;
use crate::error::{Error, Result};

/// Symmetric Pearson correlation matrix with the constant-column warning list.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub names: Vec<String>,
    /// Row-major n x n, entries in [-1, 1]. Off-diagonal entries involving a
    /// constant column are 0; its diagonal entry stays 1 so the matrix is
    /// total and renderable.
    pub values: Vec<f64>,
    /// Columns with zero variance, reported rather than aborting.
    pub zero_variance: Vec<String>,
}

impl CorrelationMatrix {
    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n() + j]
    }
}

/// Sample Pearson coefficient between two equal-length columns.
/// Requires both to have nonzero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ZeroVariance { column: String::new() });
    }
    Ok((sxy / libm::sqrt(sxx * syy)).clamp(-1.0, 1.0))
}

/// Full correlation matrix over all columns. The input must be fully
/// observed (run after imputation).
pub fn pearson_correlation_matrix(features: &FeatureMatrix) -> Result<CorrelationMatrix> {
    if features.has_missing() {
        return Err(Error::InvalidParameter {
            what: "correlation requires a fully observed matrix".to_string(),
        });
    }
    if features.n_rows() < 2 {
        return Err(Error::InvalidParameter {
            what: "correlation requires at least 2 rows".to_string(),
        });
    }
    let n_cols = features.n_cols();
    let n_rows = features.n_rows();
    let columns: Vec<Vec<f64>> = (0..n_cols)
        .map(|c| (0..n_rows).map(|r| features.get(r, c).unwrap()).collect())
        .collect();

    let mut zero_variance = Vec::new();
    let constant: Vec<bool> = columns
        .iter()
        .enumerate()
        .map(|(c, col)| {
            let is_const = col.iter().all(|&v| v == col[0]);
            if is_const {
                zero_variance.push(features.schema().name(c).to_string());
            }
            is_const
        })
        .collect();

    let mut values = vec![0.0; n_cols * n_cols];
    for i in 0..n_cols {
        values[i * n_cols + i] = 1.0;
        for j in (i + 1)..n_cols {
            let r = if constant[i] || constant[j] {
                0.0
            } else {
                pearson(&columns[i], &columns[j])?
            };
            values[i * n_cols + j] = r;
            values[j * n_cols + i] = r;
        }
    }

    Ok(CorrelationMatrix {
        names: (0..n_cols)
            .map(|c| features.schema().name(c).to_string())
            .collect(),
        values,
        zero_variance,
    })
}
