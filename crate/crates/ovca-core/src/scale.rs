//! Feature scaling: min-max (default) and standardization.
//!
//! Both scalers are fit/transform separable so the pipeline can fit on the
//! training partition only.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::dataset::FeatureMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalerKind {
    MinMax,
    Standard,
}

/// Per-column affine map `v -> (v - offset) / divisor`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalerModel {
    pub kind: ScalerKind,
    /// (min, max) per column for min-max; (mean, stddev) for standard.
    pub params: Vec<(f64, f64)>,
}

fn column_values(data: &FeatureMatrix, c: usize) -> impl Iterator<Item = f64> + '_ {
    (0..data.n_rows()).map(move |r| {
        data.get(r, c)
            .expect("scaler requires fully observed data")
    })
}

fn check_complete(data: &FeatureMatrix) -> Result<()> {
    if data.has_missing() {
        return Err(Error::InvalidParameter {
            what: "scaling requires a fully observed matrix".to_string(),
        });
    }
    if data.n_rows() == 0 {
        return Err(Error::InvalidParameter { what: "cannot fit a scaler on an empty matrix".to_string() });
    }
    Ok(())
}

/// Learns per-column (min, max) pairs.
pub fn fit_scaler(data: &FeatureMatrix) -> Result<ScalerModel> {
    check_complete(data)?;
    let params = (0..data.n_cols())
        .map(|c| {
            let mut min = f64::INFINITY;
            let mut max = f64::NEG_INFINITY;
            for v in column_values(data, c) {
                min = min.min(v);
                max = max.max(v);
            }
            (min, max)
        })
        .collect();
    Ok(ScalerModel { kind: ScalerKind::MinMax, params })
}

/// Learns per-column (mean, stddev) pairs (population stddev).
pub fn fit_standard_scaler(data: &FeatureMatrix) -> Result<ScalerModel> {
    check_complete(data)?;
    let n = data.n_rows() as f64;
    let params = (0..data.n_cols())
        .map(|c| {
            let mean = column_values(data, c).sum::<f64>() / n;
            let var = column_values(data, c).map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
            (mean, libm::sqrt(var))
        })
        .collect();
    Ok(ScalerModel { kind: ScalerKind::Standard, params })
}

/// Applies the fitted affine map. Constant columns (zero range or zero
/// stddev) map to 0.0. Values outside the fit range follow the same formula
/// and may leave [0, 1].
pub fn scale(model: &ScalerModel, data: &FeatureMatrix) -> Result<FeatureMatrix> {
    check_complete(data)?;
    if data.n_cols() != model.params.len() {
        return Err(Error::LengthMismatch { left: data.n_cols(), right: model.params.len() });
    }
    let n_cols = data.n_cols();
    let mut out = data.raw().to_vec();
    for c in 0..n_cols {
        let (a, b) = model.params[c];
        let (offset, divisor) = match model.kind {
            ScalerKind::MinMax => (a, b - a),
            ScalerKind::Standard => (a, b),
        };
        for r in 0..data.n_rows() {
            let v = out[r * n_cols + c];
            out[r * n_cols + c] = if divisor == 0.0 { 0.0 } else { (v - offset) / divisor };
        }
    }
    Ok(FeatureMatrix::from_raw(data.schema().clone(), data.n_rows(), out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::Schema;
    use alloc::vec;

    fn col(values: &[f64]) -> FeatureMatrix {
        let schema = Schema::canonical().select(&[0]);
        let rows: Vec<Vec<f64>> = values.iter().map(|&v| vec![v]).collect();
        FeatureMatrix::dense(schema, &rows).unwrap()
    }

    #[test]
    fn min_max_learned() {
        let model = fit_scaler(&col(&[0.0, 5.0, 10.0])).unwrap();
        assert_eq!(model.params, vec![(0.0, 10.0)]);
    }

    #[test]
    fn constant_column_params() {
        let model = fit_scaler(&col(&[7.0, 7.0])).unwrap();
        assert_eq!(model.params, vec![(7.0, 7.0)]);
        let out = scale(&model, &col(&[7.0, 123.0])).unwrap();
        assert_eq!(out.get(0, 0), Some(0.0));
        assert_eq!(out.get(1, 0), Some(0.0));
    }

    #[test]
    fn empty_matrix_rejected() {
        assert!(fit_scaler(&col(&[])).is_err());
    }

    #[test]
    fn endpoints_and_midpoint() {
        let data = col(&[0.0, 5.0, 10.0]);
        let model = fit_scaler(&data).unwrap();
        let out = scale(&model, &data).unwrap();
        assert_eq!(out.get(0, 0), Some(0.0));
        assert_eq!(out.get(1, 0), Some(0.5));
        assert_eq!(out.get(2, 0), Some(1.0));
    }

    #[test]
    fn out_of_range_follows_affine_formula() {
        let model = fit_scaler(&col(&[0.0, 10.0])).unwrap();
        let out = scale(&model, &col(&[12.0])).unwrap();
        assert!((out.get(0, 0).unwrap() - 1.2).abs() < 1e-15);
    }

    #[test]
    fn round_trip_recovers_input() {
        let data = col(&[3.0, 9.5, 4.25, 8.125]);
        let model = fit_scaler(&data).unwrap();
        let out = scale(&model, &data).unwrap();
        let (min, max) = model.params[0];
        for r in 0..data.n_rows() {
            let back = out.get(r, 0).unwrap() * (max - min) + min;
            let orig = data.get(r, 0).unwrap();
            assert!((back - orig).abs() <= 1e-10 * orig.abs());
            let v = out.get(r, 0).unwrap();
            assert!((-1e-12..=1.0 + 1e-12).contains(&v));
        }
    }

    #[test]
    fn standard_scaler_zero_mean_unit_variance() {
        let data = col(&[2.0, 4.0, 6.0, 8.0]);
        let model = fit_standard_scaler(&data).unwrap();
        let out = scale(&model, &data).unwrap();
        let vals: Vec<f64> = (0..4).map(|r| out.get(r, 0).unwrap()).collect();
        let mean = vals.iter().sum::<f64>() / 4.0;
        let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / 4.0;
        assert!(mean.abs() < 1e-12);
        assert!((var - 1.0).abs() < 1e-12);
    }
}
