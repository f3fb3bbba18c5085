//! CSV ingestion and export.
//!
//! Format: comma-separated, first row header, UTF-8, `.` decimal separator,
//! no thousands separators. An empty cell or the literal token `NA` is the
//! missing marker. The target column holds either the class display string
//! or its integer id.

use std::path::Path;

use ovca_core::dataset::{ClassLabel, FeatureMatrix, LabeledDataset};
use ovca_core::error::Error as CoreError;
use ovca_core::schema::{Schema, TARGET_COLUMN};

use crate::CliError;

fn parse_label(token: &str, row: usize) -> Result<ClassLabel, CoreError> {
    if let Some(label) = ClassLabel::from_display(token) {
        return Ok(label);
    }
    if let Ok(id) = token.trim().parse::<usize>() {
        if let Some(label) = ClassLabel::from_id(id) {
            return Ok(label);
        }
    }
    Err(CoreError::UnknownLabel { row, token: token.to_string() })
}

/// Loads a labeled dataset. Header order is free as long as every schema
/// column and the target column are present.
pub fn load_csv(path: &Path, schema: &Schema) -> Result<LabeledDataset, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| CliError::Runtime(format!("cannot open {}: {e}", path.display())))?;

    let headers: Vec<String> =
        reader.headers().map_err(|e| CliError::Runtime(e.to_string()))?
            .iter().map(str::to_string).collect();

    // map each schema column to its position in the file
    let mut positions = Vec::with_capacity(schema.len());
    for col in schema.columns() {
        let pos = headers.iter().position(|h| h == &col.name).ok_or_else(|| {
            CliError::Runtime(CoreError::MissingColumn { name: col.name.clone() }.to_string())
        })?;
        positions.push(pos);
    }
    let target_pos = headers.iter().position(|h| h == TARGET_COLUMN).ok_or_else(|| {
        CliError::Runtime(CoreError::MissingColumn { name: TARGET_COLUMN.into() }.to_string())
    })?;

    let mut cells: Vec<Option<f64>> = Vec::new();
    let mut labels: Vec<ClassLabel> = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Runtime(e.to_string()))?;
        for (c, &pos) in positions.iter().enumerate() {
            let token = record.get(pos).unwrap_or("").trim();
            if token.is_empty() || token == "NA" {
                cells.push(None);
            } else {
                let value: f64 = token.parse().map_err(|_| {
                    CliError::Runtime(
                        CoreError::ParseError {
                            row: row_idx,
                            column: schema.name(c).to_string(),
                            token: token.to_string(),
                        }
                        .to_string(),
                    )
                })?;
                cells.push(Some(value));
            }
        }
        let token = record.get(target_pos).unwrap_or("").trim();
        labels.push(parse_label(token, row_idx).map_err(|e| CliError::Runtime(e.to_string()))?);
    }

    let n_rows = labels.len();
    let features = FeatureMatrix::from_cells(schema.clone(), n_rows, cells)?;
    Ok(LabeledDataset::new(features, labels)?)
}

/// Writes a dataset in the format `load_csv` consumes. Missing cells become
/// empty fields; the target column holds the class display string.
pub fn write_csv(data: &LabeledDataset, path: &Path) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    let schema = data.features.schema();
    let mut header: Vec<&str> = schema.columns().iter().map(|c| c.name.as_str()).collect();
    header.push(TARGET_COLUMN);
    writer.write_record(&header).map_err(|e| CliError::Runtime(e.to_string()))?;

    for r in 0..data.n_rows() {
        let mut record: Vec<String> = Vec::with_capacity(schema.len() + 1);
        for c in 0..schema.len() {
            record.push(match data.features.get(r, c) {
                Some(v) => format!("{v}"),
                None => String::new(),
            });
        }
        record.push(data.labels[r].display().to_string());
        writer.write_record(&record).map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn canonical_header() -> String {
        let mut names: Vec<&str> = ovca_core::schema::CANONICAL_FEATURES.to_vec();
        names.push(TARGET_COLUMN);
        names.join(",")
    }

    fn row(values: &[&str], label: &str) -> String {
        let mut fields: Vec<String> = values.iter().map(|s| s.to_string()).collect();
        fields.push(format!("\"{label}\""));
        fields.join(",")
    }

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    fn values(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{}", i as f64 * 0.5)).collect()
    }

    #[test]
    fn empty_cell_becomes_missing_marker() {
        let mut vals: Vec<String> = values(18);
        vals[1] = String::new(); // numcyst
        let v: Vec<&str> = vals.iter().map(String::as_str).collect();
        let complete: Vec<String> = values(18);
        let cv: Vec<&str> = complete.iter().map(String::as_str).collect();
        let content = format!(
            "{}\n{}\n{}\n{}\n",
            canonical_header(),
            row(&v, "Negative"),
            row(&cv, "Abnormal, suspicious"),
            row(&cv, "Abnormal, non-suspicious"),
        );
        let f = write_temp(&content);
        let data = load_csv(f.path(), &Schema::canonical()).unwrap();
        assert_eq!(data.features.missing_count(), 1);
        assert!(data.features.is_missing(0, 1));
        assert_eq!(data.labels[0], ClassLabel::Negative);
        assert_eq!(data.labels[2], ClassLabel::AbnormalNonSuspicious);
    }

    #[test]
    fn complete_file_has_no_missing() {
        let complete: Vec<String> = values(18);
        let cv: Vec<&str> = complete.iter().map(String::as_str).collect();
        let content = format!("{}\n{}\n", canonical_header(), row(&cv, "Negative"));
        let f = write_temp(&content);
        let data = load_csv(f.path(), &Schema::canonical()).unwrap();
        assert_eq!(data.features.missing_count(), 0);
    }

    #[test]
    fn na_token_is_missing() {
        let mut vals: Vec<String> = values(18);
        vals[4] = "NA".into();
        let v: Vec<&str> = vals.iter().map(String::as_str).collect();
        let content = format!("{}\n{}\n", canonical_header(), row(&v, "0"));
        let f = write_temp(&content);
        let data = load_csv(f.path(), &Schema::canonical()).unwrap();
        assert!(data.features.is_missing(0, 4));
    }

    #[test]
    fn parse_error_names_row_and_column() {
        let mut vals: Vec<String> = values(18);
        vals[4] = "abc".into(); // ovary_voll
        let v: Vec<&str> = vals.iter().map(String::as_str).collect();
        let content = format!("{}\n{}\n", canonical_header(), row(&v, "Negative"));
        let f = write_temp(&content);
        let err = load_csv(f.path(), &Schema::canonical()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("ovary_voll"), "{msg}");
        assert!(msg.contains("row 0"), "{msg}");
        assert!(msg.contains("abc"), "{msg}");
    }

    #[test]
    fn unknown_label_rejected() {
        let complete: Vec<String> = values(18);
        let cv: Vec<&str> = complete.iter().map(String::as_str).collect();
        let content = format!("{}\n{}\n", canonical_header(), row(&cv, "Positive"));
        let f = write_temp(&content);
        let err = load_csv(f.path(), &Schema::canonical()).unwrap_err();
        assert!(err.to_string().contains("unknown class label"));
    }

    #[test]
    fn missing_column_rejected() {
        let content = "numcystl,ovar_result\n1.0,Negative\n";
        let f = write_temp(content);
        let err = load_csv(f.path(), &Schema::canonical()).unwrap_err();
        assert!(err.to_string().contains("missing column"));
    }

    #[test]
    fn header_order_is_free() {
        let mut names: Vec<&str> = ovca_core::schema::CANONICAL_FEATURES.to_vec();
        names.reverse();
        names.insert(0, TARGET_COLUMN);
        let mut fields = vec!["1".to_string()];
        fields.extend((0..18).map(|i| format!("{i}")));
        let content = format!("{}\n{}\n", names.join(","), fields.join(","));
        let f = write_temp(&content);
        let data = load_csv(f.path(), &Schema::canonical()).unwrap();
        // reversed order: numcystl is the last data field
        assert_eq!(data.features.get(0, 0), Some(17.0));
        assert_eq!(data.labels[0], ClassLabel::AbnormalSuspicious);
    }

    #[test]
    fn round_trip_through_csv() {
        let spec = ovca_core::synth::GeneratorSpec {
            n_rows: 50,
            class_priors: [0.6, 0.2, 0.2],
            signal_strength: 1.0,
            missing_rate: 0.1,
            seed: 5,
        };
        let data = ovca_core::synth::generate(&spec).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("data.csv");
        write_csv(&data, &path).unwrap();
        let reloaded = load_csv(&path, &Schema::canonical()).unwrap();
        assert_eq!(reloaded.labels, data.labels);
        assert_eq!(reloaded.features.missing_count(), data.features.missing_count());
        for r in 0..data.n_rows() {
            for c in 0..18 {
                assert_eq!(reloaded.features.get(r, c), data.features.get(r, c));
            }
        }
    }
}
