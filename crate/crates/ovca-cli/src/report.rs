//! Run report assembly and deterministic file emission.
//!
//! A run writes `report.json` plus CSV sidecars (`correlation.csv`,
//! `class_counts.csv`, and one `roc_<model>_<class>.csv` per model and
//! class). All numeric output is rounded to 12 significant digits and the
//! whole file set is byte-identical across reruns of the same config.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use ovca_core::metrics::RocCurve;
use ovca_core::schema::Schema;

use crate::config::PipelineConfig;
use crate::CliError;

/// Rounds to 12 significant digits so emitted numbers are stable and short.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap()
}

/// FNV-1a hash of the column names and kinds, hex-encoded.
pub fn schema_fingerprint(schema: &Schema) -> String {
    let mut hash: u64 = 0xcbf29ce484222325;
    for col in schema.columns() {
        for byte in col.name.bytes().chain([b';']) {
            hash ^= byte as u64;
            hash = hash.wrapping_mul(0x100000001b3);
        }
    }
    format!("{hash:016x}")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassCountRow {
    pub class: String,
    pub before: usize,
    pub after: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub names: Vec<String>,
    pub values: Vec<Vec<f64>>,
    pub zero_variance: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ImputerReport {
    pub k: usize,
    pub donor_rows: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScalerReport {
    pub kind: String,
    /// (min, max) per column for minmax; (mean, stddev) for standard.
    pub params: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransformerReport {
    pub imputer: ImputerReport,
    pub scaler: ScalerReport,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PerClassMetrics {
    pub class: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub auc: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelReport {
    pub name: String,
    pub accuracy: f64,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    pub macro_auc: f64,
    pub per_class: Vec<PerClassMetrics>,
    pub roc_files: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub format_version: u32,
    pub protocol: String,
    pub schema_fingerprint: String,
    pub config: PipelineConfig,
    pub class_counts: Vec<ClassCountRow>,
    pub correlation: CorrelationReport,
    pub transformers: TransformerReport,
    pub models: Vec<ModelReport>,
    pub warnings: Vec<String>,
    /// ROC point sets, written as sidecar files rather than embedded JSON.
    #[serde(skip)]
    pub roc_curves: Vec<RocFile>,
}

#[derive(Debug, Clone)]
pub struct RocFile {
    pub file_name: String,
    pub curve: RocCurve,
}

fn fmt12(x: f64) -> String {
    format!("{}", sig12(x))
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let mut file = fs::File::create(path)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    file.write_all(bytes)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

/// Writes the full deterministic file set and returns the paths written.
pub fn emit_report(report: &RunReport, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", dir.display())))?;
    let mut written = Vec::new();

    let json = serde_json::to_string_pretty(report)
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    let report_path = dir.join("report.json");
    write_atomic(&report_path, format!("{json}\n").as_bytes())?;
    written.push(report_path);

    let mut correlation = String::new();
    correlation.push_str("column,");
    correlation.push_str(&report.correlation.names.join(","));
    correlation.push('\n');
    for (i, name) in report.correlation.names.iter().enumerate() {
        correlation.push_str(name);
        for v in &report.correlation.values[i] {
            correlation.push(',');
            correlation.push_str(&fmt12(*v));
        }
        correlation.push('\n');
    }
    let correlation_path = dir.join("correlation.csv");
    write_atomic(&correlation_path, correlation.as_bytes())?;
    written.push(correlation_path);

    let mut counts = String::from("class,before,after\n");
    for row in &report.class_counts {
        counts.push_str(&format!("\"{}\",{},{}\n", row.class, row.before, row.after));
    }
    let counts_path = dir.join("class_counts.csv");
    write_atomic(&counts_path, counts.as_bytes())?;
    written.push(counts_path);

    for roc in &report.roc_curves {
        let mut body = String::from("fpr,tpr\n");
        for &(fpr, tpr) in &roc.curve.points {
            body.push_str(&fmt12(fpr));
            body.push(',');
            body.push_str(&fmt12(tpr));
            body.push('\n');
        }
        let path = dir.join(&roc.file_name);
        write_atomic(&path, body.as_bytes())?;
        written.push(path);
    }

    Ok(written)
}

/// Loads `report.json` from a run directory.
pub fn load_report(dir: &Path) -> Result<RunReport, CliError> {
    let path = dir.join("report.json");
    let text = fs::read_to_string(&path)
        .map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Runtime(e.to_string()))
}

/// Human-readable summary of a report, for the `report` subcommand.
pub fn render_summary(report: &RunReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "protocol: {}\nschema fingerprint: {}\n",
        report.protocol, report.schema_fingerprint
    ));
    out.push_str("class counts (before -> after resampling):\n");
    for row in &report.class_counts {
        out.push_str(&format!("  {:<26} {:>6} -> {:>6}\n", row.class, row.before, row.after));
    }
    out.push_str("model performance on the test split:\n");
    out.push_str(&format!(
        "  {:<14} {:>9} {:>10} {:>8} {:>8} {:>10}\n",
        "model", "accuracy", "precision", "recall", "f1", "macro-auc"
    ));
    for m in &report.models {
        out.push_str(&format!(
            "  {:<14} {:>9.4} {:>10.4} {:>8.4} {:>8.4} {:>10.4}\n",
            m.name, m.accuracy, m.macro_precision, m.macro_recall, m.macro_f1, m.macro_auc
        ));
    }
    if !report.warnings.is_empty() {
        out.push_str("warnings:\n");
        for w in &report.warnings {
            out.push_str(&format!("  - {w}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_rounds_to_twelve_digits() {
        assert_eq!(sig12(0.9819805060619659), 0.981980506062);
        assert_eq!(sig12(1.0), 1.0);
        assert_eq!(sig12(0.0), 0.0);
        assert_eq!(sig12(-3.14159265358979), -3.14159265359);
    }

    #[test]
    fn fingerprint_is_stable_and_name_sensitive() {
        let canonical = Schema::canonical();
        let a = schema_fingerprint(&canonical);
        let b = schema_fingerprint(&canonical);
        assert_eq!(a, b);
        let subset = canonical.select(&[0, 1, 2]);
        assert_ne!(a, schema_fingerprint(&subset));
    }
}
