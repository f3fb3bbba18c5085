//! Run configuration: a TOML file with nested sections. Every default the
//! run uses is materialized back into the report's config echo, and all
//! seeds must be written out explicitly — there are no wall-clock defaults.

use std::path::Path;

use serde::{Deserialize, Serialize};

use ovca_core::synth::GeneratorSpec;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    /// load -> split -> fit imputer/scaler on train -> transform both ->
    /// SMOTE train only -> fit models -> evaluate on the untouched test set.
    LeakageSafe,
    /// load -> impute -> SMOTE -> split -> scale (fit on all) -> fit ->
    /// evaluate. Reproduces the flowchart ordering, which lets training-time
    /// statistics leak across the split.
    PaperOrder,
}

impl Protocol {
    pub fn tag(&self) -> &'static str {
        match self {
            Protocol::LeakageSafe => "leakage-safe",
            Protocol::PaperOrder => "paper-order",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalerKindConfig {
    Minmax,
    Standard,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub n_rows: usize,
    pub class_priors: [f64; 3],
    pub signal_strength: f64,
    #[serde(default)]
    pub missing_rate: f64,
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn to_spec(&self) -> GeneratorSpec {
        GeneratorSpec {
            n_rows: self.n_rows,
            class_priors: self.class_priors,
            signal_strength: self.signal_strength,
            missing_rate: self.missing_rate,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct InputConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorConfig>,
}

/// Optional column filter: feature columns whose missing fraction exceeds
/// the threshold are dropped before imputation.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FilterConfig {
    pub max_missing_fraction: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ImputerConfig {
    #[serde(default = "default_imputer_k")]
    pub k: usize,
}

fn default_imputer_k() -> usize {
    ovca_core::impute::DEFAULT_K
}

impl Default for ImputerConfig {
    fn default() -> Self {
        ImputerConfig { k: default_imputer_k() }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ScalerConfig {
    #[serde(default = "default_scaler_kind")]
    pub kind: ScalerKindConfig,
}

fn default_scaler_kind() -> ScalerKindConfig {
    ScalerKindConfig::Minmax
}

impl Default for ScalerConfig {
    fn default() -> Self {
        ScalerConfig { kind: default_scaler_kind() }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SmoteSection {
    #[serde(default = "default_smote_k")]
    pub k: usize,
    pub seed: u64,
}

fn default_smote_k() -> usize {
    ovca_core::smote::DEFAULT_K
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SplitConfig {
    #[serde(default = "default_train_fraction")]
    pub train_fraction: f64,
    pub seed: u64,
}

fn default_train_fraction() -> f64 {
    0.8
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct KnnConfig {
    #[serde(default = "default_knn_k")]
    pub k: usize,
}

fn default_knn_k() -> usize {
    ovca_core::models::knn::DEFAULT_K
}

impl Default for KnnConfig {
    fn default() -> Self {
        KnnConfig { k: default_knn_k() }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RandomForestConfig {
    #[serde(default = "default_n_trees")]
    pub n_trees: usize,
    /// 0 means floor(sqrt(n_features)).
    #[serde(default)]
    pub features_per_split: usize,
    /// 0 means unlimited.
    #[serde(default)]
    pub max_depth: usize,
    #[serde(default = "default_min_samples_leaf")]
    pub min_samples_leaf: usize,
    #[serde(default = "default_true")]
    pub bootstrap: bool,
    pub seed: u64,
}

fn default_n_trees() -> usize {
    100
}

fn default_min_samples_leaf() -> usize {
    1
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GbtConfig {
    #[serde(default = "default_rounds")]
    pub rounds: usize,
    #[serde(default = "default_learning_rate")]
    pub learning_rate: f64,
    #[serde(default = "default_gbt_depth")]
    pub max_depth: usize,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    #[serde(default)]
    pub gamma: f64,
    pub seed: u64,
}

fn default_rounds() -> usize {
    100
}

fn default_learning_rate() -> f64 {
    0.3
}

fn default_gbt_depth() -> usize {
    6
}

fn default_lambda() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelsConfig {
    #[serde(default)]
    pub knn: KnnConfig,
    pub random_forest: RandomForestConfig,
    pub gbt: GbtConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub protocol: Protocol,
    pub output_dir: String,
    pub input: InputConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filter: Option<FilterConfig>,
    #[serde(default)]
    pub imputer: ImputerConfig,
    #[serde(default)]
    pub scaler: ScalerConfig,
    pub smote: SmoteSection,
    pub split: SplitConfig,
    pub models: ModelsConfig,
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<PipelineConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
        let config: PipelineConfig = toml::from_str(&text)
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        match (&self.input.csv, &self.input.generator) {
            (Some(_), Some(_)) => {
                return Err(CliError::Validation(
                    "input must name exactly one source, found both csv and generator".into(),
                ))
            }
            (None, None) => {
                return Err(CliError::Validation(
                    "input must name exactly one source (csv or generator)".into(),
                ))
            }
            _ => {}
        }
        if let Some(g) = &self.input.generator {
            g.to_spec().validate().map_err(|e| CliError::Validation(e.to_string()))?;
        }
        if !(self.split.train_fraction > 0.0 && self.split.train_fraction < 1.0) {
            return Err(CliError::Validation("split.train_fraction must be in (0,1)".into()));
        }
        if let Some(f) = &self.filter {
            if !(0.0..=1.0).contains(&f.max_missing_fraction) {
                return Err(CliError::Validation(
                    "filter.max_missing_fraction must be in [0,1]".into(),
                ));
            }
        }
        if self.imputer.k == 0 || self.smote.k == 0 || self.models.knn.k == 0 {
            return Err(CliError::Validation("neighbor counts must be >= 1".into()));
        }
        if self.models.random_forest.n_trees == 0 {
            return Err(CliError::Validation("random_forest.n_trees must be >= 1".into()));
        }
        if self.models.gbt.learning_rate <= 0.0 {
            return Err(CliError::Validation("gbt.learning_rate must be > 0".into()));
        }
        Ok(())
    }
}
