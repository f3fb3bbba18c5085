//! The batch pipeline: wires loading, preprocessing, resampling, the three
//! models, and evaluation according to the configured protocol.

use std::path::Path;
use std::time::Instant;

use ovca_core::dataset::{ClassLabel, FeatureMatrix, LabeledDataset, NUM_CLASSES};
use ovca_core::impute::{fit_imputer, impute, KnnImputerModel};
use ovca_core::metrics::{confusion, eq_metrics, macro_ovr_auc};
use ovca_core::models::forest::{rf_fit, ForestParams, RandomForestModel};
use ovca_core::models::gbt::{gbt_fit, GbtModel, GbtParams};
use ovca_core::models::knn::{knn_fit, KnnClassifier};
use ovca_core::models::{argmax_class, ClassProbabilities};
use ovca_core::scale::{fit_scaler, fit_standard_scaler, scale, ScalerKind, ScalerModel};
use ovca_core::schema::Schema;
use ovca_core::smote::{smote_oversample, SmoteConfig};
use ovca_core::split::stratified_split;
use ovca_core::stats::pearson_correlation_matrix;
use ovca_core::synth::generate;

use crate::config::{PipelineConfig, Protocol, ScalerKindConfig};
use crate::csvio::load_csv;
use crate::report::{
    schema_fingerprint, sig12, ClassCountRow, CorrelationReport, ImputerReport, ModelReport,
    PerClassMetrics, RocFile, RunReport, ScalerReport, TransformerReport,
};
use crate::CliError;

struct StageClock {
    start: Instant,
}

impl StageClock {
    fn new() -> Self {
        StageClock { start: Instant::now() }
    }

    /// Wall time goes to stderr only: the report files must be bit-identical
    /// across reruns, so timings never enter them.
    fn lap(&mut self, stage: &str) {
        eprintln!("[stage] {stage}: {:.3}s", self.start.elapsed().as_secs_f64());
        self.start = Instant::now();
    }
}

fn load_input(config: &PipelineConfig) -> Result<LabeledDataset, CliError> {
    let schema = Schema::canonical();
    match (&config.input.csv, &config.input.generator) {
        (Some(path), None) => load_csv(Path::new(path), &schema),
        (None, Some(generator)) => Ok(generate(&generator.to_spec())?),
        _ => unreachable!("validated on load"),
    }
}

/// Drops feature columns whose missing fraction exceeds the threshold.
fn filter_columns(
    data: &LabeledDataset,
    max_missing_fraction: f64,
    warnings: &mut Vec<String>,
) -> LabeledDataset {
    let features = &data.features;
    let n_rows = features.n_rows().max(1);
    let keep: Vec<usize> = (0..features.n_cols())
        .filter(|&c| {
            let missing = (0..features.n_rows()).filter(|&r| features.is_missing(r, c)).count();
            let fraction = missing as f64 / n_rows as f64;
            if fraction > max_missing_fraction {
                warnings.push(format!(
                    "ColumnDropped: `{}` missing fraction {:.3} exceeds threshold {}",
                    features.schema().name(c),
                    fraction,
                    max_missing_fraction
                ));
                false
            } else {
                true
            }
        })
        .collect();
    if keep.len() == features.n_cols() {
        return data.clone();
    }
    LabeledDataset {
        features: features.select_columns(&keep),
        labels: data.labels.clone(),
    }
}

fn fit_configured_scaler(
    kind: ScalerKindConfig,
    data: &FeatureMatrix,
) -> Result<ScalerModel, CliError> {
    Ok(match kind {
        ScalerKindConfig::Minmax => fit_scaler(data)?,
        ScalerKindConfig::Standard => fit_standard_scaler(data)?,
    })
}

pub struct FittedModels {
    pub knn: KnnClassifier,
    pub forest: RandomForestModel,
    pub gbt: GbtModel,
}

fn fit_models(config: &PipelineConfig, train: &LabeledDataset) -> Result<FittedModels, CliError> {
    let rf = &config.models.random_forest;
    let forest_params = ForestParams {
        n_trees: rf.n_trees,
        features_per_split: (rf.features_per_split > 0).then_some(rf.features_per_split),
        max_depth: (rf.max_depth > 0).then_some(rf.max_depth),
        min_samples_leaf: rf.min_samples_leaf,
        bootstrap: rf.bootstrap,
    };
    let g = &config.models.gbt;
    let gbt_params = GbtParams {
        rounds: g.rounds,
        learning_rate: g.learning_rate,
        max_depth: g.max_depth,
        lambda: g.lambda,
        gamma: g.gamma,
    };
    Ok(FittedModels {
        knn: knn_fit(train, config.models.knn.k)?,
        forest: rf_fit(train, forest_params, rf.seed)?,
        gbt: gbt_fit(train, gbt_params, g.seed)?,
    })
}

fn evaluate_model(
    name: &str,
    probas: &[ClassProbabilities],
    test: &LabeledDataset,
    warnings: &mut Vec<String>,
) -> Result<(ModelReport, Vec<RocFile>), CliError> {
    let y_pred: Vec<ClassLabel> = probas
        .iter()
        .map(|p| ClassLabel::from_id(argmax_class(p)).unwrap())
        .collect();
    let cm = confusion(&test.labels, &y_pred)?;
    let eq = eq_metrics(&cm)?;
    for w in &eq.warnings {
        warnings.push(format!("{name}: {w}"));
    }
    let ovr = macro_ovr_auc(&test.labels, probas)?;
    for w in &ovr.warnings {
        warnings.push(format!("{name}: {w}"));
    }

    let mut roc_files = Vec::new();
    let mut per_class = Vec::with_capacity(NUM_CLASSES);
    for class in 0..NUM_CLASSES {
        let auc = ovr.per_class[class].as_ref().map(|(curve, auc)| {
            roc_files.push(RocFile {
                file_name: format!("roc_{name}_{class}.csv"),
                curve: curve.clone(),
            });
            sig12(*auc)
        });
        per_class.push(PerClassMetrics {
            class: ClassLabel::from_id(class).unwrap().display().to_string(),
            precision: sig12(eq.per_class[class].precision),
            recall: sig12(eq.per_class[class].recall),
            f1: sig12(eq.per_class[class].f1),
            auc,
        });
    }

    let report = ModelReport {
        name: name.to_string(),
        accuracy: sig12(eq.accuracy),
        macro_precision: sig12(eq.macro_precision),
        macro_recall: sig12(eq.macro_recall),
        macro_f1: sig12(eq.macro_f1),
        macro_auc: sig12(ovr.macro_auc),
        per_class,
        roc_files: roc_files.iter().map(|f| f.file_name.clone()).collect(),
    };
    Ok((report, roc_files))
}

struct PreparedData {
    train: LabeledDataset,
    test: LabeledDataset,
    counts_before: [usize; NUM_CLASSES],
    counts_after: [usize; NUM_CLASSES],
    correlation_source: FeatureMatrix,
    imputer: KnnImputerModel,
    scaler: ScalerModel,
    warnings: Vec<String>,
}

fn prepare_leakage_safe(
    config: &PipelineConfig,
    data: &LabeledDataset,
    clock: &mut StageClock,
    warnings: Vec<String>,
) -> Result<PreparedData, CliError> {
    let mut warnings = warnings;
    let pair = stratified_split(data, config.split.train_fraction, config.split.seed)?;
    clock.lap("split");

    let imputer = fit_imputer(&pair.train.features, config.imputer.k)?;
    let train_features = impute(&imputer, &pair.train.features)?;
    let test_features = impute(&imputer, &pair.test.features)?;
    clock.lap("impute");

    let correlation_source = train_features.clone();

    let scaler = fit_configured_scaler(config.scaler.kind, &train_features)?;
    let train_scaled = scale(&scaler, &train_features)?;
    let test_scaled = scale(&scaler, &test_features)?;
    clock.lap("scale");

    let train = LabeledDataset::new(train_scaled, pair.train.labels.clone())?;
    let counts_before = train.class_counts();
    let smote = smote_oversample(
        &train,
        &SmoteConfig::new(config.smote.k, config.smote.seed),
    )?;
    warnings.extend(smote.warnings.iter().cloned());
    let counts_after = smote.data.class_counts();
    clock.lap("smote");

    Ok(PreparedData {
        train: smote.data,
        test: LabeledDataset::new(test_scaled, pair.test.labels.clone())?,
        counts_before,
        counts_after,
        correlation_source,
        imputer,
        scaler,
        warnings,
    })
}

fn prepare_paper_order(
    config: &PipelineConfig,
    data: &LabeledDataset,
    clock: &mut StageClock,
    warnings: Vec<String>,
) -> Result<PreparedData, CliError> {
    let mut warnings = warnings;
    let imputer = fit_imputer(&data.features, config.imputer.k)?;
    let imputed = impute(&imputer, &data.features)?;
    clock.lap("impute");

    let correlation_source = imputed.clone();

    let full = LabeledDataset::new(imputed, data.labels.clone())?;
    let counts_before = full.class_counts();
    let smote = smote_oversample(
        &full,
        &SmoteConfig::new(config.smote.k, config.smote.seed),
    )?;
    warnings.extend(smote.warnings.iter().cloned());
    let counts_after = smote.data.class_counts();
    clock.lap("smote");

    let pair = stratified_split(&smote.data, config.split.train_fraction, config.split.seed)?;
    clock.lap("split");

    let scaler = fit_configured_scaler(config.scaler.kind, &smote.data.features)?;
    let train_scaled = scale(&scaler, &pair.train.features)?;
    let test_scaled = scale(&scaler, &pair.test.features)?;
    clock.lap("scale");

    Ok(PreparedData {
        train: LabeledDataset::new(train_scaled, pair.train.labels.clone())?,
        test: LabeledDataset::new(test_scaled, pair.test.labels.clone())?,
        counts_before,
        counts_after,
        correlation_source,
        imputer,
        scaler,
        warnings,
    })
}

/// Runs the configured pipeline end to end and assembles the report. No
/// files are written; pair with [`crate::report::emit_report`].
pub fn run(config: &PipelineConfig) -> Result<RunReport, CliError> {
    config.validate()?;
    let mut clock = StageClock::new();

    let data = load_input(config)?;
    clock.lap("load");

    let mut warnings = Vec::new();
    let data = match &config.filter {
        Some(filter) => filter_columns(&data, filter.max_missing_fraction, &mut warnings),
        None => data,
    };

    let prepared = match config.protocol {
        Protocol::LeakageSafe => prepare_leakage_safe(config, &data, &mut clock, warnings)?,
        Protocol::PaperOrder => prepare_paper_order(config, &data, &mut clock, warnings)?,
    };
    let mut warnings = prepared.warnings;

    let correlation = pearson_correlation_matrix(&prepared.correlation_source)?;
    for column in &correlation.zero_variance {
        warnings.push(format!("ZeroVariance: column `{column}` is constant"));
    }
    clock.lap("correlation");

    let models = fit_models(config, &prepared.train)?;
    clock.lap("fit-models");

    let test = &prepared.test;
    let mut model_reports = Vec::new();
    let mut roc_curves = Vec::new();
    let probe = |f: &dyn Fn(&[f64]) -> ClassProbabilities| -> Vec<ClassProbabilities> {
        (0..test.n_rows()).map(|i| f(test.features.row(i))).collect()
    };
    let evaluations: [(&str, Vec<ClassProbabilities>); 3] = [
        ("knn", probe(&|x| models.knn.predict_proba(x))),
        ("random_forest", probe(&|x| models.forest.predict_proba(x))),
        ("gbt", probe(&|x| models.gbt.predict_proba(x))),
    ];
    for (name, probas) in &evaluations {
        let (report, files) = evaluate_model(name, probas, test, &mut warnings)?;
        model_reports.push(report);
        roc_curves.extend(files);
    }
    clock.lap("evaluate");

    let n = correlation.n();
    let correlation_values: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| sig12(correlation.get(i, j))).collect())
        .collect();

    let class_counts = ClassLabel::ALL
        .iter()
        .map(|&c| ClassCountRow {
            class: c.display().to_string(),
            before: prepared.counts_before[c.id()],
            after: prepared.counts_after[c.id()],
        })
        .collect();

    Ok(RunReport {
        format_version: 1,
        protocol: config.protocol.tag().to_string(),
        schema_fingerprint: schema_fingerprint(prepared.correlation_source.schema()),
        config: config.clone(),
        class_counts,
        correlation: CorrelationReport {
            names: correlation.names.clone(),
            values: correlation_values,
            zero_variance: correlation.zero_variance.clone(),
        },
        transformers: TransformerReport {
            imputer: ImputerReport {
                k: prepared.imputer.k(),
                donor_rows: prepared.imputer.donors().n_rows(),
            },
            scaler: ScalerReport {
                kind: match prepared.scaler.kind {
                    ScalerKind::MinMax => "minmax".to_string(),
                    ScalerKind::Standard => "standard".to_string(),
                },
                params: prepared.scaler.params.iter().map(|&(a, b)| (sig12(a), sig12(b))).collect(),
            },
        },
        models: model_reports,
        warnings,
        roc_curves,
    })
}
