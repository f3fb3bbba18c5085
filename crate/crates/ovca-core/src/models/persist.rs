//! Versioned text serialization for the three model types.
//!
//! The format is line-oriented, whitespace-tokenized, and binary-free. Floats
//! are written with Rust's shortest round-trip `Display`, so reload followed
//! by prediction is bit-identical to the original model.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use crate::dataset::{ClassLabel, FeatureMatrix, NUM_CLASSES};
use crate::error::{Error, Result};
use crate::models::forest::{ForestParams, RandomForestModel};
use crate::models::gbt::{GbtModel, GbtParams, RegNode, RegressionTree};
use crate::models::knn::KnnClassifier;
use crate::models::tree::{DecisionTree, TreeNode};
use crate::schema::{ColumnKind, ColumnSchema, Schema};

const HEADER: &str = "ovca-model v1";

fn bad(what: &str) -> Error {
    Error::BadModelFormat { what: what.to_string() }
}

struct Lines<'a> {
    inner: core::str::Lines<'a>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { inner: text.lines() }
    }

    fn next_tokens(&mut self) -> Result<Vec<&'a str>> {
        loop {
            let line = self.inner.next().ok_or_else(|| bad("unexpected end of input"))?;
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if !tokens.is_empty() {
                return Ok(tokens);
            }
        }
    }

    fn expect(&mut self, keyword: &str) -> Result<Vec<&'a str>> {
        let tokens = self.next_tokens()?;
        if tokens[0] != keyword {
            return Err(bad(&format!("expected `{keyword}`, found `{}`", tokens[0])));
        }
        Ok(tokens)
    }
}

fn parse_usize(token: &str) -> Result<usize> {
    token.parse().map_err(|_| bad(&format!("bad integer `{token}`")))
}

fn parse_f64(token: &str) -> Result<f64> {
    token.parse().map_err(|_| bad(&format!("bad number `{token}`")))
}

fn check_header(lines: &mut Lines<'_>, kind: &str) -> Result<()> {
    let header = lines.next_tokens()?;
    if header != ["ovca-model", "v1"] {
        return Err(bad("unknown header or version"));
    }
    let k = lines.expect("kind")?;
    if k.get(1) != Some(&kind) {
        return Err(bad(&format!("expected kind `{kind}`")));
    }
    Ok(())
}

// ---- knn ----

pub fn knn_to_text(model: &KnnClassifier) -> String {
    let (k, features, labels) = model.parts();
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER}");
    let _ = writeln!(out, "kind knn");
    let _ = writeln!(out, "k {k}");
    write_columns(&mut out, features);
    let _ = writeln!(out, "rows {}", features.n_rows());
    for r in 0..features.n_rows() {
        let _ = write!(out, "row {}", labels[r].id());
        for v in features.row(r) {
            let _ = write!(out, " {v}");
        }
        let _ = writeln!(out);
    }
    out
}

pub fn knn_from_text(text: &str) -> Result<KnnClassifier> {
    let mut lines = Lines::new(text);
    check_header(&mut lines, "knn")?;
    let k = parse_usize(lines.expect("k")?.get(1).ok_or_else(|| bad("missing k"))?)?;
    let schema = read_columns(&mut lines)?;
    let n_rows = parse_usize(lines.expect("rows")?.get(1).ok_or_else(|| bad("missing rows"))?)?;
    let n_cols = schema.len();
    let mut labels = Vec::with_capacity(n_rows);
    let mut values = Vec::with_capacity(n_rows * n_cols);
    for _ in 0..n_rows {
        let tokens = lines.expect("row")?;
        if tokens.len() != 2 + n_cols {
            return Err(bad("row width mismatch"));
        }
        let id = parse_usize(tokens[1])?;
        labels.push(ClassLabel::from_id(id).ok_or_else(|| bad("bad class id"))?);
        for t in &tokens[2..] {
            values.push(parse_f64(t)?);
        }
    }
    let features = FeatureMatrix::from_raw(schema, n_rows, values);
    Ok(KnnClassifier::from_parts(k, features, labels))
}

fn write_columns(out: &mut String, features: &FeatureMatrix) {
    let _ = write!(out, "cols {}", features.n_cols());
    for c in 0..features.n_cols() {
        let _ = write!(out, " {}", features.schema().name(c));
    }
    let _ = writeln!(out);
}

fn read_columns(lines: &mut Lines<'_>) -> Result<Schema> {
    let tokens = lines.expect("cols")?;
    let n = parse_usize(tokens.get(1).ok_or_else(|| bad("missing column count"))?)?;
    if tokens.len() != 2 + n {
        return Err(bad("column name count mismatch"));
    }
    Schema::new(
        tokens[2..]
            .iter()
            .map(|&name| ColumnSchema {
                name: name.to_string(),
                kind: ColumnKind::NumericContinuous,
                allowed_missing: true,
            })
            .collect(),
    )
}

// ---- random forest ----

pub fn forest_to_text(model: &RandomForestModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER}");
    let _ = writeln!(out, "kind random_forest");
    let _ = writeln!(out, "trees {}", model.trees.len());
    for (i, tree) in model.trees.iter().enumerate() {
        let _ = writeln!(out, "tree {i} nodes {}", tree.nodes.len());
        for node in &tree.nodes {
            match node {
                TreeNode::Split { feature, threshold, left, right } => {
                    let _ = writeln!(out, "split {feature} {threshold} {left} {right}");
                }
                TreeNode::Leaf { distribution } => {
                    let _ = writeln!(
                        out,
                        "leaf {} {} {}",
                        distribution[0], distribution[1], distribution[2]
                    );
                }
            }
        }
    }
    out
}

pub fn forest_from_text(text: &str) -> Result<RandomForestModel> {
    let mut lines = Lines::new(text);
    check_header(&mut lines, "random_forest")?;
    let n_trees =
        parse_usize(lines.expect("trees")?.get(1).ok_or_else(|| bad("missing tree count"))?)?;
    let mut trees = Vec::with_capacity(n_trees);
    for _ in 0..n_trees {
        let header = lines.expect("tree")?;
        let n_nodes =
            parse_usize(header.get(3).ok_or_else(|| bad("missing node count"))?)?;
        let mut nodes = Vec::with_capacity(n_nodes);
        for _ in 0..n_nodes {
            let tokens = lines.next_tokens()?;
            nodes.push(parse_class_node(&tokens)?);
        }
        trees.push(DecisionTree { nodes });
    }
    Ok(RandomForestModel {
        trees,
        // structural parameters are not needed for prediction; defaults echo
        // the common configuration
        params: ForestParams { n_trees, ..ForestParams::default() },
        seed: 0,
    })
}

fn parse_class_node(tokens: &[&str]) -> Result<TreeNode> {
    match tokens[0] {
        "split" if tokens.len() == 5 => Ok(TreeNode::Split {
            feature: parse_usize(tokens[1])?,
            threshold: parse_f64(tokens[2])?,
            left: parse_usize(tokens[3])?,
            right: parse_usize(tokens[4])?,
        }),
        "leaf" if tokens.len() == 1 + NUM_CLASSES => {
            let mut distribution = [0.0; NUM_CLASSES];
            for c in 0..NUM_CLASSES {
                distribution[c] = parse_f64(tokens[1 + c])?;
            }
            Ok(TreeNode::Leaf { distribution })
        }
        other => Err(bad(&format!("bad node record `{other}`"))),
    }
}

// ---- gradient-boosted trees ----

pub fn gbt_to_text(model: &GbtModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER}");
    let _ = writeln!(out, "kind gbt");
    let _ = writeln!(out, "rounds {}", model.trees.len());
    let _ = writeln!(out, "learning_rate {}", model.params.learning_rate);
    let _ = writeln!(out, "base_score {}", model.base_score);
    for (round, per_class) in model.trees.iter().enumerate() {
        for (class, tree) in per_class.iter().enumerate() {
            let _ = writeln!(out, "tree {round} {class} nodes {}", tree.nodes.len());
            for node in &tree.nodes {
                match node {
                    RegNode::Split { feature, threshold, left, right } => {
                        let _ = writeln!(out, "split {feature} {threshold} {left} {right}");
                    }
                    RegNode::Leaf { weight } => {
                        let _ = writeln!(out, "leaf {weight}");
                    }
                }
            }
        }
    }
    out
}

pub fn gbt_from_text(text: &str) -> Result<GbtModel> {
    let mut lines = Lines::new(text);
    check_header(&mut lines, "gbt")?;
    let rounds =
        parse_usize(lines.expect("rounds")?.get(1).ok_or_else(|| bad("missing rounds"))?)?;
    let learning_rate = parse_f64(
        lines.expect("learning_rate")?.get(1).ok_or_else(|| bad("missing learning_rate"))?,
    )?;
    let base_score =
        parse_f64(lines.expect("base_score")?.get(1).ok_or_else(|| bad("missing base_score"))?)?;

    let mut trees = Vec::with_capacity(rounds);
    for _ in 0..rounds {
        let mut per_class: Vec<RegressionTree> = Vec::with_capacity(NUM_CLASSES);
        for _ in 0..NUM_CLASSES {
            let header = lines.expect("tree")?;
            let n_nodes =
                parse_usize(header.get(4).ok_or_else(|| bad("missing node count"))?)?;
            let mut nodes = Vec::with_capacity(n_nodes);
            for _ in 0..n_nodes {
                let tokens = lines.next_tokens()?;
                nodes.push(parse_reg_node(&tokens)?);
            }
            per_class.push(RegressionTree { nodes });
        }
        let arr: [RegressionTree; NUM_CLASSES] =
            per_class.try_into().map_err(|_| bad("bad per-class tree count"))?;
        trees.push(arr);
    }
    Ok(GbtModel {
        params: GbtParams { rounds, learning_rate, ..GbtParams::default() },
        base_score,
        trees,
    })
}

fn parse_reg_node(tokens: &[&str]) -> Result<RegNode> {
    match tokens[0] {
        "split" if tokens.len() == 5 => Ok(RegNode::Split {
            feature: parse_usize(tokens[1])?,
            threshold: parse_f64(tokens[2])?,
            left: parse_usize(tokens[3])?,
            right: parse_usize(tokens[4])?,
        }),
        "leaf" if tokens.len() == 2 => Ok(RegNode::Leaf { weight: parse_f64(tokens[1])? }),
        other => Err(bad(&format!("bad node record `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::LabeledDataset;
    use crate::models::forest::rf_fit;
    use crate::models::gbt::gbt_fit;
    use crate::models::knn::knn_fit;
    use alloc::vec;

    fn dataset() -> LabeledDataset {
        let schema = Schema::canonical().select(&[0, 1, 2]);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..12 {
            let t = i as f64 * 0.37;
            rows.push(vec![t, t * t * 0.1, 3.0 - t]);
            labels.push(ClassLabel::from_id(i % 3).unwrap());
        }
        LabeledDataset::new(FeatureMatrix::dense(schema, &rows).unwrap(), labels).unwrap()
    }

    #[test]
    fn knn_round_trip_exact() {
        let data = dataset();
        let model = knn_fit(&data, 4).unwrap();
        let reloaded = knn_from_text(&knn_to_text(&model)).unwrap();
        for i in 0..data.n_rows() {
            let x = data.features.row(i);
            assert_eq!(model.predict_proba(x), reloaded.predict_proba(x));
        }
    }

    #[test]
    fn forest_round_trip_exact() {
        let data = dataset();
        let model = rf_fit(&data, ForestParams { n_trees: 5, ..Default::default() }, 77).unwrap();
        let reloaded = forest_from_text(&forest_to_text(&model)).unwrap();
        assert_eq!(model.trees, reloaded.trees);
        for i in 0..data.n_rows() {
            let x = data.features.row(i);
            assert_eq!(model.predict_proba(x), reloaded.predict_proba(x));
        }
    }

    #[test]
    fn gbt_round_trip_exact() {
        let data = dataset();
        let model =
            gbt_fit(&data, GbtParams { rounds: 5, ..Default::default() }, 0).unwrap();
        let reloaded = gbt_from_text(&gbt_to_text(&model)).unwrap();
        assert_eq!(model.trees, reloaded.trees);
        for i in 0..data.n_rows() {
            let x = data.features.row(i);
            assert_eq!(model.predict_proba(x), reloaded.predict_proba(x));
        }
    }

    #[test]
    fn wrong_kind_rejected() {
        let data = dataset();
        let model = knn_fit(&data, 3).unwrap();
        assert!(forest_from_text(&knn_to_text(&model)).is_err());
    }

    #[test]
    fn truncated_input_rejected() {
        let data = dataset();
        let model = knn_fit(&data, 3).unwrap();
        let text = knn_to_text(&model);
        let cut = &text[..text.len() / 2];
        assert!(knn_from_text(cut).is_err());
    }
}
