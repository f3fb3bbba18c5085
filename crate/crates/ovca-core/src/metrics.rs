//! Confusion-matrix metrics, one-vs-rest ROC curves, and AUC.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::{ClassLabel, NUM_CLASSES};
use crate::error::{Error, Result};

/// C x C count table, rows = true class, cols = predicted class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    n_classes: usize,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn from_counts(n_classes: usize, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != n_classes * n_classes {
            return Err(Error::LengthMismatch {
                left: counts.len(),
                right: n_classes * n_classes,
            });
        }
        Ok(ConfusionMatrix { n_classes, counts })
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn get(&self, true_class: usize, pred_class: usize) -> u64 {
        self.counts[true_class * self.n_classes + pred_class]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// One-vs-rest (TP, FP, FN, TN) for a class.
    pub fn ovr(&self, class: usize) -> (u64, u64, u64, u64) {
        let tp = self.get(class, class);
        let fp: u64 = (0..self.n_classes)
            .filter(|&t| t != class)
            .map(|t| self.get(t, class))
            .sum();
        let fn_: u64 = (0..self.n_classes)
            .filter(|&p| p != class)
            .map(|p| self.get(class, p))
            .sum();
        let tn = self.total() - tp - fp - fn_;
        (tp, fp, fn_, tn)
    }
}

/// Tallies a 3-class confusion matrix from aligned label vectors.
pub fn confusion(y_true: &[ClassLabel], y_pred: &[ClassLabel]) -> Result<ConfusionMatrix> {
    if y_true.len() != y_pred.len() {
        return Err(Error::LengthMismatch { left: y_true.len(), right: y_pred.len() });
    }
    if y_true.is_empty() {
        return Err(Error::InvalidParameter { what: "empty label vectors".into() });
    }
    let mut counts = vec![0u64; NUM_CLASSES * NUM_CLASSES];
    for (t, p) in y_true.iter().zip(y_pred) {
        counts[t.id() * NUM_CLASSES + p.id()] += 1;
    }
    ConfusionMatrix::from_counts(NUM_CLASSES, counts)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Accuracy plus per-class and macro precision/recall/F1.
#[derive(Debug, Clone, PartialEq)]
pub struct EqMetrics {
    pub accuracy: f64,
    pub per_class: Vec<ClassMetrics>,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    /// Zero-denominator notices; the affected metric is reported as 0.
    pub warnings: Vec<String>,
}

fn ratio_or_zero(num: f64, den: f64, what: &str, warnings: &mut Vec<String>) -> f64 {
    if den == 0.0 {
        warnings.push(format!("ZeroDenominator: {what} undefined, reported as 0"));
        0.0
    } else {
        num / den
    }
}

/// Derives accuracy (trace/total) and one-vs-rest precision, recall, and F1
/// per class, with unweighted macro means. Undefined ratios become 0 with a
/// warning.
pub fn eq_metrics(cm: &ConfusionMatrix) -> Result<EqMetrics> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::InvalidParameter { what: "empty confusion matrix".into() });
    }
    let trace: u64 = (0..cm.n_classes()).map(|c| cm.get(c, c)).sum();
    let accuracy = trace as f64 / total as f64;

    let mut warnings = Vec::new();
    let per_class: Vec<ClassMetrics> = (0..cm.n_classes())
        .map(|c| {
            let (tp, fp, fn_, _tn) = cm.ovr(c);
            let precision = ratio_or_zero(
                tp as f64,
                (tp + fp) as f64,
                &format!("precision of class {c}"),
                &mut warnings,
            );
            let recall = ratio_or_zero(
                tp as f64,
                (tp + fn_) as f64,
                &format!("recall of class {c}"),
                &mut warnings,
            );
            let f1 = if precision + recall == 0.0 {
                0.0
            } else {
                2.0 * precision * recall / (precision + recall)
            };
            ClassMetrics { precision, recall, f1 }
        })
        .collect();

    let k = per_class.len() as f64;
    Ok(EqMetrics {
        accuracy,
        macro_precision: per_class.iter().map(|m| m.precision).sum::<f64>() / k,
        macro_recall: per_class.iter().map(|m| m.recall).sum::<f64>() / k,
        macro_f1: per_class.iter().map(|m| m.f1).sum::<f64>() / k,
        per_class,
        warnings,
    })
}

/// Ordered (FPR, TPR) points swept over descending score thresholds. Always
/// starts at (0, 0) and ends at (1, 1); both coordinates are non-decreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    pub points: Vec<(f64, f64)>,
}

/// Builds the ROC curve for binary labels scored by `scores`. Tied scores
/// collapse into a single threshold step, which makes the trapezoidal area
/// equal the half-credit pairwise-ranking statistic.
pub fn roc_curve(y_true: &[bool], scores: &[f64]) -> Result<RocCurve> {
    if y_true.len() != scores.len() {
        return Err(Error::LengthMismatch { left: y_true.len(), right: scores.len() });
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::InvalidParameter { what: "non-finite score".into() });
    }
    let pos = y_true.iter().filter(|&&t| t).count();
    let neg = y_true.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::DegenerateLabels);
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).unwrap().then(a.cmp(&b)));

    let mut points = vec![(0.0, 0.0)];
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut i = 0;
    while i < order.len() {
        let score = scores[order[i]];
        while i < order.len() && scores[order[i]] == score {
            if y_true[order[i]] {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push((fp as f64 / neg as f64, tp as f64 / pos as f64));
    }
    Ok(RocCurve { points })
}

/// Trapezoidal area under the curve.
pub fn auc(curve: &RocCurve) -> f64 {
    curve
        .points
        .windows(2)
        .map(|w| {
            let (x0, y0) = w[0];
            let (x1, y1) = w[1];
            (x1 - x0) * (y0 + y1) / 2.0
        })
        .sum()
}

/// Per-class one-vs-rest ROC/AUC plus the macro mean over classes present.
#[derive(Debug, Clone)]
pub struct OvrRocReport {
    /// Indexed by class id; `None` when the class is absent from `y_true`.
    pub per_class: Vec<Option<(RocCurve, f64)>>,
    pub macro_auc: f64,
    pub warnings: Vec<String>,
}

pub fn macro_ovr_auc(y_true: &[ClassLabel], probas: &[[f64; NUM_CLASSES]]) -> Result<OvrRocReport> {
    if y_true.len() != probas.len() {
        return Err(Error::LengthMismatch { left: y_true.len(), right: probas.len() });
    }
    let mut warnings = Vec::new();
    let mut per_class = Vec::with_capacity(NUM_CLASSES);
    let mut sum = 0.0;
    let mut present = 0usize;
    for class in 0..NUM_CLASSES {
        let binary: Vec<bool> = y_true.iter().map(|l| l.id() == class).collect();
        if !binary.iter().any(|&b| b) {
            warnings.push(format!("ClassAbsent: class {class} absent, excluded from macro AUC"));
            per_class.push(None);
            continue;
        }
        let scores: Vec<f64> = probas.iter().map(|p| p[class]).collect();
        let curve = roc_curve(&binary, &scores)?;
        let a = auc(&curve);
        sum += a;
        present += 1;
        per_class.push(Some((curve, a)));
    }
    if present < 2 {
        return Err(Error::DegenerateLabels);
    }
    Ok(OvrRocReport { per_class, macro_auc: sum / present as f64, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(ids: &[usize]) -> Vec<ClassLabel> {
        ids.iter().map(|&i| ClassLabel::from_id(i).unwrap()).collect()
    }

    #[test]
    fn perfect_prediction_is_diagonal() {
        let cm = confusion(&labels(&[0, 1, 2]), &labels(&[0, 1, 2])).unwrap();
        for c in 0..3 {
            assert_eq!(cm.get(c, c), 1);
        }
        assert_eq!(cm.total(), 3);
    }

    #[test]
    fn off_diagonal_counting() {
        let cm = confusion(&labels(&[0, 0]), &labels(&[1, 1])).unwrap();
        assert_eq!(cm.get(0, 1), 2);
        assert_eq!(cm.total(), 2);
        assert_eq!(cm.get(0, 0) + cm.get(1, 0) + cm.get(1, 1), 0);
    }

    #[test]
    fn hand_tally() {
        let cm = confusion(&labels(&[0, 1, 1, 2]), &labels(&[0, 2, 1, 2])).unwrap();
        assert_eq!(cm.get(1, 2), 1);
        assert_eq!(cm.get(0, 0), 1);
        assert_eq!(cm.get(1, 1), 1);
        assert_eq!(cm.get(2, 2), 1);
    }

    #[test]
    fn length_mismatch_rejected() {
        assert!(matches!(
            confusion(&labels(&[0]), &labels(&[0, 1])),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn binary_hand_arithmetic() {
        // TP=50, TN=40, FP=5, FN=5 as a 2-class table (class 0 = positive)
        let cm = ConfusionMatrix::from_counts(2, vec![50, 5, 5, 40]).unwrap();
        let m = eq_metrics(&cm).unwrap();
        assert!((m.accuracy - 0.90).abs() < 1e-12);
        assert!((m.per_class[0].precision - 50.0 / 55.0).abs() < 1e-12);
        assert!((m.per_class[0].recall - 50.0 / 55.0).abs() < 1e-12);
        assert!((m.per_class[0].f1 - 50.0 / 55.0).abs() < 1e-12);
    }

    #[test]
    fn perfect_matrix_all_ones() {
        let cm = ConfusionMatrix::from_counts(3, vec![5, 0, 0, 0, 7, 0, 0, 0, 3]).unwrap();
        let m = eq_metrics(&cm).unwrap();
        assert_eq!(m.accuracy, 1.0);
        assert_eq!(m.macro_precision, 1.0);
        assert_eq!(m.macro_recall, 1.0);
        assert_eq!(m.macro_f1, 1.0);
        assert!(m.warnings.is_empty());
    }

    #[test]
    fn absent_class_zero_with_warning() {
        // class 2 never appears as truth or prediction
        let cm = ConfusionMatrix::from_counts(3, vec![5, 1, 0, 2, 4, 0, 0, 0, 0]).unwrap();
        let m = eq_metrics(&cm).unwrap();
        assert_eq!(m.per_class[2].precision, 0.0);
        assert_eq!(m.per_class[2].recall, 0.0);
        assert_eq!(m.per_class[2].f1, 0.0);
        assert_eq!(m.warnings.len(), 2);
    }

    #[test]
    fn perfect_separation_curve() {
        let curve =
            roc_curve(&[true, true, false, false], &[0.9, 0.8, 0.2, 0.1]).unwrap();
        assert!(curve.points.contains(&(0.0, 1.0)));
        assert_eq!(auc(&curve), 1.0);
    }

    #[test]
    fn all_equal_scores_is_chance_diagonal() {
        let curve = roc_curve(&[true, false, true, false], &[0.5; 4]).unwrap();
        assert_eq!(curve.points, vec![(0.0, 0.0), (1.0, 1.0)]);
        assert_eq!(auc(&curve), 0.5);
    }

    #[test]
    fn hand_swept_curve_and_auc() {
        let y = [false, false, true, true];
        let s = [0.1, 0.4, 0.35, 0.8];
        let curve = roc_curve(&y, &s).unwrap();
        assert_eq!(
            curve.points,
            vec![(0.0, 0.0), (0.0, 0.5), (0.5, 0.5), (0.5, 1.0), (1.0, 1.0)]
        );
        assert!((auc(&curve) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn degenerate_labels_rejected() {
        assert!(matches!(
            roc_curve(&[true, true], &[0.1, 0.2]),
            Err(Error::DegenerateLabels)
        ));
    }

    #[test]
    fn one_hot_probabilities_give_unit_auc() {
        let y = labels(&[0, 1, 2, 0, 1, 2]);
        let probas: Vec<[f64; 3]> = y
            .iter()
            .map(|l| {
                let mut p = [0.0; 3];
                p[l.id()] = 1.0;
                p
            })
            .collect();
        let report = macro_ovr_auc(&y, &probas).unwrap();
        assert_eq!(report.macro_auc, 1.0);
        for entry in &report.per_class {
            assert_eq!(entry.as_ref().unwrap().1, 1.0);
        }
    }

    #[test]
    fn uniform_probabilities_give_half_auc() {
        let y = labels(&[0, 1, 2, 0, 1, 2, 0]);
        let probas = vec![[1.0 / 3.0; 3]; 7];
        let report = macro_ovr_auc(&y, &probas).unwrap();
        assert!((report.macro_auc - 0.5).abs() < 1e-12);
    }

    #[test]
    fn absent_class_excluded_from_macro() {
        let y = labels(&[0, 0, 1, 1]);
        let probas = vec![
            [0.8, 0.1, 0.1],
            [0.7, 0.2, 0.1],
            [0.2, 0.7, 0.1],
            [0.3, 0.6, 0.1],
        ];
        let report = macro_ovr_auc(&y, &probas).unwrap();
        assert!(report.per_class[2].is_none());
        assert_eq!(report.warnings.len(), 1);
        assert_eq!(report.macro_auc, 1.0);
    }
}
