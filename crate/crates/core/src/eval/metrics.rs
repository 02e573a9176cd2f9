use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::matching::{match_all, Outcome};
use super::{match_detections, ClassMode, Detection, GroundTruth, MatchCounts};
use crate::dataset::DatasetManifest;
use crate::{Error, Result};

/// Precision and recall with the empty-denominator conventions:
/// no detections gives precision 1 if nothing was missed (else 0), and no
/// ground truth gives recall 1.
pub fn precision_recall(c: MatchCounts) -> (f64, f64) {
    let precision = if c.tp + c.fp == 0 {
        if c.fn_ == 0 {
            1.0
        } else {
            0.0
        }
    } else {
        c.tp as f64 / (c.tp + c.fp) as f64
    };
    let recall = if c.tp + c.fn_ == 0 {
        1.0
    } else {
        c.tp as f64 / (c.tp + c.fn_) as f64
    };
    (precision, recall)
}

/// Harmonic mean of precision and recall; 0 when both are 0.
pub fn f1(precision: f64, recall: f64) -> f64 {
    let s = precision + recall;
    if s == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApMode {
    /// Area under the precision-recall curve with the monotone precision
    /// envelope (all-point interpolation).
    #[default]
    PrAuc,
    /// Arithmetic mean of precision over the confidence sweep.
    ThresholdMean,
}

/// One operating point of the confidence sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrPoint {
    pub threshold: f64,
    pub recall: f64,
    pub precision: f64,
}

/// Sweep every distinct confidence over outcomes already in descending
/// confidence order.
fn sweep(outcomes: &[&Outcome], total_gt: u64) -> Vec<PrPoint> {
    let mut points = Vec::new();
    let (mut tp, mut fp) = (0u64, 0u64);
    let mut i = 0;
    while i < outcomes.len() {
        let c = outcomes[i].confidence;
        while i < outcomes.len() && outcomes[i].confidence == c {
            if outcomes[i].true_positive {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        let (precision, recall) = precision_recall(MatchCounts::new(tp, fp, total_gt - tp));
        points.push(PrPoint {
            threshold: c,
            recall,
            precision,
        });
    }
    points
}

fn ap_from_points(points: &[PrPoint], total_gt: u64, mode: ApMode) -> f64 {
    if points.is_empty() {
        // no detections: perfect only if there was nothing to find
        return if total_gt == 0 { 1.0 } else { 0.0 };
    }
    match mode {
        ApMode::PrAuc => {
            let mut envelope: Vec<f64> = points.iter().map(|p| p.precision).collect();
            for i in (0..envelope.len().saturating_sub(1)).rev() {
                envelope[i] = envelope[i].max(envelope[i + 1]);
            }
            let mut prev_recall = 0.0;
            let mut ap = 0.0;
            for (p, env) in points.iter().zip(envelope) {
                ap += (p.recall - prev_recall) * env;
                prev_recall = p.recall;
            }
            ap
        }
        ApMode::ThresholdMean => {
            points.iter().map(|p| p.precision).sum::<f64>() / points.len() as f64
        }
    }
}

fn curve_and_ap(
    outcomes: &[Outcome],
    gt: &GroundTruth,
    mode: ApMode,
    class_mode: ClassMode,
) -> (Vec<PrPoint>, f64) {
    let all: Vec<&Outcome> = outcomes.iter().collect();
    let curve = sweep(&all, gt.total());
    match class_mode {
        ClassMode::Agnostic => {
            let ap = ap_from_points(&curve, gt.total(), mode);
            (curve, ap)
        }
        ClassMode::PerClass => {
            // mean over classes seen in ground truth or detections
            let totals = gt.totals_by_class(class_mode);
            let classes: BTreeSet<u8> = totals
                .keys()
                .copied()
                .chain(outcomes.iter().map(|o| o.class_key))
                .collect();
            if classes.is_empty() {
                return (curve, 1.0);
            }
            let sum: f64 = classes
                .iter()
                .map(|&c| {
                    let of_class: Vec<&Outcome> =
                        outcomes.iter().filter(|o| o.class_key == c).collect();
                    let n = totals.get(&c).copied().unwrap_or(0);
                    ap_from_points(&sweep(&of_class, n), n, mode)
                })
                .sum();
            (curve, sum / classes.len() as f64)
        }
    }
}

/// Average precision over the full confidence sweep.
pub fn average_precision(
    dets: &[Detection],
    gt: &GroundTruth,
    iou_threshold: f64,
    mode: ApMode,
    class_mode: ClassMode,
) -> f64 {
    let outcomes = match_all(dets, gt, iou_threshold, class_mode);
    curve_and_ap(&outcomes, gt, mode, class_mode).1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub iou_threshold: f64,
    /// Operating point for precision, recall and F1.
    pub conf_threshold: f64,
    pub ap_mode: ApMode,
    pub class_mode: ClassMode,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            iou_threshold: 0.5,
            conf_threshold: 0.5,
            ap_mode: ApMode::PrAuc,
            class_mode: ClassMode::Agnostic,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub counts: MatchCounts,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub average_precision: f64,
    pub pr_curve: Vec<PrPoint>,
    pub config: EvalConfig,
}

impl MetricsReport {
    pub fn from_counts(
        counts: MatchCounts,
        average_precision: f64,
        pr_curve: Vec<PrPoint>,
        config: EvalConfig,
    ) -> Self {
        let (precision, recall) = precision_recall(counts);
        MetricsReport {
            counts,
            precision,
            recall,
            f1: f1(precision, recall),
            average_precision,
            pr_curve,
            config,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Score `predictions` against the ground truth in `gt`.
///
/// Every prediction must name an image in the manifest.
pub fn evaluate(
    predictions: &[Detection],
    gt: &DatasetManifest,
    config: &EvalConfig,
) -> Result<MetricsReport> {
    let truth = GroundTruth::from_manifest(gt);
    let unknown: BTreeSet<&str> = predictions
        .iter()
        .map(|d| d.image_id.as_str())
        .filter(|id| !truth.images.contains_key(*id))
        .collect();
    if !unknown.is_empty() {
        return Err(Error::UnknownImageIds(
            unknown.into_iter().map(String::from).collect(),
        ));
    }
    let counts = match_detections(
        predictions,
        &truth,
        config.iou_threshold,
        config.conf_threshold,
        config.class_mode,
    );
    let outcomes = match_all(predictions, &truth, config.iou_threshold, config.class_mode);
    let (curve, ap) = curve_and_ap(&outcomes, &truth, config.ap_mode, config.class_mode);
    Ok(MetricsReport::from_counts(counts, ap, curve, *config))
}

/// Per-metric arithmetic mean over repeated runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanMetrics {
    pub runs: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub average_precision: f64,
}

impl MeanMetrics {
    pub fn of(reports: &[MetricsReport]) -> Option<MeanMetrics> {
        if reports.is_empty() {
            return None;
        }
        let n = reports.len() as f64;
        let mean = |f: fn(&MetricsReport) -> f64| reports.iter().map(f).sum::<f64>() / n;
        Some(MeanMetrics {
            runs: reports.len(),
            precision: mean(|r| r.precision),
            recall: mean(|r| r.recall),
            f1: mean(|r| r.f1),
            average_precision: mean(|r| r.average_precision),
        })
    }

    /// A row built directly from published F1 and AP values.
    pub fn from_f1_ap(f1: f64, average_precision: f64) -> Self {
        MeanMetrics {
            runs: 1,
            precision: f64::NAN,
            recall: f64::NAN,
            f1,
            average_precision,
        }
    }
}
