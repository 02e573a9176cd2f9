use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Detection;
use crate::dataset::DatasetManifest;
use crate::geometry::BBox2D;
use crate::par::{map_slice, Exec};

/// Intersection over union; 0 for disjoint boxes.
pub fn iou(a: &BBox2D, b: &BBox2D) -> f64 {
    let inter = a.intersection_area(b);
    if inter <= 0.0 {
        return 0.0;
    }
    let union = a.area() + b.area() - inter;
    (inter / union).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MatchCounts {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
}

impl MatchCounts {
    pub fn new(tp: u64, fp: u64, fn_: u64) -> Self {
        MatchCounts { tp, fp, fn_ }
    }
}

impl std::ops::Add for MatchCounts {
    type Output = MatchCounts;
    fn add(self, o: MatchCounts) -> MatchCounts {
        MatchCounts::new(self.tp + o.tp, self.fp + o.fp, self.fn_ + o.fn_)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassMode {
    /// Every class is treated as a single "strawberry" class.
    #[default]
    Agnostic,
    PerClass,
}

impl ClassMode {
    pub(crate) fn key(self, class_id: u8) -> u8 {
        match self {
            ClassMode::Agnostic => 0,
            ClassMode::PerClass => class_id,
        }
    }
}

/// Ground-truth boxes per image id, in manifest label order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GroundTruth {
    pub images: BTreeMap<String, Vec<(u8, BBox2D)>>,
}

impl GroundTruth {
    pub fn from_manifest(m: &DatasetManifest) -> Self {
        let images = m
            .entries
            .iter()
            .map(|e| {
                let boxes = e
                    .annotation
                    .labels
                    .iter()
                    .map(|l| (l.class_id, l.bbox))
                    .collect();
                (e.image_id.clone(), boxes)
            })
            .collect();
        GroundTruth { images }
    }

    pub fn total(&self) -> u64 {
        self.images.values().map(|v| v.len() as u64).sum()
    }

    /// Ground-truth count per class key.
    pub(crate) fn totals_by_class(&self, mode: ClassMode) -> BTreeMap<u8, u64> {
        let mut out = BTreeMap::new();
        for &(c, _) in self.images.values().flatten() {
            *out.entry(mode.key(c)).or_insert(0) += 1;
        }
        out
    }
}

/// Processing order: confidence descending, then a total order on the box
/// and class so input permutations cannot change the result.
pub(crate) fn detection_order(a: &Detection, b: &Detection) -> Ordering {
    b.confidence
        .total_cmp(&a.confidence)
        .then_with(|| a.bbox.x_min.total_cmp(&b.bbox.x_min))
        .then_with(|| a.bbox.y_min.total_cmp(&b.bbox.y_min))
        .then_with(|| a.bbox.x_max.total_cmp(&b.bbox.x_max))
        .then_with(|| a.bbox.y_max.total_cmp(&b.bbox.y_max))
        .then_with(|| a.class_id.cmp(&b.class_id))
}

/// Detection outcome after greedy matching.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Outcome {
    pub confidence: f64,
    pub class_key: u8,
    pub true_positive: bool,
}

/// Greedy matching of one image's detections (already in processing order)
/// against its ground truth.
fn match_image(
    dets: &[&Detection],
    gts: &[(u8, BBox2D)],
    iou_threshold: f64,
    mode: ClassMode,
) -> Vec<Outcome> {
    let mut used = vec![false; gts.len()];
    dets.iter()
        .map(|d| {
            let key = mode.key(d.class_id);
            let mut best: Option<(usize, f64)> = None;
            for (g, (class, gt)) in gts.iter().enumerate() {
                if used[g] || mode.key(*class) != key {
                    continue;
                }
                let v = iou(&d.bbox, gt);
                if v >= iou_threshold && best.is_none_or(|(_, b)| v > b) {
                    best = Some((g, v));
                }
            }
            if let Some((g, _)) = best {
                used[g] = true;
            }
            Outcome {
                confidence: d.confidence,
                class_key: key,
                true_positive: best.is_some(),
            }
        })
        .collect()
}

/// Greedy-match all detections; outcomes come back in global processing
/// order (confidence descending).
pub(crate) fn match_all(
    dets: &[Detection],
    gt: &GroundTruth,
    iou_threshold: f64,
    mode: ClassMode,
) -> Vec<Outcome> {
    let mut by_image: BTreeMap<&str, Vec<&Detection>> = BTreeMap::new();
    for d in dets {
        by_image.entry(d.image_id.as_str()).or_default().push(d);
    }
    let groups: Vec<(&str, Vec<&Detection>)> = by_image
        .into_iter()
        .map(|(id, mut v)| {
            v.sort_by(|a, b| detection_order(a, b));
            (id, v)
        })
        .collect();
    let empty = Vec::new();
    let per_image = map_slice(Exec::Parallel, &groups, |(id, dets)| {
        let gts = gt.images.get(*id).unwrap_or(&empty);
        dets.iter()
            .copied()
            .zip(match_image(dets, gts, iou_threshold, mode))
            .collect::<Vec<_>>()
    });
    let mut all: Vec<(&Detection, Outcome)> = per_image.into_iter().flatten().collect();
    all.sort_by(|a, b| detection_order(a.0, b.0).then_with(|| a.0.image_id.cmp(&b.0.image_id)));
    all.into_iter().map(|(_, o)| o).collect()
}

/// TP/FP/FN at one operating point.
///
/// Detections below `conf_threshold` are discarded first. Within each image
/// (and class, in per-class mode) the rest are visited by descending
/// confidence and each takes the still-unmatched ground truth with the
/// highest IoU at or above `iou_threshold`. Leftover detections are false
/// positives and leftover ground truth false negatives.
pub fn match_detections(
    dets: &[Detection],
    gt: &GroundTruth,
    iou_threshold: f64,
    conf_threshold: f64,
    mode: ClassMode,
) -> MatchCounts {
    let kept: Vec<Detection> = dets
        .iter()
        .filter(|d| d.confidence >= conf_threshold)
        .cloned()
        .collect();
    let outcomes = match_all(&kept, gt, iou_threshold, mode);
    let tp = outcomes.iter().filter(|o| o.true_positive).count() as u64;
    let fp = outcomes.len() as u64 - tp;
    MatchCounts::new(tp, fp, gt.total() - tp)
}
