//! Scoring external detector output against ground truth.
//!
//! Detections are greedily matched to ground truth by IoU, counts turn into
//! precision, recall and F1 at an operating confidence threshold, and average
//! precision sweeps every distinct confidence.

mod detection;
mod matching;
mod metrics;
mod report;

pub use detection::{load_predictions, parse_coco_results, parse_prediction_lines, Detection};
pub use matching::{iou, match_detections, ClassMode, GroundTruth, MatchCounts};
pub use metrics::{
    average_precision, evaluate, f1, precision_recall, ApMode, EvalConfig, MeanMetrics,
    MetricsReport, PrPoint,
};
pub use report::{report_table, table_rows, TableRow};
