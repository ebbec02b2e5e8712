//! Heatmap peak extraction, detection matching and precision/recall.

mod detect;
mod matching;
mod report;

pub use detect::{extract_detections, plane_peaks, Detection, DEFAULT_THRESHOLD};
pub use matching::{
    average_precision_recall, match_detections, precision_recall, scene_precision_recall, ClassCounts,
    DistanceThresholds, MatchResult, MatchedPair,
};
pub use report::{evaluate_scenes, ClassReport, EvalReport, SceneInput};
