use std::collections::BTreeMap;
use std::fmt::Write as _;

use ndarray::ArrayView4;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fusion::Center;
use crate::radar::ObjectClass;

use super::{average_precision_recall, extract_detections, match_detections, precision_recall, ClassCounts};
use super::{DistanceThresholds, MatchResult};

/// One scene: a `[time, range, angle, class]` prediction and its centers.
#[derive(Debug, Clone)]
pub struct SceneInput<'a> {
    pub pred: ArrayView4<'a, f64>,
    pub truth: &'a [Center],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    #[serde(flatten)]
    pub counts: ClassCounts,
    pub precision: f64,
    pub recall: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    /// Counts pooled over all scenes, keyed by class name.
    pub per_class: BTreeMap<String, ClassReport>,
    #[serde(rename = "AP")]
    pub ap: f64,
    #[serde(rename = "AR")]
    pub ar: f64,
}

impl EvalReport {
    pub fn from_matches(matches: &[MatchResult]) -> Self {
        let mut per_class = BTreeMap::new();
        for class in ObjectClass::ALL {
            let mut counts = ClassCounts::default();
            for m in matches {
                counts.add(&m.counts(class));
            }
            let (precision, recall) = precision_recall(&counts);
            per_class.insert(
                class.name().to_string(),
                ClassReport {
                    counts,
                    precision,
                    recall,
                },
            );
        }
        let (ap, ar) = average_precision_recall(matches);
        Self { per_class, ap, ar }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("class,tp,fp,fn,precision,recall\n");
        for (name, c) in &self.per_class {
            let _ = writeln!(
                out,
                "{name},{},{},{},{:.6},{:.6}",
                c.counts.tp, c.counts.fp, c.counts.fn_, c.precision, c.recall
            );
        }
        let _ = writeln!(out, "all,,,,{:.6},{:.6}", self.ap, self.ar);
        out
    }
}

/// Extracts, matches and aggregates every scene; scenes run in parallel.
pub fn evaluate_scenes(scenes: &[SceneInput<'_>], threshold: f64, thresholds: &DistanceThresholds) -> EvalReport {
    let matches: Vec<MatchResult> = scenes
        .par_iter()
        .map(|s| match_detections(&extract_detections(s.pred, threshold), s.truth, thresholds))
        .collect();
    EvalReport::from_matches(&matches)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::rasterize_labels;

    #[test]
    fn labels_as_predictions_score_one() {
        let truth = vec![
            Center::new(0, 20, 30, ObjectClass::Car),
            Center::new(0, 60, 90, ObjectClass::Pedestrian),
            Center::new(1, 40, 64, ObjectClass::Cyclist),
        ];
        let labels = rasterize_labels(2, 128, 128, &truth).unwrap();
        let report = evaluate_scenes(
            &[SceneInput {
                pred: labels.data.view(),
                truth: &truth,
            }],
            0.2,
            &DistanceThresholds::default(),
        );
        assert_eq!((report.ap, report.ar), (1.0, 1.0));
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["AP"], 1.0);
        assert_eq!(json["per_class"]["car"]["tp"], 1);
        assert_eq!(json["per_class"]["car"]["fn"], 0);
        assert!(report
            .to_csv()
            .starts_with("class,tp,fp,fn,precision,recall\ncar,1,0,0,"));
    }
}
