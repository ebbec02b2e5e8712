use serde::{Deserialize, Serialize};

use crate::fusion::Center;
use crate::radar::ObjectClass;

use super::Detection;

/// Maximum center distance (bins) for a detection to count, per class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DistanceThresholds {
    pub pedestrian: f64,
    pub cyclist: f64,
    pub car: f64,
}

impl Default for DistanceThresholds {
    fn default() -> Self {
        Self {
            pedestrian: 4.0,
            cyclist: 6.0,
            car: 10.0,
        }
    }
}

impl DistanceThresholds {
    pub fn get(&self, class: ObjectClass) -> f64 {
        match class {
            ObjectClass::Pedestrian => self.pedestrian,
            ObjectClass::Cyclist => self.cyclist,
            ObjectClass::Car => self.car,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl ClassCounts {
    pub fn is_empty(&self) -> bool {
        self.tp + self.fp + self.fn_ == 0
    }

    pub fn add(&mut self, other: &ClassCounts) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.fn_ += other.fn_;
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchedPair {
    /// Index into the detection slice.
    pub detection: usize,
    /// Index into the ground-truth slice.
    pub truth: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MatchResult {
    /// Indexed by `ObjectClass::index`.
    pub per_class: [ClassCounts; 3],
    pub pairs: Vec<MatchedPair>,
}

impl MatchResult {
    pub fn counts(&self, class: ObjectClass) -> ClassCounts {
        self.per_class[class.index()]
    }
}

/// Greedy matching in descending confidence: each detection takes the
/// nearest unmatched ground-truth center of the same class and frame whose
/// Euclidean bin distance is at most the class threshold.
pub fn match_detections(dets: &[Detection], truth: &[Center], thresholds: &DistanceThresholds) -> MatchResult {
    let mut order: Vec<usize> = (0..dets.len()).collect();
    // stable: equal confidences keep input order
    order.sort_by(|&a, &b| dets[b].confidence.total_cmp(&dets[a].confidence));

    let mut taken = vec![false; truth.len()];
    let mut result = MatchResult::default();
    for &di in &order {
        let d = &dets[di];
        let limit = thresholds.get(d.class);
        let mut best: Option<(usize, f64)> = None;
        for (gi, g) in truth.iter().enumerate() {
            if taken[gi] || g.class != d.class || g.frame != d.frame {
                continue;
            }
            let dr = d.range_bin as f64 - g.range_bin as f64;
            let da = d.angle_bin as f64 - g.angle_bin as f64;
            let dist = dr.hypot(da);
            if dist <= limit && best.is_none_or(|(_, bd)| dist < bd) {
                best = Some((gi, dist));
            }
        }
        let counts = &mut result.per_class[d.class.index()];
        match best {
            Some((gi, distance)) => {
                taken[gi] = true;
                counts.tp += 1;
                result.pairs.push(MatchedPair {
                    detection: di,
                    truth: gi,
                    distance,
                });
            }
            None => counts.fp += 1,
        }
    }
    for (gi, g) in truth.iter().enumerate() {
        if !taken[gi] {
            result.per_class[g.class.index()].fn_ += 1;
        }
    }
    result
}

/// `tp / (tp + fp)` and `tp / (tp + fn)`, with 0/0 read as 0.
pub fn precision_recall(c: &ClassCounts) -> (f64, f64) {
    let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    (ratio(c.tp, c.tp + c.fp), ratio(c.tp, c.tp + c.fn_))
}

/// Mean precision/recall over the classes that occur in a scene (any of
/// tp, fp, fn nonzero). `None` when nothing occurs.
pub fn scene_precision_recall(m: &MatchResult) -> Option<(f64, f64)> {
    let active: Vec<_> = m.per_class.iter().filter(|c| !c.is_empty()).collect();
    if active.is_empty() {
        return None;
    }
    let n = active.len() as f64;
    let (p, r) = active
        .iter()
        .map(|c| precision_recall(c))
        .fold((0.0, 0.0), |(sp, sr), (p, r)| (sp + p, sr + r));
    Some((p / n, r / n))
}

/// Per-class mean within each scene, then the mean across scenes. Scenes
/// with no ground truth and no detections are skipped; if every scene is
/// skipped the result is `(0, 0)`.
pub fn average_precision_recall(scenes: &[MatchResult]) -> (f64, f64) {
    let per_scene: Vec<_> = scenes.iter().filter_map(scene_precision_recall).collect();
    if per_scene.is_empty() {
        return (0.0, 0.0);
    }
    let n = per_scene.len() as f64;
    let (p, r) = per_scene.iter().fold((0.0, 0.0), |(sp, sr), (p, r)| (sp + p, sr + r));
    (p / n, r / n)
}
