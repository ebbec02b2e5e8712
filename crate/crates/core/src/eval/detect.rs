use ndarray::{ArrayView2, ArrayView4, Axis};

use crate::radar::ObjectClass;

/// Confidence cut applied to predicted heatmaps.
pub const DEFAULT_THRESHOLD: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detection {
    pub frame: usize,
    pub range_bin: usize,
    pub angle_bin: usize,
    pub class: ObjectClass,
    pub confidence: f64,
}

fn neighbours(r: usize, a: usize, rows: usize, cols: usize) -> impl Iterator<Item = (usize, usize)> {
    (-1i64..=1)
        .flat_map(|dr| (-1i64..=1).map(move |da| (dr, da)))
        .filter(|&d| d != (0, 0))
        .filter_map(move |(dr, da)| {
            let rr = r as i64 + dr;
            let aa = a as i64 + da;
            (rr >= 0 && aa >= 0 && (rr as usize) < rows && (aa as usize) < cols).then_some((rr as usize, aa as usize))
        })
}

/// Peaks of one `[range, angle]` plane: cells at or above `threshold` that
/// are not exceeded anywhere in their 3x3 neighborhood. Equal-valued peak
/// cells touching each other form one plateau, reported once at its
/// lexicographically smallest `(range, angle)` cell.
pub fn plane_peaks(plane: ArrayView2<f64>, threshold: f64) -> Vec<(usize, usize, f64)> {
    let (rows, cols) = plane.dim();
    let is_peak = |r: usize, a: usize| {
        let v = plane[[r, a]];
        v >= threshold && neighbours(r, a, rows, cols).all(|(rr, aa)| plane[[rr, aa]] <= v)
    };
    let mut seen = vec![false; rows * cols];
    let mut out = Vec::new();
    // row-major scan visits each plateau first at its lex-min cell
    for r in 0..rows {
        for a in 0..cols {
            if seen[r * cols + a] || !is_peak(r, a) {
                continue;
            }
            let v = plane[[r, a]];
            out.push((r, a, v));
            let mut stack = vec![(r, a)];
            seen[r * cols + a] = true;
            while let Some((cr, ca)) = stack.pop() {
                for (nr, na) in neighbours(cr, ca, rows, cols) {
                    if !seen[nr * cols + na] && plane[[nr, na]] == v && is_peak(nr, na) {
                        seen[nr * cols + na] = true;
                        stack.push((nr, na));
                    }
                }
            }
        }
    }
    out
}

/// Detections from a `[time, range, angle, class]` heatmap, sorted by
/// descending confidence (ties by frame, class, range, angle).
pub fn extract_detections(pred: ArrayView4<f64>, threshold: f64) -> Vec<Detection> {
    let mut dets = Vec::new();
    for (t, frame) in pred.axis_iter(Axis(0)).enumerate() {
        for (ci, plane) in frame.axis_iter(Axis(2)).enumerate() {
            let Some(class) = ObjectClass::from_index(ci) else {
                continue;
            };
            for (r, a, v) in plane_peaks(plane, threshold) {
                dets.push(Detection {
                    frame: t,
                    range_bin: r,
                    angle_bin: a,
                    class,
                    confidence: v,
                });
            }
        }
    }
    dets.sort_by(|x, y| {
        y.confidence
            .total_cmp(&x.confidence)
            .then(x.frame.cmp(&y.frame))
            .then(x.class.index().cmp(&y.class.index()))
            .then((x.range_bin, x.angle_bin).cmp(&(y.range_bin, y.angle_bin)))
    });
    dets
}
