//! Ground-truth matching and the DR / FPR / MDR metrics.
//!
//! Detections are matched to ground-truth boxes greedily by descending
//! intersection area, each side used at most once, so a detection spanning
//! two ground-truth lines earns a single credit and duplicate detections of
//! one line count as false positives. A matched detection that covers its
//! best-overlapping ground-truth box below the coverage cutoff is flagged as
//! missing data.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::detect::DetectionResult;
use crate::geom::BBox;

/// Default coverage ratio below which a matched detection counts as MDB.
pub const DEFAULT_MDB_COVERAGE: f64 = 0.9;

/// Ground-truth text boxes per frame index.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GroundTruth {
    frames: BTreeMap<usize, Vec<BBox>>,
}

impl GroundTruth {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, frame_index: usize, bbox: BBox) {
        self.frames.entry(frame_index).or_default().push(bbox);
    }

    pub fn boxes(&self, frame_index: usize) -> &[BBox] {
        self.frames.get(&frame_index).map_or(&[], Vec::as_slice)
    }

    pub fn contains_frame(&self, frame_index: usize) -> bool {
        self.frames.contains_key(&frame_index)
    }

    pub fn frame_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.frames.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &[BBox])> {
        self.frames.iter().map(|(&i, v)| (i, v.as_slice()))
    }

    /// Total ground-truth box count over all frames.
    pub fn total_boxes(&self) -> usize {
        self.frames.values().map(Vec::len).sum()
    }
}

impl FromIterator<(usize, BBox)> for GroundTruth {
    fn from_iter<T: IntoIterator<Item = (usize, BBox)>>(iter: T) -> Self {
        let mut gt = Self::new();
        for (frame, bbox) in iter {
            gt.add(frame, bbox);
        }
        gt
    }
}

/// Outcome of matching one frame's detections against its ground truth.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct DetectionClasses {
    /// Truly detected blocks: matched one-to-one to an overlapped GT box.
    pub tdb: Vec<BBox>,
    /// Falsely detected blocks, including duplicates of an already-matched GT box.
    pub fdb: Vec<BBox>,
    /// The subset of TDB whose best-overlap GT box is covered below the cutoff.
    pub mdb: Vec<BBox>,
}

/// Per-frame counts in the final report.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct FrameEval {
    pub frame_index: usize,
    pub tdb: usize,
    pub fdb: usize,
    pub mdb: usize,
    pub gt_total: usize,
}

/// Aggregate counts and the three rates.
#[derive(Clone, PartialEq, Debug)]
pub struct EvalReport {
    pub tdb: usize,
    pub fdb: usize,
    pub mdb: usize,
    pub gt_total: usize,
    /// `tdb / gt_total`, 0 when there is no ground truth.
    pub dr: f64,
    /// `fdb / (tdb + fdb)`, 0 when there are no detections.
    pub fpr: f64,
    /// `mdb / tdb`, 0 when nothing was truly detected.
    pub mdr: f64,
    pub frames: Vec<FrameEval>,
    /// Frames that had detections but no ground-truth entry.
    pub frames_without_gt: Vec<usize>,
}

/// Classifies one frame's detections against its ground-truth boxes.
pub fn classify_detections(det: &[BBox], gt: &[BBox], mdb_coverage: f64) -> DetectionClasses {
    assert!((0.0..=1.0).contains(&mdb_coverage), "coverage cutoff must be in [0, 1]");

    // all overlapping pairs, greedy by descending intersection area;
    // ties break toward lower detection index, then lower GT index
    let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
    for (di, d) in det.iter().enumerate() {
        for (gi, g) in gt.iter().enumerate() {
            let area = d.intersection_area(g);
            if area > 0 {
                pairs.push((di, gi, area));
            }
        }
    }
    pairs.sort_unstable_by(|a, b| b.2.cmp(&a.2).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));

    let mut det_matched = alloc::vec![false; det.len()];
    let mut gt_matched = alloc::vec![false; gt.len()];
    for &(di, gi, _) in &pairs {
        if !det_matched[di] && !gt_matched[gi] {
            det_matched[di] = true;
            gt_matched[gi] = true;
        }
    }

    let mut classes = DetectionClasses::default();
    for (di, d) in det.iter().enumerate() {
        if !det_matched[di] {
            classes.fdb.push(*d);
            continue;
        }
        classes.tdb.push(*d);
        // best-matched GT: largest intersection, ties toward the lower index
        let (best_gi, best_area) = gt
            .iter()
            .enumerate()
            .map(|(gi, g)| (gi, d.intersection_area(g)))
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            .expect("matched detection has at least one overlap");
        let coverage = best_area as f64 / gt[best_gi].area() as f64;
        if coverage < mdb_coverage {
            classes.mdb.push(*d);
        }
    }
    classes
}

/// Sums per-frame classifications over the union of detection and GT frames
/// and computes the three rates with zero-denominator conventions.
pub fn evaluate(detections: &[DetectionResult], gt: &GroundTruth, mdb_coverage: f64) -> EvalReport {
    let mut by_frame: BTreeMap<usize, Vec<BBox>> = BTreeMap::new();
    for d in detections {
        by_frame.entry(d.frame_index).or_default().extend(d.boxes.iter().copied());
    }
    let mut frame_indices: Vec<usize> =
        by_frame.keys().copied().chain(gt.frame_indices()).collect();
    frame_indices.sort_unstable();
    frame_indices.dedup();

    let mut frames = Vec::new();
    let mut frames_without_gt = Vec::new();
    let (mut tdb, mut fdb, mut mdb) = (0usize, 0usize, 0usize);
    for index in frame_indices {
        let det = by_frame.get(&index).map_or(&[] as &[BBox], Vec::as_slice);
        if !det.is_empty() && !gt.contains_frame(index) {
            frames_without_gt.push(index);
        }
        let classes = classify_detections(det, gt.boxes(index), mdb_coverage);
        frames.push(FrameEval {
            frame_index: index,
            tdb: classes.tdb.len(),
            fdb: classes.fdb.len(),
            mdb: classes.mdb.len(),
            gt_total: gt.boxes(index).len(),
        });
        tdb += classes.tdb.len();
        fdb += classes.fdb.len();
        mdb += classes.mdb.len();
    }

    let gt_total = gt.total_boxes();
    let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    EvalReport {
        tdb,
        fdb,
        mdb,
        gt_total,
        dr: ratio(tdb, gt_total),
        fpr: ratio(fdb, tdb + fdb),
        mdr: ratio(mdb, tdb),
        frames,
        frames_without_gt,
    }
}
