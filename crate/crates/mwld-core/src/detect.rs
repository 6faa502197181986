//! End-to-end frame pipeline: geometric false-positive elimination and
//! bounding-box localization on top of the descriptor and morphology stages.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::geom::BBox;
use crate::morph::{
    binarize, dilate_binary, label_map, morph_gradient_h, Component, StructElem,
    DEFAULT_THRESHOLD,
};
use crate::preprocess::{rgb_to_y, stretch_contrast, DEFAULT_HI_PCT, DEFAULT_LO_PCT};
use crate::raster::{BinaryImage, RgbFrame};
use crate::wld::{mwld_map, MwldConfig};

/// Geometric filter constants for candidate text blocks, in pixels.
///
/// A block is rejected when its height falls outside `[min_height,
/// max_height]`, its width is below `min_width`, or its bbox area is below
/// `min_area`. Defaults follow the horizontal-text rules
/// (h > 50, h < 6, w < 5, h*w < 24).
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct GeomRules {
    pub max_height: usize,
    pub min_height: usize,
    pub min_width: usize,
    pub min_area: usize,
}

impl Default for GeomRules {
    fn default() -> Self {
        Self { max_height: 50, min_height: 6, min_width: 5, min_area: 24 }
    }
}

impl GeomRules {
    /// Panics unless `0 < min_height < max_height` and the other constants
    /// are positive.
    pub fn new(max_height: usize, min_height: usize, min_width: usize, min_area: usize) -> Self {
        assert!(min_height > 0 && min_height < max_height, "need 0 < min_height < max_height");
        assert!(min_width > 0 && min_area > 0, "rule constants must be positive");
        Self { max_height, min_height, min_width, min_area }
    }

    /// True when the rules reject a block of the given bbox extents.
    pub fn rejects(&self, width: usize, height: usize) -> bool {
        height > self.max_height
            || height < self.min_height
            || width < self.min_width
            || height * width < self.min_area
    }

    /// Rescales the constants for a frame of `frame_height` pixels relative
    /// to the VGA-scale frames the defaults assume: lengths scale with the
    /// height ratio, the area constant with its square.
    pub fn scaled_to_height(&self, frame_height: usize) -> Self {
        let f = frame_height as f64 / 480.0;
        let len = |v: usize| (libm::round(v as f64 * f) as usize).max(1);
        let min_height = len(self.min_height);
        let mut max_height = len(self.max_height);
        if min_height >= max_height {
            max_height = min_height + 1;
        }
        Self {
            max_height,
            min_height,
            min_width: len(self.min_width),
            min_area: (libm::round(self.min_area as f64 * f * f) as usize).max(1),
        }
    }
}

/// Per-frame detections; boxes are deduplicated and sorted by (y0, x0).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DetectionResult {
    pub frame_index: usize,
    pub boxes: Vec<BBox>,
}

impl DetectionResult {
    pub fn new(frame_index: usize, mut boxes: Vec<BBox>) -> Self {
        boxes.sort_unstable();
        boxes.dedup();
        Self { frame_index, boxes }
    }
}

/// Everything [`detect_frame`] needs; `Default` is the paper configuration.
#[derive(Clone, PartialEq, Debug)]
pub struct DetectParams {
    pub lo_pct: f64,
    pub hi_pct: f64,
    pub mwld: MwldConfig,
    pub threshold: u8,
    pub rules: GeomRules,
    pub merge_se: StructElem,
    /// Rescale the geometric rules to the frame height (off by default).
    pub scale_rules: bool,
}

impl Default for DetectParams {
    fn default() -> Self {
        Self {
            lo_pct: DEFAULT_LO_PCT,
            hi_pct: DEFAULT_HI_PCT,
            mwld: MwldConfig::default(),
            threshold: DEFAULT_THRESHOLD,
            rules: GeomRules::default(),
            merge_se: StructElem::rect(7, 3),
            scale_rules: false,
        }
    }
}

/// Drops components the geometric rules reject; survivors keep their order.
pub fn filter_components(components: &[Component], rules: &GeomRules) -> Vec<Component> {
    components
        .iter()
        .filter(|c| !rules.rejects(c.bbox.width(), c.bbox.height()))
        .copied()
        .collect()
}

/// Merges surviving components into text-line boxes.
///
/// The component bboxes are rendered into a mask, bridged with a binary
/// dilation under `merge_se`, and relabeled with 4-connectivity. Each merged
/// region's output box is cropped back to the joined extent of its member
/// components, so an isolated component keeps exactly its own bbox. Output
/// is sorted by (y0, x0).
pub fn localize(
    filtered: &[Component],
    frame_width: usize,
    frame_height: usize,
    merge_se: &StructElem,
) -> Vec<BBox> {
    if filtered.is_empty() {
        return Vec::new();
    }
    let mut mask = BinaryImage::zeros(frame_width, frame_height);
    for c in filtered {
        for y in c.bbox.y0..=c.bbox.y1.min(frame_height - 1) {
            for x in c.bbox.x0..=c.bbox.x1.min(frame_width - 1) {
                mask.set(x, y, true);
            }
        }
    }
    let merged = dilate_binary(&mask, merge_se);
    let (labels, _) = label_map(&merged);

    // dilation is extensive, so every member bbox sits inside one region
    let mut extents: BTreeMap<usize, BBox> = BTreeMap::new();
    for c in filtered {
        let label = labels[c.bbox.y0 * frame_width + c.bbox.x0];
        debug_assert!(label != 0, "component corner must be foreground after dilation");
        extents
            .entry(label)
            .and_modify(|b| *b = b.join(&c.bbox))
            .or_insert(c.bbox);
    }
    let mut boxes: Vec<BBox> = extents.into_values().collect();
    boxes.sort_unstable();
    boxes.dedup();
    boxes
}

/// Runs the whole per-frame pipeline: contrast stretch, luminance, multiscale
/// descriptor map, horizontal gradient, binarization, labeling, geometric
/// filtering and localization. Pure and deterministic for fixed inputs.
pub fn detect_frame(frame: &RgbFrame, params: &DetectParams) -> Vec<BBox> {
    let stretched = stretch_contrast(frame, params.lo_pct, params.hi_pct);
    let y = rgb_to_y(&stretched);
    let map = mwld_map(&y, &params.mwld);
    let gradient = morph_gradient_h(&map);
    let mask = binarize(&gradient, params.threshold);
    let (_, components) = label_map(&mask);
    let rules = if params.scale_rules {
        params.rules.scaled_to_height(frame.height())
    } else {
        params.rules
    };
    let kept = filter_components(&components, &rules);
    localize(&kept, frame.width(), frame.height(), &params.merge_se)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn comp(label: usize, bbox: BBox) -> Component {
        Component { label, pixel_count: bbox.area(), bbox }
    }

    #[test]
    fn rules_reject_tall_blocks() {
        let rules = GeomRules::default();
        let c = comp(1, BBox::new(0, 0, 19, 59)); // height 60 > 50
        assert!(filter_components(&[c], &rules).is_empty());
    }

    #[test]
    fn rules_keep_text_sized_blocks() {
        let rules = GeomRules::default();
        let c = comp(1, BBox::new(0, 0, 9, 19)); // width 10, height 20
        assert_eq!(filter_components(&[c], &rules), vec![c]);
    }

    #[test]
    fn rules_reject_narrow_blocks() {
        let rules = GeomRules::default();
        let c = comp(1, BBox::new(0, 0, 1, 9)); // width 2 < 5
        assert!(filter_components(&[c], &rules).is_empty());
    }

    #[test]
    fn localize_empty_input() {
        assert!(localize(&[], 32, 32, &StructElem::rect(7, 3)).is_empty());
    }

    #[test]
    fn localize_merges_nearby_components_on_a_row() {
        // two bboxes 2 px apart horizontally; the 3x7 SE reaches 3 px sideways
        let a = comp(1, BBox::new(2, 4, 8, 10));
        let b = comp(2, BBox::new(11, 4, 16, 10));
        let boxes = localize(&[a, b], 32, 32, &StructElem::rect(7, 3));
        assert_eq!(boxes, vec![BBox::new(2, 4, 16, 10)]);
    }

    #[test]
    fn localize_keeps_isolated_component_bbox_tight() {
        let a = comp(1, BBox::new(5, 5, 12, 9));
        let boxes = localize(&[a], 32, 32, &StructElem::rect(7, 3));
        assert_eq!(boxes, vec![a.bbox]);
    }

    #[test]
    fn localize_respects_distance_beyond_the_se() {
        // gap of 8 px exceeds the 3-px reach of a 7-wide SE on both sides
        let a = comp(1, BBox::new(0, 0, 4, 6));
        let b = comp(2, BBox::new(13, 0, 18, 6));
        let boxes = localize(&[a, b], 32, 32, &StructElem::rect(7, 3));
        assert_eq!(boxes, vec![a.bbox, b.bbox]);
    }

    #[test]
    fn constant_frame_yields_no_boxes() {
        let frame = RgbFrame::filled(48, 32, [130, 60, 200]);
        assert!(detect_frame(&frame, &DetectParams::default()).is_empty());
    }

    #[test]
    fn detection_result_dedups_and_sorts() {
        let b1 = BBox::new(4, 2, 8, 6);
        let b2 = BBox::new(0, 0, 3, 3);
        let r = DetectionResult::new(7, vec![b1, b2, b1]);
        assert_eq!(r.boxes, vec![b2, b1]);
    }

    #[test]
    fn scaled_rules_double_at_960() {
        let r = GeomRules::default().scaled_to_height(960);
        assert_eq!(r, GeomRules { max_height: 100, min_height: 12, min_width: 10, min_area: 96 });
        assert_eq!(GeomRules::default().scaled_to_height(480), GeomRules::default());
    }

    proptest! {
        #[test]
        fn filter_agrees_with_the_literal_predicate(w in 1usize..80, h in 1usize..80) {
            let rules = GeomRules::default();
            let c = comp(1, BBox::new(0, 0, w - 1, h - 1));
            let removed = filter_components(&[c], &rules).is_empty();
            let predicate = h > 50 || h < 6 || w < 5 || h * w < 24;
            prop_assert_eq!(removed, predicate);
        }

        #[test]
        fn raising_min_area_never_adds_survivors(
            area_lo in 1usize..200,
            raise in 0usize..200,
            boxes in proptest::collection::vec((0usize..30, 0usize..30, 1usize..30, 1usize..30), 0..20),
        ) {
            let comps: Vec<Component> = boxes
                .iter()
                .enumerate()
                .map(|(i, &(x, y, w, h))| comp(i + 1, BBox::new(x, y, x + w - 1, y + h - 1)))
                .collect();
            let lo = GeomRules { min_area: area_lo, ..GeomRules::default() };
            let hi = GeomRules { min_area: area_lo + raise, ..GeomRules::default() };
            prop_assert!(filter_components(&comps, &hi).len() <= filter_components(&comps, &lo).len());
        }

        #[test]
        fn localize_output_stays_in_bounds(
            boxes in proptest::collection::vec((0usize..28, 0usize..28, 1usize..6, 1usize..6), 1..12),
        ) {
            let comps: Vec<Component> = boxes
                .iter()
                .enumerate()
                .map(|(i, &(x, y, w, h))| comp(i + 1, BBox::new(x, y, (x + w - 1).min(31), (y + h - 1).min(31))))
                .collect();
            let out = localize(&comps, 32, 32, &StructElem::rect(7, 3));
            for b in &out {
                prop_assert!(b.x1 < 32 && b.y1 < 32);
            }
            // merged boxes cover every input component
            for c in &comps {
                prop_assert!(out.iter().any(|b| b.intersection_area(&c.bbox) == c.bbox.area()));
            }
        }
    }
}
