//! Frame-level parallel detection driver. Results are collected in input
//! order, so output is independent of the worker count.

use mwld_core::{detect_frame, DetectParams, DetectionResult, RgbFrame};
use rayon::prelude::*;

/// Runs [`detect_frame`] over every frame on a pool of `workers` threads.
/// The frame index of each result is its position in `frames`.
pub fn detect_all(
    frames: &[RgbFrame],
    params: &DetectParams,
    workers: usize,
) -> Vec<DetectionResult> {
    assert!(workers >= 1, "need at least one worker");
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("worker pool");
    pool.install(|| {
        frames
            .par_iter()
            .enumerate()
            .map(|(i, frame)| DetectionResult::new(i, detect_frame(frame, params)))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use mwld_core::synth::{Background, FrameSpec, TextLine};
    use mwld_core::render_text_frame;

    #[test]
    fn output_is_identical_across_worker_counts() {
        let spec = FrameSpec {
            width: 120,
            height: 80,
            background: Background::Flat([20, 20, 20]),
            lines: vec![TextLine {
                text: "AB 12".into(),
                scale: 2,
                fg: [255, 255, 255],
                bg: None,
                position: (10, 30),
            }],
        };
        let (with_text, _) = render_text_frame(0, &spec).unwrap();
        let flat = RgbFrame::filled(120, 80, [20, 20, 20]);
        let frames = vec![flat, with_text.clone(), with_text];

        let params = DetectParams::default();
        let one = detect_all(&frames, &params, 1);
        let four = detect_all(&frames, &params, 4);
        assert_eq!(one, four);
        assert_eq!(one[0].frame_index, 0);
        assert!(one[0].boxes.is_empty());
        // identical frames give identical boxes, indices follow input order
        assert_eq!(one[1].boxes, one[2].boxes);
        assert_eq!(one[2].frame_index, 2);
    }
}
