//! Text localization in video frames with the multiscale Weber local
//! descriptor: shot segmentation and key-frame picking, contrast and
//! luminance preprocessing, per-pixel differential excitation and
//! orientation at several (P, R) scales, morphological gradient,
//! binarization, connected-component analysis with geometric filtering,
//! bounding-box localization, plus matching metrics and a deterministic
//! synthetic corpus generator for testing it all.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the command
//! line live in the companion `mwld-cli` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod detect;
pub mod eval;
pub mod geom;
pub mod keyframe;
pub mod morph;
pub mod preprocess;
pub mod raster;
pub mod synth;
pub mod wld;

pub use detect::{detect_frame, DetectParams, DetectionResult, GeomRules};
pub use eval::{classify_detections, evaluate, EvalReport, GroundTruth};
pub use geom::BBox;
pub use keyframe::{color_moments, detect_shots, moment_distance, Shot, ThresholdMode};
pub use morph::{binarize, dilate, erode, label_components, morph_gradient_h, StructElem};
pub use preprocess::{rgb_to_y, stretch_contrast};
pub use raster::{draw_boxes, BinaryImage, GrayImage, RealImage, RgbFrame};
pub use synth::{make_sequence, render_text_frame, Background, FrameSpec, TextLine};
pub use wld::{
    differential_excitation, excitation_to_gray, mwld_map, orientation, wld_histogram,
    Fusion, MwldConfig, WldScale,
};
