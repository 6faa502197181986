//! Seeded corpus presets for the `synth` command and for benchmarking the
//! pipeline: 640x480 frames with randomized single- or multi-line layouts
//! over flat, gradient and noisy backgrounds. Foreground/background
//! contrast stays at or above 100 gray levels by construction and line
//! heights span 14 to 35 pixels (glyph scales 2 to 5).

use mwld_core::synth::{render_text_frame, Background, FrameSpec, TextLine};
use mwld_core::{BBox, RgbFrame};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FRAME_WIDTH: usize = 640;
pub const FRAME_HEIGHT: usize = 480;

const CHARSET: &[u8] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";

/// A generated frame with its exact ground truth.
pub struct CorpusFrame {
    pub frame: RgbFrame,
    pub gt_boxes: Vec<BBox>,
}

/// `count` single-line frames, deterministic in `seed`.
pub fn single_line_frames(seed: u64, count: usize) -> Vec<CorpusFrame> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|i| generate(&mut rng, i, 1)).collect()
}

/// `count` frames with two to four lines each, deterministic in `seed`.
pub fn multi_line_frames(seed: u64, count: usize) -> Vec<CorpusFrame> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let lines = rng.gen_range(2..=4);
            generate(&mut rng, i, lines)
        })
        .collect()
}

fn generate(rng: &mut ChaCha8Rng, frame_index: usize, line_count: usize) -> CorpusFrame {
    // the background kind cycles so every corpus exercises all three
    let background = match frame_index % 3 {
        0 => {
            let level = rng.gen_range(10..=90u8);
            Background::Flat([level, level, level])
        }
        1 => {
            let top = rng.gen_range(10..=50u8);
            let bottom = rng.gen_range(50..=90u8);
            Background::VerticalGradient {
                top: [top, top, top],
                bottom: [bottom, bottom, bottom],
            }
        }
        _ => {
            let base = rng.gen_range(40..=90u8);
            let amplitude = rng.gen_range(5..=30u8);
            Background::Noise { base: [base, base, base], amplitude }
        }
    };

    // one horizontal band per line keeps cells at least 10 px apart
    let band_h = FRAME_HEIGHT / line_count;
    let mut lines = Vec::with_capacity(line_count);
    for li in 0..line_count {
        let scale = rng.gen_range(2..=5usize);
        let len = rng.gen_range(3..=8usize);
        let text: String = (0..len)
            .map(|_| CHARSET[rng.gen_range(0..CHARSET.len())] as char)
            .collect();
        let fg = rng.gen_range(230..=255u8);
        let cell_w = (len * 6 - 1) * scale;
        let cell_h = 7 * scale;
        let x = rng.gen_range(4..=FRAME_WIDTH - cell_w - 4);
        let band_top = li * band_h;
        let y = rng.gen_range(band_top + 5..=band_top + band_h - cell_h - 5);
        lines.push(TextLine {
            text,
            scale,
            fg: [fg, fg, fg],
            bg: None,
            position: (x, y),
        });
    }

    let spec = FrameSpec { width: FRAME_WIDTH, height: FRAME_HEIGHT, background, lines };
    let noise_seed = rng.gen();
    let (frame, gt_boxes) = render_text_frame(noise_seed, &spec).expect("preset layout fits");
    CorpusFrame { frame, gt_boxes }
}
