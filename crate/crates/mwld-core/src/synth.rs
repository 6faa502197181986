//! Deterministic synthetic corpus generation: frames with embedded
//! bitmap-font text over flat, gradient or noisy backgrounds, plus exact
//! ground truth. The 5x7 glyphs (A-Z, 0-9, space) are hard-coded so the
//! ground-truth boxes are known pixel-for-pixel by construction.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eval::GroundTruth;
use crate::geom::BBox;
use crate::keyframe::Shot;
use crate::raster::RgbFrame;

/// Glyph cell width in font pixels.
pub const GLYPH_WIDTH: usize = 5;
/// Glyph cell height in font pixels.
pub const GLYPH_HEIGHT: usize = 7;
/// Horizontal advance per character: glyph width plus a 1-pixel gap.
pub const GLYPH_ADVANCE: usize = GLYPH_WIDTH + 1;

/// Largest allowed noise amplitude; keeps text/background contrast at or
/// above 100 gray levels in the bundled presets.
pub const MAX_NOISE_AMPLITUDE: u8 = 30;

/// Frame background fill.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Background {
    Flat([u8; 3]),
    /// Linear top-to-bottom interpolation.
    VerticalGradient { top: [u8; 3], bottom: [u8; 3] },
    /// Per-pixel gray jitter of at most `amplitude` around `base`.
    Noise { base: [u8; 3], amplitude: u8 },
}

/// One text line to render.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TextLine {
    pub text: String,
    /// Integer magnification of the 5x7 glyphs, at least 1.
    pub scale: usize,
    pub fg: [u8; 3],
    /// When set, the line's full cell rectangle is painted in this color
    /// before the glyphs; otherwise glyphs land directly on the background.
    pub bg: Option<[u8; 3]>,
    /// Top-left corner of the cell rectangle, (x, y).
    pub position: (usize, usize),
}

/// Full description of one synthetic frame.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FrameSpec {
    pub width: usize,
    pub height: usize,
    pub background: Background,
    pub lines: Vec<TextLine>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SynthError {
    UnsupportedChar { line: usize, ch: char },
    ZeroScale { line: usize },
    /// The line renders no foreground pixels (empty or all-space text).
    EmptyLine { line: usize },
    OutOfBounds { line: usize },
    OverlappingLines { first: usize, second: usize },
    NoiseAmplitude { amplitude: u8 },
}

impl fmt::Display for SynthError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UnsupportedChar { line, ch } => {
                write!(f, "line {line}: character {ch:?} not in the embedded font")
            }
            Self::ZeroScale { line } => write!(f, "line {line}: scale must be at least 1"),
            Self::EmptyLine { line } => write!(f, "line {line}: no renderable glyph pixels"),
            Self::OutOfBounds { line } => write!(f, "line {line}: text exceeds frame bounds"),
            Self::OverlappingLines { first, second } => {
                write!(f, "lines {first} and {second} overlap")
            }
            Self::NoiseAmplitude { amplitude } => {
                write!(f, "noise amplitude {amplitude} exceeds {MAX_NOISE_AMPLITUDE}")
            }
        }
    }
}

impl core::error::Error for SynthError {}

/// Renders one frame and returns it with one tight ground-truth box per
/// line, in line order. Fully deterministic in `(seed, spec)`.
pub fn render_text_frame(seed: u64, spec: &FrameSpec) -> Result<(RgbFrame, Vec<BBox>), SynthError> {
    let cells = validate(spec)?;
    let mut frame = paint_background(seed, spec)?;

    let mut boxes = Vec::with_capacity(spec.lines.len());
    for (line, cell) in spec.lines.iter().zip(&cells) {
        if let Some(bg) = line.bg {
            for y in cell.y0..=cell.y1 {
                for x in cell.x0..=cell.x1 {
                    frame.set_pixel(x, y, bg);
                }
            }
        }
        let mut bounds: Option<BBox> = None;
        let (ox, oy) = line.position;
        for (ci, ch) in line.text.chars().enumerate() {
            let rows = glyph(ch).expect("validated");
            for (gy, row) in rows.iter().enumerate() {
                for gx in 0..GLYPH_WIDTH {
                    if row & (1 << (GLYPH_WIDTH - 1 - gx)) == 0 {
                        continue;
                    }
                    let px = ox + (ci * GLYPH_ADVANCE + gx) * line.scale;
                    let py = oy + gy * line.scale;
                    for dy in 0..line.scale {
                        for dx in 0..line.scale {
                            frame.set_pixel(px + dx, py + dy, line.fg);
                        }
                    }
                    let dot = BBox::new(px, py, px + line.scale - 1, py + line.scale - 1);
                    bounds = Some(bounds.map_or(dot, |b| b.join(&dot)));
                }
            }
        }
        boxes.push(bounds.expect("validated non-empty line"));
    }
    Ok((frame, boxes))
}

/// Builds a multi-shot sequence for exercising shot detection: each shot has
/// a distinct flat background (consecutive levels at least 80 gray values
/// apart) and one text line, repeated identically across the shot's frames.
/// Returns the frames, the per-frame ground truth and the true shot
/// partition (key frame = first frame of each shot).
///
/// The adaptive cut threshold needs the cut fraction of the distance series
/// to stay small; with `frames_per_shot >= 11` the generated cuts always
/// exceed it. Fixed thresholds up to ~130 work for any shot length.
pub fn make_sequence(
    seed: u64,
    n_shots: usize,
    frames_per_shot: usize,
) -> (Vec<RgbFrame>, GroundTruth, Vec<Shot>) {
    assert!(n_shots >= 1, "need at least one shot");
    assert!(frames_per_shot >= 1, "need at least one frame per shot");

    const W: usize = 160;
    const H: usize = 120;
    const SCALE: usize = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut frames = Vec::with_capacity(n_shots * frames_per_shot);
    let mut gt = GroundTruth::new();
    let mut shots = Vec::with_capacity(n_shots);
    for shot in 0..n_shots {
        // zigzag palette: dark backgrounds on even shots, light on odd
        let level = if shot % 2 == 0 {
            30 + 10 * ((shot / 2) % 7) as u8
        } else {
            230 - 10 * ((shot / 2) % 7) as u8
        };
        let fg = if shot % 2 == 0 { [255, 255, 255] } else { [0, 0, 0] };
        let text = alloc::format!("SHOT {shot}");
        let cell_w = (text.chars().count() * GLYPH_ADVANCE - 1) * SCALE;
        let cell_h = GLYPH_HEIGHT * SCALE;
        let x = rng.gen_range(4..=(W - cell_w - 4));
        let y = rng.gen_range(4..=(H - cell_h - 4));
        let spec = FrameSpec {
            width: W,
            height: H,
            background: Background::Flat([level, level, level]),
            lines: alloc::vec![TextLine {
                text,
                scale: SCALE,
                fg,
                bg: None,
                position: (x, y),
            }],
        };
        let (frame, boxes) = render_text_frame(0, &spec).expect("preset layout fits");

        let start = frames.len();
        for _ in 0..frames_per_shot {
            gt.add(frames.len(), boxes[0]);
            frames.push(frame.clone());
        }
        shots.push(Shot { start, end: frames.len() - 1, keyframe: start });
    }
    (frames, gt, shots)
}

struct Cell {
    x0: usize,
    y0: usize,
    x1: usize,
    y1: usize,
}

fn validate(spec: &FrameSpec) -> Result<Vec<Cell>, SynthError> {
    if let Background::Noise { amplitude, .. } = spec.background {
        if amplitude > MAX_NOISE_AMPLITUDE {
            return Err(SynthError::NoiseAmplitude { amplitude });
        }
    }
    let mut cells = Vec::with_capacity(spec.lines.len());
    for (li, line) in spec.lines.iter().enumerate() {
        if line.scale == 0 {
            return Err(SynthError::ZeroScale { line: li });
        }
        let mut any_ink = false;
        for ch in line.text.chars() {
            let rows = glyph(ch).ok_or(SynthError::UnsupportedChar { line: li, ch })?;
            any_ink |= rows.iter().any(|&r| r != 0);
        }
        if !any_ink {
            return Err(SynthError::EmptyLine { line: li });
        }
        let n = line.text.chars().count();
        let cell_w = (n * GLYPH_ADVANCE - 1) * line.scale;
        let cell_h = GLYPH_HEIGHT * line.scale;
        let (x, y) = line.position;
        if x + cell_w > spec.width || y + cell_h > spec.height {
            return Err(SynthError::OutOfBounds { line: li });
        }
        cells.push(Cell { x0: x, y0: y, x1: x + cell_w - 1, y1: y + cell_h - 1 });
    }
    for i in 0..cells.len() {
        for j in i + 1..cells.len() {
            let (a, b) = (&cells[i], &cells[j]);
            if a.x0 <= b.x1 && b.x0 <= a.x1 && a.y0 <= b.y1 && b.y0 <= a.y1 {
                return Err(SynthError::OverlappingLines { first: i, second: j });
            }
        }
    }
    Ok(cells)
}

fn paint_background(seed: u64, spec: &FrameSpec) -> Result<RgbFrame, SynthError> {
    let (w, h) = (spec.width, spec.height);
    Ok(match spec.background {
        Background::Flat(color) => RgbFrame::filled(w, h, color),
        Background::VerticalGradient { top, bottom } => {
            let mut frame = RgbFrame::filled(w, h, top);
            for y in 0..h {
                let t = if h == 1 { 0.0 } else { y as f64 / (h - 1) as f64 };
                let mut color = [0u8; 3];
                for c in 0..3 {
                    let v = f64::from(top[c]) + (f64::from(bottom[c]) - f64::from(top[c])) * t;
                    color[c] = libm::round(v) as u8;
                }
                for x in 0..w {
                    frame.set_pixel(x, y, color);
                }
            }
            frame
        }
        Background::Noise { base, amplitude } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let amp = i16::from(amplitude);
            let mut frame = RgbFrame::filled(w, h, base);
            for y in 0..h {
                for x in 0..w {
                    let delta = rng.gen_range(-amp..=amp);
                    let mut color = [0u8; 3];
                    for c in 0..3 {
                        color[c] = (i16::from(base[c]) + delta).clamp(0, 255) as u8;
                    }
                    frame.set_pixel(x, y, color);
                }
            }
            frame
        }
    })
}

/// Row bitmaps for one character, top row first; bit 4 is the left column.
pub fn glyph(ch: char) -> Option<&'static [u8; GLYPH_HEIGHT]> {
    let table: &[u8; GLYPH_HEIGHT] = match ch {
        ' ' => &[0, 0, 0, 0, 0, 0, 0],
        'A' => &[0b01110, 0b10001, 0b10001, 0b11111, 0b10001, 0b10001, 0b10001],
        'B' => &[0b11110, 0b10001, 0b10001, 0b11110, 0b10001, 0b10001, 0b11110],
        'C' => &[0b01110, 0b10001, 0b10000, 0b10000, 0b10000, 0b10001, 0b01110],
        'D' => &[0b11110, 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b11110],
        'E' => &[0b11111, 0b10000, 0b10000, 0b11110, 0b10000, 0b10000, 0b11111],
        'F' => &[0b11111, 0b10000, 0b10000, 0b11110, 0b10000, 0b10000, 0b10000],
        'G' => &[0b01110, 0b10001, 0b10000, 0b10111, 0b10001, 0b10001, 0b01110],
        'H' => &[0b10001, 0b10001, 0b10001, 0b11111, 0b10001, 0b10001, 0b10001],
        'I' => &[0b01110, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110],
        'J' => &[0b00111, 0b00010, 0b00010, 0b00010, 0b00010, 0b10010, 0b01100],
        'K' => &[0b10001, 0b10010, 0b10100, 0b11000, 0b10100, 0b10010, 0b10001],
        'L' => &[0b10000, 0b10000, 0b10000, 0b10000, 0b10000, 0b10000, 0b11111],
        'M' => &[0b10001, 0b11011, 0b10101, 0b10101, 0b10001, 0b10001, 0b10001],
        'N' => &[0b10001, 0b11001, 0b10101, 0b10011, 0b10001, 0b10001, 0b10001],
        'O' => &[0b01110, 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01110],
        'P' => &[0b11110, 0b10001, 0b10001, 0b11110, 0b10000, 0b10000, 0b10000],
        'Q' => &[0b01110, 0b10001, 0b10001, 0b10001, 0b10101, 0b10010, 0b01101],
        'R' => &[0b11110, 0b10001, 0b10001, 0b11110, 0b10100, 0b10010, 0b10001],
        'S' => &[0b01111, 0b10000, 0b10000, 0b01110, 0b00001, 0b00001, 0b11110],
        'T' => &[0b11111, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100],
        'U' => &[0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01110],
        'V' => &[0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01010, 0b00100],
        'W' => &[0b10001, 0b10001, 0b10001, 0b10101, 0b10101, 0b10101, 0b01010],
        'X' => &[0b10001, 0b10001, 0b01010, 0b00100, 0b01010, 0b10001, 0b10001],
        'Y' => &[0b10001, 0b10001, 0b01010, 0b00100, 0b00100, 0b00100, 0b00100],
        'Z' => &[0b11111, 0b00001, 0b00010, 0b00100, 0b01000, 0b10000, 0b11111],
        '0' => &[0b01110, 0b10001, 0b10011, 0b10101, 0b11001, 0b10001, 0b01110],
        '1' => &[0b00100, 0b01100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110],
        '2' => &[0b01110, 0b10001, 0b00001, 0b00010, 0b00100, 0b01000, 0b11111],
        '3' => &[0b11111, 0b00010, 0b00100, 0b00010, 0b00001, 0b10001, 0b01110],
        '4' => &[0b00010, 0b00110, 0b01010, 0b10010, 0b11111, 0b00010, 0b00010],
        '5' => &[0b11111, 0b10000, 0b11110, 0b00001, 0b00001, 0b10001, 0b01110],
        '6' => &[0b00110, 0b01000, 0b10000, 0b11110, 0b10001, 0b10001, 0b01110],
        '7' => &[0b11111, 0b00001, 0b00010, 0b00100, 0b01000, 0b01000, 0b01000],
        '8' => &[0b01110, 0b10001, 0b10001, 0b01110, 0b10001, 0b10001, 0b01110],
        '9' => &[0b01110, 0b10001, 0b10001, 0b01111, 0b00001, 0b00010, 0b01100],
        _ => return None,
    };
    Some(table)
}
