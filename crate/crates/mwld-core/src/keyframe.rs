//! Shot segmentation over a frame sequence and key-frame selection.
//!
//! Every frame is summarized by nine color moments (per-channel mean,
//! standard deviation and skewness). Consecutive frames whose moment vectors
//! are further apart than a threshold mark a shot cut; within each shot the
//! frame closest to the shot's mean moment vector becomes the key frame.

use alloc::vec::Vec;
use core::fmt;

use crate::raster::RgbFrame;

/// Per-channel mean / standard deviation / skewness, nine values total.
///
/// Moments are population moments; skewness is the signed cube root of the
/// third central moment, so all nine components share intensity units.
#[derive(Copy, Clone, PartialEq, Debug)]
pub struct ColorMoments {
    pub mean: [f64; 3],
    pub stddev: [f64; 3],
    pub skewness: [f64; 3],
}

impl ColorMoments {
    /// The moments flattened as (mean, stddev, skewness) per channel, R first.
    pub fn as_vector(&self) -> [f64; 9] {
        let mut v = [0.0; 9];
        for c in 0..3 {
            v[c * 3] = self.mean[c];
            v[c * 3 + 1] = self.stddev[c];
            v[c * 3 + 2] = self.skewness[c];
        }
        v
    }
}

/// A maximal run of frames with no detected cut, plus its representative frame.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct Shot {
    /// First frame index, inclusive.
    pub start: usize,
    /// Last frame index, inclusive.
    pub end: usize,
    /// Representative frame, `start <= keyframe <= end`.
    pub keyframe: usize,
}

/// Cut threshold selection for [`detect_shots`].
#[derive(Copy, Clone, PartialEq, Debug)]
pub enum ThresholdMode {
    /// τ = μ + 3σ over the series of consecutive-frame distances.
    Adaptive,
    /// Fixed τ.
    Fixed(f64),
}

/// The input sequence was empty.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct EmptyInputError;

impl fmt::Display for EmptyInputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "frame sequence is empty")
    }
}

impl core::error::Error for EmptyInputError {}

/// Population color moments of one frame.
pub fn color_moments(frame: &RgbFrame) -> ColorMoments {
    let n = (frame.width() * frame.height()) as f64;
    let mut mean = [0.0; 3];
    let mut stddev = [0.0; 3];
    let mut skewness = [0.0; 3];
    for c in 0..3 {
        let sum: f64 = frame.channel(c).map(f64::from).sum();
        let m = sum / n;
        let mut m2 = 0.0;
        let mut m3 = 0.0;
        for v in frame.channel(c) {
            let d = f64::from(v) - m;
            m2 += d * d;
            m3 += d * d * d;
        }
        mean[c] = m;
        stddev[c] = libm::sqrt(m2 / n);
        // degenerate convention: a constant channel has zero skewness
        skewness[c] = if stddev[c] == 0.0 { 0.0 } else { libm::cbrt(m3 / n) };
    }
    ColorMoments { mean, stddev, skewness }
}

/// Euclidean distance between two nine-component moment vectors.
pub fn moment_distance(a: &ColorMoments, b: &ColorMoments) -> f64 {
    let va = a.as_vector();
    let vb = b.as_vector();
    let sq: f64 = va.iter().zip(vb.iter()).map(|(x, y)| (x - y) * (x - y)).sum();
    libm::sqrt(sq)
}

/// Splits a frame sequence into shots and picks one key frame per shot.
///
/// A cut is declared between frames `i` and `i+1` whenever their moment
/// distance strictly exceeds the threshold. The returned shots partition
/// `0..frames.len()` with no gaps or overlaps.
pub fn detect_shots(
    frames: &[RgbFrame],
    mode: ThresholdMode,
) -> Result<Vec<Shot>, EmptyInputError> {
    if frames.is_empty() {
        return Err(EmptyInputError);
    }
    let moments: Vec<ColorMoments> = frames.iter().map(color_moments).collect();
    let distances: Vec<f64> = moments
        .windows(2)
        .map(|w| moment_distance(&w[0], &w[1]))
        .collect();

    let tau = match mode {
        ThresholdMode::Fixed(t) => t,
        ThresholdMode::Adaptive => adaptive_tau(&distances),
    };

    let mut shots = Vec::new();
    let mut start = 0usize;
    for (i, &d) in distances.iter().enumerate() {
        if d > tau {
            shots.push(make_shot(start, i, &moments));
            start = i + 1;
        }
    }
    shots.push(make_shot(start, frames.len() - 1, &moments));
    Ok(shots)
}

/// μ + 3σ of the consecutive-distance series (population σ; 0 for an empty series).
fn adaptive_tau(distances: &[f64]) -> f64 {
    if distances.is_empty() {
        return 0.0;
    }
    let n = distances.len() as f64;
    let mu: f64 = distances.iter().sum::<f64>() / n;
    let var: f64 = distances.iter().map(|d| (d - mu) * (d - mu)).sum::<f64>() / n;
    mu + 3.0 * libm::sqrt(var)
}

fn make_shot(start: usize, end: usize, moments: &[ColorMoments]) -> Shot {
    let count = (end - start + 1) as f64;
    let mut mean = [0.0f64; 9];
    for m in &moments[start..=end] {
        for (acc, v) in mean.iter_mut().zip(m.as_vector()) {
            *acc += v;
        }
    }
    for v in &mut mean {
        *v /= count;
    }

    let mut keyframe = start;
    let mut best = f64::INFINITY;
    for (i, m) in moments.iter().enumerate().take(end + 1).skip(start) {
        let v = m.as_vector();
        let d: f64 = v.iter().zip(mean.iter()).map(|(x, y)| (x - y) * (x - y)).sum();
        // strict comparison keeps the lowest index on ties
        if d < best {
            best = d;
            keyframe = i;
        }
    }
    Shot { start, end, keyframe }
}
