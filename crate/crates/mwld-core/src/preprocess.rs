//! Contrast enhancement and luminance extraction.
//!
//! Contrast is adjusted with a per-channel percentile stretch: the value range
//! between the low and high percentiles is mapped linearly onto [0, 255].
//! Luminance uses the BT.601 weights; downstream stages only consume Y.

use alloc::vec::Vec;

use crate::raster::{GrayImage, RgbFrame};

/// Default low percentile for [`stretch_contrast`].
pub const DEFAULT_LO_PCT: f64 = 1.0;
/// Default high percentile for [`stretch_contrast`].
pub const DEFAULT_HI_PCT: f64 = 99.0;

/// Rounds half away from zero, the single rounding rule used everywhere.
#[inline]
pub(crate) fn round_half_away(v: f64) -> f64 {
    libm::round(v)
}

#[inline]
pub(crate) fn round_to_u8(v: f64) -> u8 {
    round_half_away(v).clamp(0.0, 255.0) as u8
}

/// Linear percentile stretch, applied to each channel independently.
///
/// Values at or below the low percentile map to 0, values at or above the
/// high percentile map to 255, and the range between maps linearly with
/// round-half-away-from-zero. A channel whose two percentiles coincide is
/// left unchanged. Panics unless `0 <= lo_pct < hi_pct <= 100`.
pub fn stretch_contrast(frame: &RgbFrame, lo_pct: f64, hi_pct: f64) -> RgbFrame {
    assert!(
        0.0 <= lo_pct && lo_pct < hi_pct && hi_pct <= 100.0,
        "percentiles must satisfy 0 <= lo < hi <= 100"
    );
    let n = frame.width() * frame.height();
    let mut luts = [[0u8; 256]; 3];
    for c in 0..3 {
        let mut hist = [0usize; 256];
        for v in frame.channel(c) {
            hist[v as usize] += 1;
        }
        let p_lo = percentile_nearest_rank(&hist, n, lo_pct);
        let p_hi = percentile_nearest_rank(&hist, n, hi_pct);
        for (v, out) in luts[c].iter_mut().enumerate() {
            *out = if p_lo == p_hi {
                v as u8
            } else if v <= p_lo as usize {
                0
            } else if v >= p_hi as usize {
                255
            } else {
                round_to_u8((v as f64 - p_lo as f64) * 255.0 / (p_hi as f64 - p_lo as f64))
            };
        }
    }

    let mut data = Vec::with_capacity(n * 3);
    for (i, &v) in frame.data().iter().enumerate() {
        data.push(luts[i % 3][v as usize]);
    }
    RgbFrame::from_raw(frame.width(), frame.height(), data)
}

/// Nearest-rank percentile over an intensity histogram: the smallest value
/// whose cumulative count reaches `ceil(pct/100 * n)` (at least 1).
fn percentile_nearest_rank(hist: &[usize; 256], n: usize, pct: f64) -> u8 {
    let rank = (libm::ceil(pct / 100.0 * n as f64) as usize).clamp(1, n);
    let mut cum = 0usize;
    for (v, &count) in hist.iter().enumerate() {
        cum += count;
        if cum >= rank {
            return v as u8;
        }
    }
    255
}

/// BT.601 luma: `Y = round(0.299 R + 0.587 G + 0.114 B)`.
pub fn rgb_to_y(frame: &RgbFrame) -> GrayImage {
    let mut data = Vec::with_capacity(frame.width() * frame.height());
    for px in frame.data().chunks_exact(3) {
        let y = 0.299 * f64::from(px[0]) + 0.587 * f64::from(px[1]) + 0.114 * f64::from(px[2]);
        data.push(round_to_u8(y));
    }
    GrayImage::from_raw(frame.width(), frame.height(), data)
}
