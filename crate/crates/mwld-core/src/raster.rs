//! Raster buffers that flow through the pipeline: 8-bit color frames,
//! 8-bit gray images, real-valued maps and binary masks. All buffers are
//! row-major with `(x, y)` addressing, `y` growing downwards.

use alloc::vec;
use alloc::vec::Vec;

use crate::geom::BBox;

/// Color painted on box borders by [`draw_boxes`].
pub const HIGHLIGHT: [u8; 3] = [0, 255, 0];

/// 8-bit interleaved RGB frame.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RgbFrame {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl RgbFrame {
    /// Frame filled with a single color. Panics if either dimension is zero.
    pub fn filled(width: usize, height: usize, color: [u8; 3]) -> Self {
        assert!(width >= 1 && height >= 1, "frame dimensions must be >= 1");
        let mut data = Vec::with_capacity(width * height * 3);
        for _ in 0..width * height {
            data.extend_from_slice(&color);
        }
        Self { width, height, data }
    }

    /// Wraps an interleaved RGB buffer. Panics unless `data.len() == width * height * 3`
    /// and both dimensions are at least 1.
    pub fn from_raw(width: usize, height: usize, data: Vec<u8>) -> Self {
        assert!(width >= 1 && height >= 1, "frame dimensions must be >= 1");
        assert_eq!(data.len(), width * height * 3, "RGB buffer length mismatch");
        Self { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    #[inline]
    pub fn set_pixel(&mut self, x: usize, y: usize, rgb: [u8; 3]) {
        let i = (y * self.width + x) * 3;
        self.data[i..i + 3].copy_from_slice(&rgb);
    }

    /// Iterator over one channel (0 = R, 1 = G, 2 = B) in raster order.
    pub fn channel(&self, c: usize) -> impl Iterator<Item = u8> + '_ {
        assert!(c < 3);
        self.data.iter().skip(c).step_by(3).copied()
    }
}

/// 8-bit single-channel image.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        assert!(width >= 1 && height >= 1, "image dimensions must be >= 1");
        Self { width, height, data: vec![value; width * height] }
    }

    pub fn from_raw(width: usize, height: usize, data: Vec<u8>) -> Self {
        assert!(width >= 1 && height >= 1, "image dimensions must be >= 1");
        assert_eq!(data.len(), width * height, "gray buffer length mismatch");
        Self { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.data[y * self.width + x] = v;
    }

    /// Sample with replicate (clamp-to-edge) border handling.
    #[inline]
    pub fn get_clamped(&self, x: isize, y: isize) -> u8 {
        let cx = x.clamp(0, self.width as isize - 1) as usize;
        let cy = y.clamp(0, self.height as isize - 1) as usize;
        self.get(cx, cy)
    }
}

/// Real-valued per-pixel map; holds descriptor responses before quantization.
/// Every stored value is finite.
#[derive(Clone, PartialEq, Debug)]
pub struct RealImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl RealImage {
    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        assert!(width >= 1 && height >= 1, "image dimensions must be >= 1");
        assert!(value.is_finite());
        Self { width, height, data: vec![value; width * height] }
    }

    pub fn from_raw(width: usize, height: usize, data: Vec<f64>) -> Self {
        assert!(width >= 1 && height >= 1, "image dimensions must be >= 1");
        assert_eq!(data.len(), width * height, "real buffer length mismatch");
        debug_assert!(data.iter().all(|v| v.is_finite()), "non-finite value in RealImage");
        Self { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: f64) {
        self.data[y * self.width + x] = v;
    }
}

/// Foreground/background mask, one bit per pixel.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl BinaryImage {
    pub fn zeros(width: usize, height: usize) -> Self {
        assert!(width >= 1 && height >= 1, "image dimensions must be >= 1");
        Self { width, height, data: vec![false; width * height] }
    }

    pub fn from_raw(width: usize, height: usize, data: Vec<bool>) -> Self {
        assert!(width >= 1 && height >= 1, "image dimensions must be >= 1");
        assert_eq!(data.len(), width * height, "binary buffer length mismatch");
        Self { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.data[y * self.width + x] = v;
    }

    pub fn count_foreground(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }
}

/// Paints box borders onto a copy of `frame` in the fixed highlight color.
///
/// Boxes are clipped to the frame; the border band is `thickness` pixels deep
/// measured inward from each edge of the clipped box. Interior pixels and
/// pixels outside every box are left untouched.
pub fn draw_boxes(frame: &RgbFrame, boxes: &[BBox], thickness: usize) -> RgbFrame {
    assert!(thickness >= 1, "border thickness must be >= 1");
    let mut out = frame.clone();
    for b in boxes {
        let (Some(x0), Some(y0)) = (clip_lo(b.x0, frame.width()), clip_lo(b.y0, frame.height()))
        else {
            continue; // box entirely right of / below the frame
        };
        let x1 = b.x1.min(frame.width() - 1);
        let y1 = b.y1.min(frame.height() - 1);
        if x0 > x1 || y0 > y1 {
            continue;
        }
        for y in y0..=y1 {
            for x in x0..=x1 {
                let on_border = x - x0 < thickness
                    || x1 - x < thickness
                    || y - y0 < thickness
                    || y1 - y < thickness;
                if on_border {
                    out.set_pixel(x, y, HIGHLIGHT);
                }
            }
        }
    }
    out
}

fn clip_lo(v: usize, limit: usize) -> Option<usize> {
    if v >= limit {
        None
    } else {
        Some(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filled_frame_reads_back() {
        let f = RgbFrame::filled(2, 1, [255, 0, 0]);
        assert_eq!(f.pixel(0, 0), [255, 0, 0]);
        assert_eq!(f.channel(0).collect::<Vec<_>>(), vec![255, 255]);
        assert_eq!(f.channel(1).collect::<Vec<_>>(), vec![0, 0]);
    }

    #[test]
    #[should_panic(expected = "length mismatch")]
    fn bad_buffer_length_panics() {
        let _ = GrayImage::from_raw(3, 2, vec![0; 5]);
    }

    #[test]
    fn draw_no_boxes_is_identity() {
        let f = RgbFrame::filled(4, 3, [10, 20, 30]);
        assert_eq!(draw_boxes(&f, &[], 1), f);
    }

    #[test]
    fn full_frame_box_recolors_only_the_border() {
        let f = RgbFrame::filled(5, 4, [9, 9, 9]);
        let out = draw_boxes(&f, &[BBox::new(0, 0, 4, 3)], 1);
        for y in 0..4 {
            for x in 0..5 {
                let border = x == 0 || x == 4 || y == 0 || y == 3;
                let want = if border { HIGHLIGHT } else { [9, 9, 9] };
                assert_eq!(out.pixel(x, y), want, "pixel ({x},{y})");
            }
        }
    }

    #[test]
    fn box_past_right_edge_is_clipped() {
        let f = RgbFrame::filled(4, 4, [0, 0, 0]);
        let out = draw_boxes(&f, &[BBox::new(2, 1, 9, 2)], 1);
        // clipped box is [2..=3] x [1..=2], all of it border at thickness 1
        for y in 0..4 {
            for x in 0..4 {
                let inside = (2..=3).contains(&x) && (1..=2).contains(&y);
                let want = if inside { HIGHLIGHT } else { [0, 0, 0] };
                assert_eq!(out.pixel(x, y), want, "pixel ({x},{y})");
            }
        }
    }

    #[test]
    fn box_fully_outside_changes_nothing() {
        let f = RgbFrame::filled(4, 4, [1, 2, 3]);
        let out = draw_boxes(&f, &[BBox::new(7, 7, 9, 9)], 2);
        assert_eq!(out, f);
    }
}
