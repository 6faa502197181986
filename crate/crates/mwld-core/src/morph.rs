//! Grayscale min/max morphology, binarization and 4-connected component
//! labeling. The pipeline's gradient step is dilation minus erosion under a
//! horizontal 1x3 structuring element; localization later reuses the binary
//! dilation to bridge gaps between detected regions.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::geom::BBox;
use crate::raster::{BinaryImage, GrayImage};

/// Paper default for [`binarize`].
pub const DEFAULT_THRESHOLD: u8 = 200;

/// Fully-set rectangular structuring element with a centered origin.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct StructElem {
    width: usize,
    height: usize,
}

impl StructElem {
    /// Panics unless both dimensions are odd (the center must be a pixel).
    pub fn rect(width: usize, height: usize) -> Self {
        assert!(width % 2 == 1 && height % 2 == 1, "SE dimensions must be odd");
        Self { width, height }
    }

    /// The 1x3 horizontal element of the gradient step.
    pub fn horizontal3() -> Self {
        Self::rect(3, 1)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    fn radii(&self) -> (usize, usize) {
        (self.width / 2, self.height / 2)
    }
}

/// One maximal 4-connected foreground region.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct Component {
    /// 1-based label in raster order of each region's first pixel.
    pub label: usize,
    pub pixel_count: usize,
    pub bbox: BBox,
}

/// Neighborhood maximum over the SE window (replicate border).
pub fn dilate(img: &GrayImage, se: &StructElem) -> GrayImage {
    window_fold(img, se, u8::MIN, u8::max)
}

/// Neighborhood minimum over the SE window (replicate border).
pub fn erode(img: &GrayImage, se: &StructElem) -> GrayImage {
    window_fold(img, se, u8::MAX, u8::min)
}

fn window_fold(
    img: &GrayImage,
    se: &StructElem,
    init: u8,
    fold: impl Fn(u8, u8) -> u8,
) -> GrayImage {
    let (w, h) = (img.width(), img.height());
    let (rx, ry) = se.radii();
    let mut data = Vec::with_capacity(w * h);
    for y in 0..h {
        let y_lo = y.saturating_sub(ry);
        let y_hi = (y + ry).min(h - 1);
        for x in 0..w {
            let x_lo = x.saturating_sub(rx);
            let x_hi = (x + rx).min(w - 1);
            let mut acc = init;
            for yy in y_lo..=y_hi {
                for xx in x_lo..=x_hi {
                    acc = fold(acc, img.get(xx, yy));
                }
            }
            data.push(acc);
        }
    }
    GrayImage::from_raw(w, h, data)
}

/// Horizontal morphological gradient: dilation minus erosion under the 1x3
/// element. Vertical-only transitions produce zero, so the map responds to
/// column-wise intensity changes.
pub fn morph_gradient_h(img: &GrayImage) -> GrayImage {
    let se = StructElem::horizontal3();
    let hi = dilate(img, &se);
    let lo = erode(img, &se);
    let data = hi.data().iter().zip(lo.data()).map(|(a, b)| a - b).collect();
    GrayImage::from_raw(img.width(), img.height(), data)
}

/// Foreground iff the pixel strictly exceeds the threshold.
pub fn binarize(img: &GrayImage, threshold: u8) -> BinaryImage {
    let data = img.data().iter().map(|&v| v > threshold).collect();
    BinaryImage::from_raw(img.width(), img.height(), data)
}

/// Bitwise OR over the SE window; foreground only ever grows.
pub fn dilate_binary(img: &BinaryImage, se: &StructElem) -> BinaryImage {
    let (w, h) = (img.width(), img.height());
    let (rx, ry) = se.radii();
    let mut out = BinaryImage::zeros(w, h);
    for y in 0..h {
        for x in 0..w {
            if !img.get(x, y) {
                continue;
            }
            let y_lo = y.saturating_sub(ry);
            let y_hi = (y + ry).min(h - 1);
            let x_lo = x.saturating_sub(rx);
            let x_hi = (x + rx).min(w - 1);
            for yy in y_lo..=y_hi {
                for xx in x_lo..=x_hi {
                    out.set(xx, yy, true);
                }
            }
        }
    }
    out
}

/// Labels maximal 4-connected foreground regions.
///
/// Labels start at 1 and follow the raster order of each region's first
/// pixel; each component carries its pixel count and tight bounding box.
pub fn label_components(img: &BinaryImage) -> Vec<Component> {
    label_map(img).1
}

/// Like [`label_components`] but also returns the per-pixel label image
/// (0 = background).
pub fn label_map(img: &BinaryImage) -> (Vec<usize>, Vec<Component>) {
    let (w, h) = (img.width(), img.height());
    let mut labels = vec![0usize; w * h];
    let mut components = Vec::new();
    let mut queue = VecDeque::new();

    for start_y in 0..h {
        for start_x in 0..w {
            if !img.get(start_x, start_y) || labels[start_y * w + start_x] != 0 {
                continue;
            }
            let label = components.len() + 1;
            let mut pixel_count = 0usize;
            let (mut x0, mut y0, mut x1, mut y1) = (start_x, start_y, start_x, start_y);
            labels[start_y * w + start_x] = label;
            queue.push_back((start_x, start_y));
            while let Some((x, y)) = queue.pop_front() {
                pixel_count += 1;
                x0 = x0.min(x);
                y0 = y0.min(y);
                x1 = x1.max(x);
                y1 = y1.max(y);
                let mut visit = |nx: usize, ny: usize| {
                    if img.get(nx, ny) && labels[ny * w + nx] == 0 {
                        labels[ny * w + nx] = label;
                        queue.push_back((nx, ny));
                    }
                };
                if x > 0 {
                    visit(x - 1, y);
                }
                if x + 1 < w {
                    visit(x + 1, y);
                }
                if y > 0 {
                    visit(x, y - 1);
                }
                if y + 1 < h {
                    visit(x, y + 1);
                }
            }
            components.push(Component {
                label,
                pixel_count,
                bbox: BBox::new(x0, y0, x1, y1),
            });
        }
    }
    (labels, components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gray(w: usize, h: usize, data: &[u8]) -> GrayImage {
        GrayImage::from_raw(w, h, data.to_vec())
    }

    #[test]
    fn constant_image_is_fixed_by_morphology() {
        let img = GrayImage::filled(5, 4, 77);
        let se = StructElem::horizontal3();
        assert_eq!(dilate(&img, &se), img);
        assert_eq!(erode(&img, &se), img);
        assert!(morph_gradient_h(&img).data().iter().all(|&v| v == 0));
    }

    #[test]
    fn single_bright_pixel_dilates_horizontally() {
        let mut img = GrayImage::filled(5, 3, 0);
        img.set(2, 1, 255);
        let out = dilate(&img, &StructElem::horizontal3());
        for y in 0..3 {
            for x in 0..5 {
                let want = if y == 1 && (1..=3).contains(&x) { 255 } else { 0 };
                assert_eq!(out.get(x, y), want, "({x},{y})");
            }
        }
    }

    #[test]
    fn single_dark_pixel_erodes_horizontally() {
        let mut img = GrayImage::filled(5, 3, 255);
        img.set(2, 1, 0);
        let out = erode(&img, &StructElem::horizontal3());
        for y in 0..3 {
            for x in 0..5 {
                let want = if y == 1 && (1..=3).contains(&x) { 0 } else { 255 };
                assert_eq!(out.get(x, y), want, "({x},{y})");
            }
        }
    }

    #[test]
    fn vertical_step_fires_on_both_sides() {
        // columns 0..3 are 0, columns 4..7 are 255 on a single row
        let img = gray(8, 1, &[0, 0, 0, 0, 255, 255, 255, 255]);
        let g = morph_gradient_h(&img);
        assert_eq!(g.data(), &[0, 0, 0, 255, 255, 0, 0, 0]);
    }

    #[test]
    fn horizontal_step_is_invisible_to_the_1x3_element() {
        let mut img = GrayImage::filled(4, 4, 0);
        for x in 0..4 {
            img.set(x, 2, 255);
            img.set(x, 3, 255);
        }
        assert!(morph_gradient_h(&img).data().iter().all(|&v| v == 0));
    }

    #[test]
    fn binarize_is_strict() {
        let img = gray(3, 1, &[199, 200, 201]);
        let b = binarize(&img, 200);
        assert_eq!(b.data(), &[false, false, true]);
        assert_eq!(binarize(&GrayImage::filled(2, 2, 200), 200).count_foreground(), 0);
        assert_eq!(binarize(&GrayImage::filled(2, 2, 255), 200).count_foreground(), 4);
    }

    #[test]
    fn empty_mask_has_no_components() {
        assert!(label_components(&BinaryImage::zeros(6, 6)).is_empty());
    }

    #[test]
    fn diagonal_pixels_are_two_components() {
        let mut img = BinaryImage::zeros(4, 4);
        img.set(1, 1, true);
        img.set(2, 2, true);
        let comps = label_components(&img);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].bbox, BBox::new(1, 1, 1, 1));
        assert_eq!(comps[1].bbox, BBox::new(2, 2, 2, 2));
    }

    #[test]
    fn ring_is_one_component_with_a_hole() {
        let mut img = BinaryImage::zeros(5, 5);
        for i in 0..5 {
            img.set(i, 0, true);
            img.set(i, 4, true);
            img.set(0, i, true);
            img.set(4, i, true);
        }
        let comps = label_components(&img);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].pixel_count, 16);
        assert_eq!(comps[0].bbox, BBox::new(0, 0, 4, 4));
    }

    #[test]
    fn labels_follow_raster_order_of_first_pixels() {
        let mut img = BinaryImage::zeros(7, 3);
        img.set(5, 0, true); // first in raster order
        img.set(1, 1, true);
        img.set(3, 2, true);
        let comps = label_components(&img);
        assert_eq!(comps.len(), 3);
        assert_eq!(comps[0].label, 1);
        assert_eq!(comps[0].bbox.x0, 5);
        assert_eq!(comps[1].bbox.x0, 1);
        assert_eq!(comps[2].bbox.x0, 3);
    }

    #[test]
    fn binary_dilation_bridges_a_three_pixel_gap() {
        let mut img = BinaryImage::zeros(9, 1);
        img.set(2, 0, true);
        img.set(6, 0, true);
        let out = dilate_binary(&img, &StructElem::rect(7, 1));
        assert_eq!(label_components(&out).len(), 1);
        assert!(out.count_foreground() >= img.count_foreground());
    }

    #[test]
    fn zero_mask_stays_zero_under_dilation() {
        let img = BinaryImage::zeros(4, 4);
        assert_eq!(dilate_binary(&img, &StructElem::rect(3, 3)), img);
    }

    proptest! {
        #[test]
        fn extensivity_and_duality(data in proptest::collection::vec(0u8..=255, 64..=64)) {
            let img = gray(8, 8, &data);
            let se = StructElem::rect(3, 3);
            let di = dilate(&img, &se);
            let er = erode(&img, &se);
            for i in 0..64 {
                prop_assert!(er.data()[i] <= img.data()[i]);
                prop_assert!(img.data()[i] <= di.data()[i]);
            }
            // dilate(img) == 255 - erode(255 - img)
            let inverted = gray(8, 8, &data.iter().map(|v| 255 - v).collect::<Vec<_>>());
            let dual = erode(&inverted, &se);
            for i in 0..64 {
                prop_assert_eq!(di.data()[i], 255 - dual.data()[i]);
            }
        }

        #[test]
        fn labeling_partitions_the_foreground(bits in proptest::collection::vec(any::<bool>(), 64..=64)) {
            let img = BinaryImage::from_raw(8, 8, bits);
            let (labels, comps) = label_map(&img);
            let mut counted = vec![0usize; comps.len()];
            for y in 0..8 {
                for x in 0..8 {
                    let l = labels[y * 8 + x];
                    prop_assert_eq!(l != 0, img.get(x, y), "label/foreground mismatch at ({},{})", x, y);
                    if l != 0 {
                        counted[l - 1] += 1;
                        let b = comps[l - 1].bbox;
                        prop_assert!(x >= b.x0 && x <= b.x1 && y >= b.y0 && y <= b.y1);
                    }
                }
            }
            for (c, &n) in comps.iter().zip(&counted) {
                prop_assert_eq!(c.pixel_count, n);
                prop_assert!(c.pixel_count >= 1 && c.pixel_count <= c.bbox.area());
            }
            // relabeling the rendered label image reproduces the partition
            let rendered = BinaryImage::from_raw(8, 8, labels.iter().map(|&l| l != 0).collect());
            let (labels2, comps2) = label_map(&rendered);
            prop_assert_eq!(labels, labels2);
            prop_assert_eq!(comps.len(), comps2.len());
        }
    }
}
