//! Pixel rectangles with inclusive corners — the currency all detection and
//! evaluation code trades in.

/// Axis-aligned pixel rectangle. Both corners are inclusive, so the smallest
/// legal box is a single pixel with `x0 == x1` and `y0 == y1`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct BBox {
    pub y0: usize,
    pub x0: usize,
    pub y1: usize,
    pub x1: usize,
}

impl BBox {
    /// Panics unless `x0 <= x1` and `y0 <= y1`.
    pub fn new(x0: usize, y0: usize, x1: usize, y1: usize) -> Self {
        assert!(x0 <= x1 && y0 <= y1, "degenerate box ({x0},{y0})..({x1},{y1})");
        Self { x0, y0, x1, y1 }
    }

    pub fn width(&self) -> usize {
        self.x1 - self.x0 + 1
    }

    pub fn height(&self) -> usize {
        self.y1 - self.y0 + 1
    }

    pub fn area(&self) -> usize {
        self.width() * self.height()
    }

    /// Overlapping pixel count; 0 when the boxes are disjoint.
    pub fn intersection_area(&self, other: &BBox) -> usize {
        let x0 = self.x0.max(other.x0);
        let x1 = self.x1.min(other.x1);
        let y0 = self.y0.max(other.y0);
        let y1 = self.y1.min(other.y1);
        if x0 > x1 || y0 > y1 {
            0
        } else {
            (x1 - x0 + 1) * (y1 - y0 + 1)
        }
    }

    /// Smallest box covering both inputs.
    pub fn join(&self, other: &BBox) -> BBox {
        BBox {
            x0: self.x0.min(other.x0),
            y0: self.y0.min(other.y0),
            x1: self.x1.max(other.x1),
            y1: self.y1.max(other.y1),
        }
    }

    pub fn translate(&self, dx: usize, dy: usize) -> BBox {
        BBox { x0: self.x0 + dx, y0: self.y0 + dy, x1: self.x1 + dx, y1: self.y1 + dy }
    }
}
