use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Axis-aligned box in absolute pixel coordinates, inclusive min and
/// exclusive max. Rendered labels have integer corners; imported and
/// detected boxes may be fractional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BBox2D {
    pub x_min: f64,
    pub y_min: f64,
    pub x_max: f64,
    pub y_max: f64,
}

impl BBox2D {
    pub fn new(x_min: f64, y_min: f64, x_max: f64, y_max: f64) -> Result<BBox2D> {
        let b = BBox2D {
            x_min,
            y_min,
            x_max,
            y_max,
        };
        if ![x_min, y_min, x_max, y_max].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidBox(format!("non-finite corner in {b:?}")));
        }
        if !(x_min < x_max && y_min < y_max) {
            return Err(Error::InvalidBox(format!(
                "empty extent ({x_min}, {y_min}, {x_max}, {y_max})"
            )));
        }
        Ok(b)
    }

    /// Box from a centre/size description.
    pub fn from_center(cx: f64, cy: f64, w: f64, h: f64) -> Result<BBox2D> {
        BBox2D::new(cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h)
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> (f64, f64) {
        (
            0.5 * (self.x_min + self.x_max),
            0.5 * (self.y_min + self.y_max),
        )
    }

    /// Componentwise hull of two boxes.
    pub fn hull(&self, o: &BBox2D) -> BBox2D {
        BBox2D {
            x_min: self.x_min.min(o.x_min),
            y_min: self.y_min.min(o.y_min),
            x_max: self.x_max.max(o.x_max),
            y_max: self.y_max.max(o.y_max),
        }
    }

    /// Area of the overlap with `o` (zero when disjoint or touching).
    pub fn intersection_area(&self, o: &BBox2D) -> f64 {
        let w = self.x_max.min(o.x_max) - self.x_min.max(o.x_min);
        let h = self.y_max.min(o.y_max) - self.y_min.max(o.y_min);
        if w <= 0.0 || h <= 0.0 {
            0.0
        } else {
            w * h
        }
    }

    /// Clamp to `[0, width] x [0, height]`; `None` when nothing remains.
    pub fn clamp_to(&self, width: u32, height: u32) -> Option<BBox2D> {
        let (w, h) = (f64::from(width), f64::from(height));
        let b = BBox2D {
            x_min: self.x_min.clamp(0.0, w),
            y_min: self.y_min.clamp(0.0, h),
            x_max: self.x_max.clamp(0.0, w),
            y_max: self.y_max.clamp(0.0, h),
        };
        (b.x_min < b.x_max && b.y_min < b.y_max).then_some(b)
    }

    /// Scale x and y coordinates independently.
    pub fn scaled(&self, sx: f64, sy: f64) -> BBox2D {
        BBox2D {
            x_min: self.x_min * sx,
            y_min: self.y_min * sy,
            x_max: self.x_max * sx,
            y_max: self.y_max * sy,
        }
    }
}
