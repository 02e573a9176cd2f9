//! Automatic ground truth from instance buffers.
//!
//! Boxes cover the visible pixels of each fruit instance. Visibility is the
//! ratio between an instance's pixels in the full scene and in a solo render
//! of the same instance from the same camera.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::geometry::{BBox2D, BACKGROUND_CLASS};
use crate::render::{FrameBuffer, NO_INSTANCE};
use crate::{Error, Result};

pub const DEFAULT_MIN_VISIBILITY: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceLabel {
    pub instance_id: u32,
    pub class_id: u8,
    pub bbox: BBox2D,
    pub visibility: f64,
    pub pixel_count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Annotation {
    pub image_id: String,
    pub width: u32,
    pub height: u32,
    pub labels: Vec<InstanceLabel>,
}

impl Annotation {
    pub fn empty(image_id: impl Into<String>, width: u32, height: u32) -> Self {
        Annotation {
            image_id: image_id.into(),
            width,
            height,
            labels: Vec::new(),
        }
    }
}

/// What the labeler needs to know about one instance id.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceInfo {
    pub class_id: u8,
    /// Pixel count of the instance rendered alone; `None` treats the
    /// instance as fully visible.
    pub solo_pixels: Option<u64>,
}

/// Tight pixel bounds and count of one instance, by scanning the raster.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Extent {
    x_min: u32,
    y_min: u32,
    x_max: u32,
    y_max: u32,
    count: u64,
}

fn instance_extents(fb: &FrameBuffer) -> BTreeMap<u32, Extent> {
    let mut out: BTreeMap<u32, Extent> = BTreeMap::new();
    let w = fb.width() as usize;
    for (i, &id) in fb.instance.iter().enumerate() {
        if id == NO_INSTANCE {
            continue;
        }
        let (x, y) = ((i % w) as u32, (i / w) as u32);
        out.entry(id)
            .and_modify(|e| {
                e.x_min = e.x_min.min(x);
                e.x_max = e.x_max.max(x);
                e.y_min = e.y_min.min(y);
                e.y_max = e.y_max.max(y);
                e.count += 1;
            })
            .or_insert(Extent {
                x_min: x,
                y_min: y,
                x_max: x,
                y_max: y,
                count: 1,
            });
    }
    out
}

/// `scene pixels / solo pixels` for one instance, 0 when the solo render is
/// empty.
pub fn visibility_fraction(
    scene_fb: &FrameBuffer,
    solo_fb: &FrameBuffer,
    instance_id: u32,
) -> Result<f64> {
    if scene_fb.dims() != solo_fb.dims() {
        return Err(Error::DimensionMismatch {
            left: scene_fb.dims(),
            right: solo_fb.dims(),
        });
    }
    let solo = solo_fb.count_instance(instance_id);
    if solo == 0 {
        return Ok(0.0);
    }
    Ok((scene_fb.count_instance(instance_id) as f64 / solo as f64).min(1.0))
}

/// Build the annotation for one rendered image.
///
/// Every instance id in the buffer must appear in `instances`; background
/// instances (class 255) are never labeled, and fruit below
/// `min_visibility` are dropped. Labels come out in ascending instance id.
pub fn extract_labels(
    image_id: &str,
    fb: &FrameBuffer,
    instances: &BTreeMap<u32, InstanceInfo>,
    min_visibility: f64,
) -> Result<Annotation> {
    let mut ann = Annotation::empty(image_id, fb.width(), fb.height());
    for (id, ext) in instance_extents(fb) {
        let info = instances.get(&id).ok_or_else(|| {
            Error::InconsistentScene(format!(
                "instance {id} is rendered in {image_id} but has no class"
            ))
        })?;
        if info.class_id == BACKGROUND_CLASS {
            continue;
        }
        let visibility = match info.solo_pixels {
            Some(0) => 0.0,
            Some(solo) => (ext.count as f64 / solo as f64).min(1.0),
            None => 1.0,
        };
        if visibility < min_visibility || visibility == 0.0 {
            continue;
        }
        let bbox = BBox2D::new(
            f64::from(ext.x_min),
            f64::from(ext.y_min),
            f64::from(ext.x_max) + 1.0,
            f64::from(ext.y_max) + 1.0,
        )?;
        ann.labels.push(InstanceLabel {
            instance_id: id,
            class_id: info.class_id,
            bbox,
            visibility,
            pixel_count: ext.count,
        });
    }
    Ok(ann)
}
