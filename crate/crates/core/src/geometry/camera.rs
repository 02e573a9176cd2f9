use serde::{Deserialize, Serialize};

use super::Vec3;
use crate::{Error, Result};

/// Pinhole camera built with a look-at construction.
///
/// Intrinsics come from the vertical field of view with square pixels; the
/// horizontal field of view follows from the aspect ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CameraParams", into = "CameraParams")]
pub struct Camera {
    eye: Vec3,
    target: Vec3,
    up: Vec3,
    vfov_deg: f64,
    width: u32,
    height: u32,
    // derived orthonormal view basis
    right: Vec3,
    true_up: Vec3,
    forward: Vec3,
    focal_px: f64,
}

/// Result of projecting a point: continuous pixel coordinates plus view depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projected {
    pub x: f64,
    pub y: f64,
    pub depth: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CameraParams {
    eye: Vec3,
    target: Vec3,
    up: Vec3,
    vfov_deg: f64,
    width: u32,
    height: u32,
}

impl TryFrom<CameraParams> for Camera {
    type Error = Error;
    fn try_from(p: CameraParams) -> Result<Camera> {
        Camera::look_at(p.eye, p.target, p.up, p.vfov_deg, p.width, p.height)
    }
}

impl From<Camera> for CameraParams {
    fn from(c: Camera) -> Self {
        CameraParams {
            eye: c.eye,
            target: c.target,
            up: c.up,
            vfov_deg: c.vfov_deg,
            width: c.width,
            height: c.height,
        }
    }
}

impl Camera {
    pub fn look_at(
        eye: Vec3,
        target: Vec3,
        up: Vec3,
        vfov_deg: f64,
        width: u32,
        height: u32,
    ) -> Result<Camera> {
        if !(eye.is_finite() && target.is_finite() && up.is_finite()) {
            return Err(Error::InvalidCamera("non-finite eye, target or up".into()));
        }
        if !(vfov_deg > 0.0 && vfov_deg < 180.0) {
            return Err(Error::InvalidCamera(format!(
                "vertical fov {vfov_deg} outside (0, 180)"
            )));
        }
        if width == 0 || height == 0 {
            return Err(Error::InvalidCamera(format!("image size {width}x{height}")));
        }
        let forward = (target - eye)
            .normalized()
            .ok_or_else(|| Error::InvalidCamera("eye coincides with target".into()))?;
        let up_dir = up
            .normalized()
            .ok_or_else(|| Error::InvalidCamera("zero up vector".into()))?;
        let right = forward.cross(up_dir);
        if right.norm() < 1e-9 {
            return Err(Error::InvalidCamera(
                "up is parallel to the view direction".into(),
            ));
        }
        let right = right.normalized().expect("checked above");
        let true_up = right.cross(forward);
        let focal_px = 0.5 * f64::from(height) / (0.5 * vfov_deg.to_radians()).tan();
        Ok(Camera {
            eye,
            target,
            up,
            vfov_deg,
            width,
            height,
            right,
            true_up,
            forward,
            focal_px,
        })
    }

    pub fn eye(&self) -> Vec3 {
        self.eye
    }

    pub fn target(&self) -> Vec3 {
        self.target
    }

    pub fn vfov_deg(&self) -> f64 {
        self.vfov_deg
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    /// Unit view axis, from eye toward target.
    pub fn forward(&self) -> Vec3 {
        self.forward
    }

    pub fn right(&self) -> Vec3 {
        self.right
    }

    pub fn true_up(&self) -> Vec3 {
        self.true_up
    }

    /// Focal length in pixels.
    pub fn focal_px(&self) -> f64 {
        self.focal_px
    }

    /// Same pose and intrinsics rendered at another resolution.
    pub fn with_size(&self, width: u32, height: u32) -> Result<Camera> {
        Camera::look_at(self.eye, self.target, self.up, self.vfov_deg, width, height)
    }

    /// World point to view space as `(right, up, depth)`, depth along the view axis.
    pub fn to_view(&self, p: Vec3) -> Vec3 {
        let d = p - self.eye;
        Vec3::new(d.dot(self.right), d.dot(self.true_up), d.dot(self.forward))
    }

    /// View-space point with positive depth to continuous pixel coordinates.
    pub fn view_to_pixel(&self, v: Vec3) -> (f64, f64) {
        let cx = 0.5 * f64::from(self.width);
        let cy = 0.5 * f64::from(self.height);
        (
            cx + self.focal_px * v.x / v.z,
            cy - self.focal_px * v.y / v.z,
        )
    }

    pub fn project(&self, p: Vec3) -> Result<Projected> {
        let v = self.to_view(p);
        if v.z.is_nan() || v.z <= 0.0 {
            return Err(Error::BehindCamera { depth: v.z });
        }
        let (x, y) = self.view_to_pixel(v);
        Ok(Projected { x, y, depth: v.z })
    }
}
