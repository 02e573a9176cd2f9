use serde::{Deserialize, Serialize};

use crate::geometry::Vec3;
use crate::scenegen::Light;

/// Linear RGB with channels in `[0, 1]`.
pub type Rgb = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Material {
    pub albedo: Rgb,
    pub ambient: f64,
}

impl Material {
    pub fn new(albedo: Rgb, ambient: f64) -> Self {
        Material {
            albedo: albedo.map(|c| c.clamp(0.0, 1.0)),
            ambient: ambient.clamp(0.0, 1.0),
        }
    }
}

impl Default for Material {
    fn default() -> Self {
        Material::new([0.7, 0.7, 0.7], 0.2)
    }
}

/// Lambertian term: `albedo * clamp(ambient + intensity * max(0, n.l), 0, 1)`.
///
/// `normal` must be unit length; the light direction points toward the light.
pub fn shade(normal: Vec3, material: &Material, light: &Light) -> Rgb {
    let lambert = normal.dot(light.direction).max(0.0);
    let k = (material.ambient + light.intensity * lambert).clamp(0.0, 1.0);
    material.albedo.map(|c| c * k)
}

/// `[0, 1]` linear colour to 8-bit, round-to-nearest, no gamma.
pub fn quantize(c: Rgb) -> [u8; 3] {
    c.map(|v| (v.clamp(0.0, 1.0) * 255.0).round() as u8)
}
