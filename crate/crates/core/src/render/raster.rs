use serde::{Deserialize, Serialize};

use super::{quantize, shade, FrameBuffer, NO_INSTANCE};
use crate::geometry::{Camera, TriMesh, Vec3};
use crate::scenegen::LightingMode;
use crate::{Error, Result};

/// View depth below which geometry is clipped away.
pub const DEFAULT_NEAR_PLANE: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderSettings {
    pub width: u32,
    pub height: u32,
    pub near_plane: f64,
    /// Colour of pixels no mesh covers.
    pub sky_color: [u8; 3],
}

impl Default for RenderSettings {
    fn default() -> Self {
        RenderSettings {
            width: 500,
            height: 500,
            near_plane: DEFAULT_NEAR_PLANE,
            sky_color: [168, 196, 222],
        }
    }
}

impl RenderSettings {
    pub fn with_size(width: u32, height: u32) -> Self {
        RenderSettings {
            width,
            height,
            ..Default::default()
        }
    }
}

/// Screen-space vertex: pixel position plus reciprocal view depth.
#[derive(Debug, Clone, Copy)]
struct ScreenVertex {
    x: f64,
    y: f64,
    inv_z: f64,
}

/// Render `meshes` seen from `camera` at the resolution in `settings`.
///
/// Meshes are drawn in ascending `instance_id` order with a strict depth test,
/// so exact depth ties resolve to the lower id regardless of the order the
/// caller passed them in.
pub fn rasterize(
    meshes: &[TriMesh],
    camera: &Camera,
    light: LightingMode,
    settings: &RenderSettings,
) -> Result<FrameBuffer> {
    if settings.width == 0 || settings.height == 0 {
        return Err(Error::InvalidSettings(format!(
            "zero-area image {}x{}",
            settings.width, settings.height
        )));
    }
    if !(settings.near_plane > 0.0 && settings.near_plane.is_finite()) {
        return Err(Error::InvalidSettings(format!(
            "near plane {}",
            settings.near_plane
        )));
    }
    let camera = if camera.width() == settings.width && camera.height() == settings.height {
        camera.clone()
    } else {
        camera.with_size(settings.width, settings.height)?
    };

    let mut order: Vec<&TriMesh> = meshes.iter().collect();
    order.sort_by_key(|m| m.instance_id);
    for pair in order.windows(2) {
        if pair[0].instance_id == pair[1].instance_id {
            return Err(Error::InconsistentScene(format!(
                "instance id {} used by two meshes",
                pair[0].instance_id
            )));
        }
    }

    let mut fb = FrameBuffer::new(settings.width, settings.height, settings.sky_color);
    let light = light.light();
    let eye = camera.eye();
    for mesh in order {
        if mesh.instance_id == NO_INSTANCE {
            return Err(Error::InvalidMesh(
                "instance id collides with the empty sentinel".into(),
            ));
        }
        mesh.validate()?;
        let view: Vec<Vec3> = mesh.vertices.iter().map(|&v| camera.to_view(v)).collect();
        for (face, &[a, b, c]) in mesh.triangles.iter().enumerate() {
            let [wa, wb, wc] = mesh.triangle(face);
            let Some(mut normal) = (wb - wa).cross(wc - wa).normalized() else {
                continue;
            };
            // two-sided: shade the side facing the viewer
            if normal.dot(eye - wa) < 0.0 {
                normal = -normal;
            }
            let color = quantize(shade(normal, mesh.material_of(face), &light));
            let tri = [view[a as usize], view[b as usize], view[c as usize]];
            let poly = clip_near(&tri, settings.near_plane);
            if poly.len() < 3 {
                continue;
            }
            let screen: Vec<ScreenVertex> = poly
                .iter()
                .map(|&v| {
                    let (x, y) = camera.view_to_pixel(v);
                    ScreenVertex {
                        x,
                        y,
                        inv_z: 1.0 / v.z,
                    }
                })
                .collect();
            for k in 1..screen.len() - 1 {
                fill_triangle(
                    &mut fb,
                    [screen[0], screen[k], screen[k + 1]],
                    color,
                    mesh.instance_id,
                );
            }
        }
    }
    Ok(fb)
}

/// Clip a view-space triangle to `z >= near`; returns 0, 3 or 4 vertices.
fn clip_near(tri: &[Vec3; 3], near: f64) -> Vec<Vec3> {
    let mut out = Vec::with_capacity(4);
    for i in 0..3 {
        let cur = tri[i];
        let next = tri[(i + 1) % 3];
        let (cur_in, next_in) = (cur.z >= near, next.z >= near);
        if cur_in {
            out.push(cur);
        }
        if cur_in != next_in {
            let t = (near - cur.z) / (next.z - cur.z);
            let mut p = cur + (next - cur) * t;
            p.z = near;
            out.push(p);
        }
    }
    out
}

#[inline]
fn edge(a: ScreenVertex, b: ScreenVertex, px: f64, py: f64) -> f64 {
    (b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x)
}

/// Top-left rule: a sample exactly on an edge belongs to the triangle only if
/// the edge is a top or left edge. Opposite directions of a shared edge
/// always disagree, so shared edges are filled once.
#[inline]
fn owns_edge(a: ScreenVertex, b: ScreenVertex) -> bool {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    dy < 0.0 || (dy == 0.0 && dx > 0.0)
}

fn fill_triangle(fb: &mut FrameBuffer, v: [ScreenVertex; 3], color: [u8; 3], instance: u32) {
    let [v0, mut v1, mut v2] = v;
    let mut area = edge(v0, v1, v2.x, v2.y);
    if area == 0.0 || !area.is_finite() {
        return;
    }
    if area < 0.0 {
        std::mem::swap(&mut v1, &mut v2);
        area = -area;
    }
    let (w, h) = (fb.width() as i64, fb.height() as i64);
    let min_x = v0.x.min(v1.x).min(v2.x);
    let max_x = v0.x.max(v1.x).max(v2.x);
    let min_y = v0.y.min(v1.y).min(v2.y);
    let max_y = v0.y.max(v1.y).max(v2.y);
    // pixel i is sampled at i + 0.5
    let x0 = ((min_x - 0.5).ceil() as i64).max(0);
    let x1 = ((max_x - 0.5).floor() as i64).min(w - 1);
    let y0 = ((min_y - 0.5).ceil() as i64).max(0);
    let y1 = ((max_y - 0.5).floor() as i64).min(h - 1);
    if x0 > x1 || y0 > y1 {
        return;
    }
    let own = [owns_edge(v1, v2), owns_edge(v2, v0), owns_edge(v0, v1)];
    let inside = |e: f64, owned: bool| e > 0.0 || (e == 0.0 && owned);
    let inv_area = 1.0 / area;
    for y in y0..=y1 {
        let py = y as f64 + 0.5;
        let row = (y * w) as usize;
        for x in x0..=x1 {
            let px = x as f64 + 0.5;
            let e0 = edge(v1, v2, px, py);
            let e1 = edge(v2, v0, px, py);
            let e2 = edge(v0, v1, px, py);
            if !(inside(e0, own[0]) && inside(e1, own[1]) && inside(e2, own[2])) {
                continue;
            }
            // 1/z is affine in screen space
            let inv_z = (e0 * v0.inv_z + e1 * v1.inv_z + e2 * v2.inv_z) * inv_area;
            let depth = 1.0 / inv_z;
            let idx = row + x as usize;
            if depth < fb.depth[idx] {
                fb.depth[idx] = depth;
                fb.instance[idx] = instance;
                fb.rgb[3 * idx..3 * idx + 3].copy_from_slice(&color);
            }
        }
    }
}
