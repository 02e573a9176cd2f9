//! Small closed meshes used as test fixtures and calibration targets.

use std::f64::consts::PI;

use super::{TriMesh, Vec3};
use crate::render::Material;

fn single_material() -> Vec<Material> {
    vec![Material::new([0.8, 0.2, 0.2], 0.2)]
}

/// Axis-aligned box with the given half extents, centred on the origin.
pub fn cuboid(half: Vec3, instance_id: u32, class_id: u8) -> TriMesh {
    let vertices: Vec<Vec3> = (0..8)
        .map(|i| {
            Vec3::new(
                if i & 1 == 0 { -half.x } else { half.x },
                if i & 2 == 0 { -half.y } else { half.y },
                if i & 4 == 0 { -half.z } else { half.z },
            )
        })
        .collect();
    // outward winding (counter-clockwise seen from outside)
    let quads: [[u32; 4]; 6] = [
        [0, 2, 3, 1], // -z
        [4, 5, 7, 6], // +z
        [0, 1, 5, 4], // -y
        [2, 6, 7, 3], // +y
        [0, 4, 6, 2], // -x
        [1, 3, 7, 5], // +x
    ];
    let triangles: Vec<[u32; 3]> = quads
        .iter()
        .flat_map(|q| [[q[0], q[1], q[2]], [q[0], q[2], q[3]]])
        .collect();
    TriMesh {
        vertices,
        face_material: vec![0; triangles.len()],
        triangles,
        materials: single_material(),
        instance_id,
        class_id,
    }
}

/// Cube of edge length `size` centred on the origin.
pub fn cube(size: f64, instance_id: u32, class_id: u8) -> TriMesh {
    cuboid(Vec3::new(size, size, size) * 0.5, instance_id, class_id)
}

/// Latitude/longitude sphere with poles on the `y` axis.
pub fn uv_sphere(
    radius: f64,
    segments: u32,
    rings: u32,
    instance_id: u32,
    class_id: u8,
) -> TriMesh {
    let segments = segments.max(3);
    let rings = rings.max(2);
    let mut vertices = vec![Vec3::new(0.0, -radius, 0.0)];
    for r in 1..rings {
        let theta = PI * f64::from(r) / f64::from(rings);
        let (y, ring_r) = (-radius * theta.cos(), radius * theta.sin());
        for s in 0..segments {
            let phi = 2.0 * PI * f64::from(s) / f64::from(segments);
            vertices.push(Vec3::new(ring_r * phi.cos(), y, -ring_r * phi.sin()));
        }
    }
    vertices.push(Vec3::new(0.0, radius, 0.0));
    let triangles = lathe_triangles(segments, rings - 1);
    TriMesh {
        vertices,
        face_material: vec![0; triangles.len()],
        triangles,
        materials: single_material(),
        instance_id,
        class_id,
    }
}

/// Triangle list for a surface of revolution laid out as
/// `[bottom pole, ring 0 .. ring n-1 (segments each), top pole]`.
pub(crate) fn lathe_triangles(segments: u32, rings: u32) -> Vec<[u32; 3]> {
    let ring = |r: u32, s: u32| 1 + r * segments + s % segments;
    let top = 1 + rings * segments;
    let mut tris = Vec::with_capacity((2 * segments * rings) as usize);
    for s in 0..segments {
        tris.push([0, ring(0, s + 1), ring(0, s)]);
    }
    for r in 0..rings.saturating_sub(1) {
        for s in 0..segments {
            let (a, b) = (ring(r, s), ring(r, s + 1));
            let (c, d) = (ring(r + 1, s), ring(r + 1, s + 1));
            tris.push([a, b, d]);
            tris.push([a, d, c]);
        }
    }
    for s in 0..segments {
        tris.push([top, ring(rings - 1, s), ring(rings - 1, s + 1)]);
    }
    tris
}
