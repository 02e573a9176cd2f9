use super::{BBox2D, Camera, Pose, Vec3};
use crate::render::Material;
use crate::{Error, Result};

pub const RIPE_CLASS: u8 = 0;
pub const UNRIPE_CLASS: u8 = 1;
/// Leaves, ground and anything else that must never be labeled.
pub const BACKGROUND_CLASS: u8 = 255;

/// Indexed triangle mesh for one scene object.
///
/// Every triangle carries an index into `materials`, so per-face colour
/// jitter is just a small palette.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[u32; 3]>,
    pub face_material: Vec<u16>,
    pub materials: Vec<Material>,
    pub instance_id: u32,
    pub class_id: u8,
}

impl TriMesh {
    pub fn validate(&self) -> Result<()> {
        let n = self.vertices.len();
        if self.face_material.len() != self.triangles.len() {
            return Err(Error::InvalidMesh(format!(
                "{} triangles but {} face materials",
                self.triangles.len(),
                self.face_material.len()
            )));
        }
        if let Some(t) = self
            .triangles
            .iter()
            .find(|t| t.iter().any(|&i| i as usize >= n))
        {
            return Err(Error::InvalidMesh(format!(
                "triangle {t:?} indexes past {n} vertices"
            )));
        }
        if let Some(m) = self
            .face_material
            .iter()
            .find(|&&m| m as usize >= self.materials.len())
        {
            return Err(Error::InvalidMesh(format!(
                "material index {m} out of range"
            )));
        }
        if let Some(v) = self.vertices.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidMesh(format!("non-finite vertex {v:?}")));
        }
        Ok(())
    }

    pub fn is_fruit(&self) -> bool {
        self.class_id != BACKGROUND_CLASS
    }

    pub fn triangle(&self, i: usize) -> [Vec3; 3] {
        let [a, b, c] = self.triangles[i];
        [
            self.vertices[a as usize],
            self.vertices[b as usize],
            self.vertices[c as usize],
        ]
    }

    pub fn material_of(&self, face: usize) -> &Material {
        &self.materials[self.face_material[face] as usize]
    }

    pub fn centroid(&self) -> Vec3 {
        if self.vertices.is_empty() {
            return Vec3::ZERO;
        }
        let sum = self.vertices.iter().fold(Vec3::ZERO, |acc, &v| acc + v);
        sum / self.vertices.len() as f64
    }

    /// Number of distinct undirected edges.
    pub fn edge_count(&self) -> usize {
        let mut edges: Vec<(u32, u32)> = self
            .triangles
            .iter()
            .flat_map(|&[a, b, c]| [(a, b), (b, c), (c, a)])
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges.len()
    }

    /// `V - E + F`; 2 for a closed genus-0 surface.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edge_count() as i64 + self.triangles.len() as i64
    }
}

/// Rotate then translate every vertex; topology, materials and ids are kept.
pub fn apply_pose(mesh: &TriMesh, pose: &Pose) -> TriMesh {
    TriMesh {
        vertices: mesh
            .vertices
            .iter()
            .map(|&v| pose.transform_point(v))
            .collect(),
        ..mesh.clone()
    }
}

/// Bounds of all projected vertices, clamped to the image.
///
/// Fails with [`Error::BehindCamera`] if any vertex is not in front of the
/// camera and with [`Error::OffScreen`] if the bounds miss the image.
pub fn projected_bbox(camera: &Camera, mesh: &TriMesh) -> Result<BBox2D> {
    if mesh.vertices.is_empty() {
        return Err(Error::InvalidMesh("mesh has no vertices".into()));
    }
    let mut lo = (f64::INFINITY, f64::INFINITY);
    let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &v in &mesh.vertices {
        let p = camera.project(v)?;
        lo = (lo.0.min(p.x), lo.1.min(p.y));
        hi = (hi.0.max(p.x), hi.1.max(p.y));
    }
    let raw = BBox2D {
        x_min: lo.0,
        y_min: lo.1,
        x_max: hi.0,
        y_max: hi.1,
    };
    raw.clamp_to(camera.width(), camera.height())
        .ok_or(Error::OffScreen)
}
