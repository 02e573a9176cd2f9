use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::geometry::primitives::lathe_triangles;
use crate::geometry::{TriMesh, Vec3, BACKGROUND_CLASS, RIPE_CLASS, UNRIPE_CLASS};
use crate::render::{Material, Rgb};
use crate::seed::{derive, unit_f64};

pub const MODEL_COUNT: usize = 5;
/// Points along the lathe profile, both poles included.
pub const PROFILE_POINTS: u32 = 16;
pub const REVOLUTION_SEGMENTS: u32 = 24;

/// Unposed fruit height at `size_scale = 1`, in scene units.
const BASE_HEIGHT: f64 = 3.2;
const BASE_RADIUS: f64 = 1.3;
const PALETTE_SIZE: u64 = 4;
const COLOR_JITTER: f64 = 0.12;
const FRUIT_AMBIENT: f64 = 0.25;
const CALYX_GREEN: Rgb = [0.16, 0.42, 0.12];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ripeness {
    Ripe,
    Unripe,
}

impl Ripeness {
    pub fn class_id(self) -> u8 {
        match self {
            Ripeness::Ripe => RIPE_CLASS,
            Ripeness::Unripe => UNRIPE_CLASS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrawberryModel {
    pub model_id: u8,
    pub ripeness: Ripeness,
    pub base_color: Rgb,
    pub texture_seed: u64,
    pub size_scale: f64,
}

impl StrawberryModel {
    /// The five-fruit base scene: models 0-3 ripe red, model 4 unripe green,
    /// each with its own size and surface texture seed.
    pub fn base_set() -> Vec<StrawberryModel> {
        let specs: [(Ripeness, Rgb, u64, f64); MODEL_COUNT] = [
            (Ripeness::Ripe, [0.80, 0.08, 0.10], 0x5EED_0001, 1.00),
            (Ripeness::Ripe, [0.86, 0.14, 0.12], 0x5EED_0002, 0.90),
            (Ripeness::Ripe, [0.70, 0.05, 0.11], 0x5EED_0003, 1.12),
            (Ripeness::Ripe, [0.92, 0.20, 0.10], 0x5EED_0004, 0.82),
            (Ripeness::Unripe, [0.48, 0.72, 0.26], 0x5EED_0005, 0.78),
        ];
        specs
            .into_iter()
            .enumerate()
            .map(
                |(i, (ripeness, base_color, texture_seed, size_scale))| StrawberryModel {
                    model_id: i as u8,
                    ripeness,
                    base_color,
                    texture_seed,
                    size_scale,
                },
            )
            .collect()
    }

    /// Red channel strictly greatest for ripe models, green for unripe.
    pub fn color_is_consistent(&self) -> bool {
        let [r, g, b] = self.base_color;
        match self.ripeness {
            Ripeness::Ripe => r > g && r > b,
            Ripeness::Unripe => g > r && g > b,
        }
    }

    /// Achene bump amplitude as a fraction of the local radius.
    fn bump_amplitude(&self) -> f64 {
        0.03 + 0.03 * unit_f64(derive(self.texture_seed, 0xB0))
    }
}

fn jitter(base: Rgb, seed: u64, amount: f64) -> Rgb {
    let mut out = base;
    for (k, c) in out.iter_mut().enumerate() {
        let u = unit_f64(derive(seed, k as u64));
        *c = (*c * (1.0 + amount * (2.0 * u - 1.0))).clamp(0.0, 1.0);
    }
    out
}

/// Teardrop profile: radius at height fraction `t` (0 = tip, 1 = crown).
fn profile_radius(t: f64) -> f64 {
    BASE_RADIUS * (PI * t).sin().max(0.0).powf(0.7) * (0.45 + 0.55 * t)
}

/// Closed lathed teardrop with seeded radial bumps, tip pointing down `-y`
/// and centred on the origin.
///
/// Ripe fruit get class 0, unripe class 1. The crown fan uses a green calyx
/// material; other faces pick from a small jittered palette of the base
/// colour.
pub fn build_strawberry_mesh(model: &StrawberryModel) -> TriMesh {
    let rings = PROFILE_POINTS - 2;
    let segs = REVOLUTION_SEGMENTS;
    let height = BASE_HEIGHT * model.size_scale;
    let amp = model.bump_amplitude();
    let y_of = |t: f64| height * (t - 0.5);

    let mut vertices = Vec::with_capacity((2 + rings * segs) as usize);
    vertices.push(Vec3::new(0.0, y_of(0.0), 0.0));
    for r in 0..rings {
        let t = f64::from(r + 1) / f64::from(PROFILE_POINTS - 1);
        let base_r = profile_radius(t) * model.size_scale;
        for s in 0..segs {
            let idx = u64::from(r * segs + s);
            let bump = 1.0 + amp * (2.0 * unit_f64(derive(model.texture_seed, idx)) - 1.0);
            let phi = 2.0 * PI * f64::from(s) / f64::from(segs);
            let rad = base_r * bump;
            vertices.push(Vec3::new(rad * phi.cos(), y_of(t), -rad * phi.sin()));
        }
    }
    vertices.push(Vec3::new(0.0, y_of(1.0), 0.0));

    let triangles = lathe_triangles(segs, rings);
    let mut materials: Vec<Material> = (0..PALETTE_SIZE)
        .map(|k| {
            Material::new(
                jitter(
                    model.base_color,
                    derive(model.texture_seed, 0xC0 + k),
                    COLOR_JITTER,
                ),
                FRUIT_AMBIENT,
            )
        })
        .collect();
    materials.push(Material::new(CALYX_GREEN, FRUIT_AMBIENT));
    let calyx = PALETTE_SIZE as u16;
    let crown_start = triangles.len() - segs as usize;
    let face_material = (0..triangles.len())
        .map(|f| {
            if f >= crown_start {
                calyx
            } else {
                (derive(model.texture_seed, 0xF00_0000 + f as u64) % PALETTE_SIZE) as u16
            }
        })
        .collect();

    TriMesh {
        vertices,
        triangles,
        face_material,
        materials,
        instance_id: u32::from(model.model_id) + 1,
        class_id: model.ripeness.class_id(),
    }
}

/// Dimensions of a leaf, all derived from its seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeafShape {
    pub length: f64,
    pub width: f64,
    pub color: Rgb,
}

impl LeafShape {
    pub fn from_seed(seed: u64) -> Self {
        let u = |k| unit_f64(derive(seed, k));
        LeafShape {
            length: 4.5 + 2.0 * u(1),
            width: 1.6 + 0.8 * u(2),
            color: [0.14 + 0.12 * u(3), 0.42 + 0.16 * u(4), 0.10 + 0.08 * u(5)],
        }
    }
}

const LEAF_STATIONS: u32 = 12;

/// Thin planar leaf in the `xz` plane, midrib along `+x` from the origin,
/// with a seeded serrated outline. Class is background so it is never
/// labeled.
pub fn build_leaf_mesh(leaf_seed: u64) -> TriMesh {
    let shape = LeafShape::from_seed(leaf_seed);
    let mut vertices = vec![Vec3::ZERO];
    for i in 1..LEAF_STATIONS {
        let s = f64::from(i) / f64::from(LEAF_STATIONS);
        let serration = 1.0 + 0.15 * (2.0 * unit_f64(derive(leaf_seed, 100 + u64::from(i))) - 1.0);
        let half_w = 0.5 * shape.width * (PI * s).sin().powf(0.8) * serration;
        let x = shape.length * s;
        vertices.push(Vec3::new(x, 0.0, -half_w));
        vertices.push(Vec3::new(x, 0.0, half_w));
    }
    vertices.push(Vec3::new(shape.length, 0.0, 0.0));
    let tip = vertices.len() as u32 - 1;
    let left = |i: u32| 1 + 2 * i;
    let right = |i: u32| 2 + 2 * i;
    let pairs = LEAF_STATIONS - 1;

    let mut triangles = vec![[0, right(0), left(0)]];
    for i in 0..pairs - 1 {
        triangles.push([left(i), right(i), right(i + 1)]);
        triangles.push([left(i), right(i + 1), left(i + 1)]);
    }
    triangles.push([left(pairs - 1), right(pairs - 1), tip]);

    let materials = vec![
        Material::new(shape.color, 0.25),
        Material::new(jitter(shape.color, derive(leaf_seed, 7), 0.1), 0.25),
    ];
    let face_material = (0..triangles.len()).map(|f| (f % 2) as u16).collect();
    TriMesh {
        vertices,
        triangles,
        face_material,
        materials,
        instance_id: 0,
        class_id: BACKGROUND_CLASS,
    }
}

const SOIL: [Rgb; 4] = [
    [0.36, 0.25, 0.16],
    [0.42, 0.30, 0.19],
    [0.30, 0.21, 0.13],
    [0.39, 0.29, 0.20],
];
const GRASS: [Rgb; 4] = [
    [0.26, 0.40, 0.16],
    [0.31, 0.45, 0.18],
    [0.22, 0.35, 0.14],
    [0.34, 0.38, 0.20],
];

/// Square ground grid at `y = 0` with seeded soil/grass noise per cell.
pub fn build_ground_mesh(seed: u64, half_extent: f64, cells: u32, instance_id: u32) -> TriMesh {
    let cells = cells.max(1);
    let n = cells + 1;
    let step = 2.0 * half_extent / f64::from(cells);
    let mut vertices = Vec::with_capacity((n * n) as usize);
    for j in 0..n {
        for i in 0..n {
            vertices.push(Vec3::new(
                -half_extent + step * f64::from(i),
                0.0,
                -half_extent + step * f64::from(j),
            ));
        }
    }
    let materials: Vec<Material> = SOIL
        .iter()
        .chain(GRASS.iter())
        .map(|&c| Material::new(c, 0.3))
        .collect();
    let grass_bias = unit_f64(derive(seed, 1));
    let mut triangles = Vec::with_capacity((2 * cells * cells) as usize);
    let mut face_material = Vec::with_capacity(triangles.capacity());
    for j in 0..cells {
        for i in 0..cells {
            let cell_seed = derive(seed, 1000 + u64::from(j * cells + i));
            let grass = unit_f64(cell_seed) < grass_bias;
            let shade = (derive(cell_seed, 1) % 4) as u16;
            let m = if grass { 4 + shade } else { shade };
            let (a, b) = (j * n + i, j * n + i + 1);
            let (c, d) = (a + n, b + n);
            triangles.push([a, c, b]);
            triangles.push([b, c, d]);
            face_material.extend([m, m]);
        }
    }
    TriMesh {
        vertices,
        triangles,
        face_material,
        materials,
        instance_id,
        class_id: BACKGROUND_CLASS,
    }
}
