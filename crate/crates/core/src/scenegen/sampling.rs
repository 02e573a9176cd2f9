use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::config::{Aabb, AngleRange};
use super::{
    build_ground_mesh, build_leaf_mesh, build_strawberry_mesh, CapturePolicy, GenerationConfig,
    LightingMode,
};
use crate::geometry::{apply_pose, Camera, Pose, Quat, TriMesh, Vec3};
use crate::seed;
use crate::Result;

pub const GROUND_INSTANCE_ID: u32 = 1000;
const LEAF_INSTANCE_BASE: u32 = 100;

pub fn fruit_instance_id(model_id: u8) -> u32 {
    u32::from(model_id) + 1
}

pub fn leaf_instance_id(leaf_index: usize) -> u32 {
    LEAF_INSTANCE_BASE + leaf_index as u32
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FruitPlacement {
    pub model_id: u8,
    pub pose: Pose,
}

/// A leaf's shape is fully determined by its seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeafPlacement {
    pub leaf_seed: u64,
    pub pose: Pose,
}

/// Everything needed to rebuild one scene's geometry and its primary capture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneSpec {
    pub scene_index: u64,
    pub scene_seed: u64,
    pub placements: Vec<FruitPlacement>,
    pub leaf_placements: Vec<LeafPlacement>,
    pub lighting: LightingMode,
    pub camera_index: usize,
    pub region: Aabb,
}

/// One planned (viewpoint, lighting) capture of a scene.
#[derive(Debug, Clone, PartialEq)]
pub struct Capture {
    pub camera_index: usize,
    pub lighting: LightingMode,
    pub camera: Camera,
}

fn uniform_in(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..=hi)
    }
}

fn angle(rng: &mut impl Rng, r: AngleRange) -> f64 {
    uniform_in(rng, r.min_deg, r.max_deg).to_radians()
}

fn point_in(rng: &mut impl Rng, b: &Aabb) -> Vec3 {
    Vec3::new(
        uniform_in(rng, b.min.x, b.max.x),
        uniform_in(rng, b.min.y, b.max.y),
        uniform_in(rng, b.min.z, b.max.z),
    )
}

/// Sample scene `scene_index` of the corpus described by `config`.
///
/// The scene seed depends only on `(master_seed, scene_index)`, so scenes can
/// be sampled in any order.
pub fn sample_scene(config: &GenerationConfig, scene_index: u64) -> Result<SceneSpec> {
    config.validate()?;
    let scene_seed = seed::derive(config.master_seed, scene_index);
    let mut rng = seed::rng(scene_seed);
    let ranges = &config.pose;

    let placements = config
        .models
        .iter()
        .map(|m| {
            let translation = point_in(&mut rng, &ranges.region);
            let yaw = angle(&mut rng, ranges.yaw);
            let pitch = angle(&mut rng, ranges.pitch);
            let roll = angle(&mut rng, ranges.roll);
            FruitPlacement {
                model_id: m.model_id,
                pose: Pose::new(Quat::from_yaw_pitch_roll(yaw, pitch, roll), translation),
            }
        })
        .collect();

    let leaves = &config.leaves;
    let leaf_count = rng.random_range(leaves.min_count..=leaves.max_count);
    let leaf_placements = (0..leaf_count)
        .map(|k| {
            let translation = point_in(&mut rng, &leaves.region);
            let yaw = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
            let pitch = angle(&mut rng, leaves.tilt);
            let roll = angle(&mut rng, leaves.tilt);
            LeafPlacement {
                leaf_seed: seed::derive(scene_seed, 0x1EAF_0000 + u64::from(k)),
                pose: Pose::new(Quat::from_yaw_pitch_roll(yaw, pitch, roll), translation),
            }
        })
        .collect();

    let lighting = config.lighting_modes[rng.random_range(0..config.lighting_modes.len())];
    let camera_index = rng.random_range(0..config.camera.yaw_deg.len());

    Ok(SceneSpec {
        scene_index,
        scene_seed,
        placements,
        leaf_placements,
        lighting,
        camera_index,
        region: ranges.region,
    })
}

/// Camera on the configured ring at `camera_index`, aimed at `center`.
pub fn ring_camera(config: &GenerationConfig, center: Vec3, camera_index: usize) -> Result<Camera> {
    let ring = &config.camera;
    let yaw = ring.yaw_deg[camera_index].to_radians();
    let elev = ring.elevation_deg.to_radians();
    let offset =
        Vec3::new(elev.cos() * yaw.sin(), elev.sin(), elev.cos() * yaw.cos()) * ring.radius;
    Camera::look_at(
        center + offset,
        center,
        Vec3::Y,
        ring.vfov_deg,
        config.image_width,
        config.image_height,
    )
}

/// Captures of `spec` under the configured policy, in capture order.
///
/// `All` enumerates viewpoints outermost and lighting modes innermost.
/// `PerScene(k)` starts with the scene's sampled combination and follows it
/// with a scene-seeded permutation of the rest.
pub fn capture_plan(config: &GenerationConfig, spec: &SceneSpec) -> Result<Vec<Capture>> {
    let center = spec.region.center();
    let mut combos: Vec<(usize, LightingMode)> = (0..config.camera.yaw_deg.len())
        .flat_map(|v| config.lighting_modes.iter().map(move |&l| (v, l)))
        .collect();
    if let CapturePolicy::PerScene(k) = config.capture {
        let primary = (spec.camera_index, spec.lighting);
        combos.retain(|c| *c != primary);
        combos.shuffle(&mut seed::rng(seed::derive_named(
            spec.scene_seed,
            "captures",
        )));
        combos.insert(0, primary);
        combos.truncate(k);
    }
    combos
        .into_iter()
        .map(|(camera_index, lighting)| {
            Ok(Capture {
                camera_index,
                lighting,
                camera: ring_camera(config, center, camera_index)?,
            })
        })
        .collect()
}

/// Posed meshes of every object in the scene: fruit, leaves, then ground.
pub fn scene_meshes(config: &GenerationConfig, spec: &SceneSpec) -> Vec<TriMesh> {
    let mut meshes = Vec::with_capacity(spec.placements.len() + spec.leaf_placements.len() + 1);
    for p in &spec.placements {
        let model = &config.models[p.model_id as usize];
        let mut mesh = apply_pose(&build_strawberry_mesh(model), &p.pose);
        mesh.instance_id = fruit_instance_id(p.model_id);
        meshes.push(mesh);
    }
    for (k, leaf) in spec.leaf_placements.iter().enumerate() {
        let mut mesh = apply_pose(&build_leaf_mesh(leaf.leaf_seed), &leaf.pose);
        mesh.instance_id = leaf_instance_id(k);
        meshes.push(mesh);
    }
    meshes.push(build_ground_mesh(
        seed::derive_named(spec.scene_seed, "ground"),
        config.ground_half_extent,
        config.ground_cells,
        GROUND_INSTANCE_ID,
    ));
    meshes
}
