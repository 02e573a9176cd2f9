//! Procedural strawberry scenes.
//!
//! A fixed base set of five strawberry models (four ripe, one unripe) plus
//! leaves and a ground plane is randomized per scene along three axes: fruit
//! pose inside a central region, one of three lighting modes, and a ring of
//! look-at viewpoints around the region. Every scene is a pure function of
//! `(master_seed, scene_index)`.

mod config;
mod lighting;
mod models;
mod sampling;

pub use config::{
    Aabb, AngleRange, CameraRing, CapturePolicy, GenerationConfig, LeafRanges, PoseRanges,
};
pub use lighting::{Light, LightingMode};
pub use models::{
    build_ground_mesh, build_leaf_mesh, build_strawberry_mesh, LeafShape, Ripeness,
    StrawberryModel, MODEL_COUNT, PROFILE_POINTS, REVOLUTION_SEGMENTS,
};
pub use sampling::{
    capture_plan, fruit_instance_id, leaf_instance_id, ring_camera, sample_scene, scene_meshes,
    Capture, FruitPlacement, LeafPlacement, SceneSpec, GROUND_INSTANCE_ID,
};
