//! Vectors, rigid poses, triangle meshes and the pinhole camera.
//!
//! Conventions: right-handed world, `+y` up, scene units of roughly one
//! centimetre. Cameras look down their local `-z`. Pixel coordinates put the
//! origin at the top-left corner with `y` growing downward, and pixel `(i, j)`
//! is sampled at its centre `(i + 0.5, j + 0.5)`.

mod bbox;
mod camera;
mod mesh;
mod pose;
pub mod primitives;
mod vec3;

pub use bbox::BBox2D;
pub use camera::{Camera, Projected};
pub use mesh::{apply_pose, projected_bbox, TriMesh, BACKGROUND_CLASS, RIPE_CLASS, UNRIPE_CLASS};
pub use pose::{Pose, Quat};
pub use vec3::Vec3;
