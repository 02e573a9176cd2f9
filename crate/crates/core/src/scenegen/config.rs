use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{LightingMode, Ripeness, StrawberryModel, MODEL_COUNT};
use crate::geometry::Vec3;
use crate::{Error, Result};

/// Axis-aligned 3D box, closed on both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aabb {
    pub min: Vec3,
    pub max: Vec3,
}

impl Aabb {
    pub fn new(min: Vec3, max: Vec3) -> Self {
        Aabb { min, max }
    }

    pub fn center(&self) -> Vec3 {
        (self.min + self.max) * 0.5
    }

    pub fn contains(&self, p: Vec3) -> bool {
        (self.min.x..=self.max.x).contains(&p.x)
            && (self.min.y..=self.max.y).contains(&p.y)
            && (self.min.z..=self.max.z).contains(&p.z)
    }

    fn is_valid(&self) -> bool {
        self.min.is_finite()
            && self.max.is_finite()
            && self.min.x <= self.max.x
            && self.min.y <= self.max.y
            && self.min.z <= self.max.z
    }
}

/// Closed interval of angles in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleRange {
    pub min_deg: f64,
    pub max_deg: f64,
}

impl AngleRange {
    pub const fn new(min_deg: f64, max_deg: f64) -> Self {
        AngleRange { min_deg, max_deg }
    }

    pub fn contains_deg(&self, deg: f64) -> bool {
        (self.min_deg..=self.max_deg).contains(&deg)
    }

    fn is_valid(&self) -> bool {
        self.min_deg.is_finite() && self.max_deg.is_finite() && self.min_deg <= self.max_deg
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PoseRanges {
    /// Fruit translations are drawn uniformly from this box.
    pub region: Aabb,
    pub yaw: AngleRange,
    pub pitch: AngleRange,
    pub roll: AngleRange,
}

impl Default for PoseRanges {
    fn default() -> Self {
        PoseRanges {
            region: Aabb::new(Vec3::new(-4.0, 1.5, -4.0), Vec3::new(4.0, 2.5, 4.0)),
            yaw: AngleRange::new(-180.0, 180.0),
            pitch: AngleRange::new(-30.0, 30.0),
            roll: AngleRange::new(-30.0, 30.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LeafRanges {
    pub min_count: u32,
    pub max_count: u32,
    /// Box the leaf base point is drawn from.
    pub region: Aabb,
    pub tilt: AngleRange,
}

impl Default for LeafRanges {
    fn default() -> Self {
        LeafRanges {
            min_count: 1,
            max_count: 3,
            region: Aabb::new(Vec3::new(-5.0, 2.8, -5.0), Vec3::new(5.0, 4.2, 5.0)),
            tilt: AngleRange::new(-25.0, 25.0),
        }
    }
}

/// Viewpoints on a horizontal ring around the region centre.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CameraRing {
    pub yaw_deg: Vec<f64>,
    pub elevation_deg: f64,
    pub radius: f64,
    pub vfov_deg: f64,
}

impl Default for CameraRing {
    fn default() -> Self {
        // At radius 24 and 40 degrees of vertical fov the 8-unit fruit region
        // plus fruit extent fills about 60% of the frame height.
        CameraRing {
            yaw_deg: vec![-60.0, -30.0, 0.0, 30.0, 60.0],
            elevation_deg: 35.0,
            radius: 24.0,
            vfov_deg: 40.0,
        }
    }
}

/// How many (viewpoint, lighting) captures each scene contributes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "count")]
pub enum CapturePolicy {
    /// Every viewpoint under every lighting mode.
    All,
    /// A seeded subset of this many distinct combinations, starting with the
    /// scene's own sampled (viewpoint, lighting).
    PerScene(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenerationConfig {
    pub master_seed: u64,
    pub target_image_count: usize,
    pub image_width: u32,
    pub image_height: u32,
    pub models: Vec<StrawberryModel>,
    pub pose: PoseRanges,
    pub leaves: LeafRanges,
    pub lighting_modes: Vec<LightingMode>,
    pub camera: CameraRing,
    pub capture: CapturePolicy,
    pub ground_half_extent: f64,
    pub ground_cells: u32,
    /// Fruit seen at less than this fraction of their unoccluded area are
    /// not labeled.
    pub min_visibility: f64,
    /// Also write a PNG next to every PPM.
    pub png_sidecar: bool,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        GenerationConfig {
            master_seed: 0,
            target_image_count: 3500,
            image_width: 500,
            image_height: 500,
            models: StrawberryModel::base_set(),
            pose: PoseRanges::default(),
            leaves: LeafRanges::default(),
            lighting_modes: LightingMode::ALL.to_vec(),
            camera: CameraRing::default(),
            capture: CapturePolicy::All,
            ground_half_extent: 120.0,
            ground_cells: 24,
            min_visibility: crate::labeler::DEFAULT_MIN_VISIBILITY,
            png_sidecar: false,
        }
    }
}

impl GenerationConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.target_image_count == 0 {
            return bad("target_image_count must be positive".into());
        }
        if self.image_width == 0 || self.image_height == 0 {
            return bad(format!(
                "image size {}x{}",
                self.image_width, self.image_height
            ));
        }
        if self.models.len() != MODEL_COUNT {
            return bad(format!(
                "expected {MODEL_COUNT} strawberry models, got {}",
                self.models.len()
            ));
        }
        let unripe = self
            .models
            .iter()
            .filter(|m| m.ripeness == Ripeness::Unripe)
            .count();
        if unripe != 1 {
            return bad(format!(
                "expected 4 ripe and 1 unripe model, got {unripe} unripe"
            ));
        }
        for (i, m) in self.models.iter().enumerate() {
            if m.model_id as usize != i {
                return bad(format!("model at position {i} has id {}", m.model_id));
            }
            if !m.color_is_consistent() {
                return bad(format!("model {i} colour does not match its ripeness"));
            }
            if !(m.size_scale > 0.0 && m.size_scale.is_finite()) {
                return bad(format!("model {i} size_scale {}", m.size_scale));
            }
        }
        if !self.pose.region.is_valid() {
            return bad("empty fruit region".into());
        }
        for (name, r) in [
            ("yaw", self.pose.yaw),
            ("pitch", self.pose.pitch),
            ("roll", self.pose.roll),
            ("leaf tilt", self.leaves.tilt),
        ] {
            if !r.is_valid() {
                return bad(format!("empty {name} range [{}, {}]", r.min_deg, r.max_deg));
            }
        }
        if self.leaves.min_count > self.leaves.max_count || !self.leaves.region.is_valid() {
            return bad("empty leaf range".into());
        }
        if self.lighting_modes.is_empty() {
            return bad("no lighting modes".into());
        }
        let ring = &self.camera;
        if ring.yaw_deg.is_empty() {
            return bad("camera ring has no viewpoints".into());
        }
        if !(ring.elevation_deg > -90.0 && ring.elevation_deg < 90.0) {
            return bad(format!(
                "camera elevation {} outside (-90, 90)",
                ring.elevation_deg
            ));
        }
        if !(ring.radius > 0.0 && ring.radius.is_finite()) {
            return bad(format!("camera radius {}", ring.radius));
        }
        if !(ring.vfov_deg > 0.0 && ring.vfov_deg < 180.0) {
            return bad(format!("vertical fov {}", ring.vfov_deg));
        }
        if let CapturePolicy::PerScene(k) = self.capture {
            if k == 0 || k > self.combinations() {
                return bad(format!(
                    "captures per scene {k} outside 1..={}",
                    self.combinations()
                ));
            }
        }
        if self.ground_half_extent.is_nan() || self.ground_half_extent <= 0.0 {
            return bad("ground extent must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.min_visibility) {
            return bad(format!(
                "min_visibility {} outside [0, 1]",
                self.min_visibility
            ));
        }
        Ok(())
    }

    /// Distinct (viewpoint, lighting) combinations available per scene.
    pub fn combinations(&self) -> usize {
        self.camera.yaw_deg.len() * self.lighting_modes.len()
    }

    pub fn captures_per_scene(&self) -> usize {
        match self.capture {
            CapturePolicy::All => self.combinations(),
            CapturePolicy::PerScene(k) => k,
        }
    }

    /// Scenes needed to reach the target; the last one may be truncated.
    pub fn scene_count(&self) -> usize {
        self.target_image_count.div_ceil(self.captures_per_scene())
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::parse(path, None, e.to_string()))
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("config is always representable as TOML")
    }

    /// SHA-256 of the canonical JSON form, hex encoded.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(json))
    }
}
