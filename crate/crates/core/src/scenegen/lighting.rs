use serde::{Deserialize, Serialize};

use crate::geometry::Vec3;

/// Directional light; `direction` points from the surface toward the light.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Light {
    pub direction: Vec3,
    pub intensity: f64,
}

/// The three scene lighting setups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LightingMode {
    StrongCentral,
    ModerateCentral,
    ModerateSide,
}

const STRONG: f64 = 1.0;
const MODERATE: f64 = 0.6;

impl LightingMode {
    pub const ALL: [LightingMode; 3] = [
        LightingMode::StrongCentral,
        LightingMode::ModerateCentral,
        LightingMode::ModerateSide,
    ];

    pub fn direction(self) -> Vec3 {
        match self {
            LightingMode::StrongCentral | LightingMode::ModerateCentral => Vec3::Y,
            // 45 degrees off vertical
            LightingMode::ModerateSide => Vec3::new(
                std::f64::consts::FRAC_1_SQRT_2,
                std::f64::consts::FRAC_1_SQRT_2,
                0.0,
            ),
        }
    }

    pub fn intensity(self) -> f64 {
        match self {
            LightingMode::StrongCentral => STRONG,
            LightingMode::ModerateCentral | LightingMode::ModerateSide => MODERATE,
        }
    }

    pub fn light(self) -> Light {
        Light {
            direction: self.direction(),
            intensity: self.intensity(),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}
