//! Dataset manifests: import of real corpora, mixed real/simulated presets
//! with shuffle-split repetitions, and export to detector-ready layouts.

mod export;
mod import;
mod manifest;
mod mix;

pub use export::{
    export, resize_bilinear, resize_nearest, ExportOptions, ExportReport, ImageFormat, LabelFormat,
    Resample,
};
pub use import::{import_real, ImportReport, SkippedImage};
pub use manifest::{load_rgb, DatasetEntry, DatasetManifest, Provenance, SceneRecord, Source};
pub use mix::{mix, MixSpec, Preset, PresetCounts, Split, SplitSpec};

/// Class names used in exports.
pub const CLASS_NAMES: [&str; 2] = ["strawberry_ripe", "strawberry_unripe"];
pub const SINGLE_CLASS_NAME: &str = "strawberry";
