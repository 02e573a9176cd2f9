use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::labeler::Annotation;
use crate::render::read_ppm;
use crate::scenegen::{LightingMode, SceneSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Real,
    Sim,
}

/// Provenance of a simulated image: the scene plus which capture it is.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneRecord {
    pub scene: SceneSpec,
    pub capture_index: usize,
    pub camera_index: usize,
    pub lighting: LightingMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetEntry {
    pub image_id: String,
    /// Relative paths resolve against the manifest's directory.
    pub image_path: PathBuf,
    pub source: Source,
    pub width: u32,
    pub height: u32,
    pub annotation: Annotation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scene: Option<SceneRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Provenance {
    Generated {
        config_hash: String,
        master_seed: u64,
        tool_version: String,
    },
    Imported {
        root: PathBuf,
        format: String,
    },
    Mixed {
        preset: String,
        mix_seed: u64,
        split_seed: u64,
        repetition: usize,
        role: String,
        real: Box<Provenance>,
        sim: Box<Provenance>,
    },
    Exported {
        target_size: u32,
        single_class: bool,
        format: String,
        from: Box<Provenance>,
    },
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub provenance: Provenance,
    pub entries: Vec<DatasetEntry>,
    /// Directory relative image paths resolve against; not serialized.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl DatasetManifest {
    pub fn new(provenance: Provenance, entries: Vec<DatasetEntry>) -> Self {
        DatasetManifest {
            provenance,
            entries,
            base_dir: PathBuf::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        let dups: Vec<String> = self
            .entries
            .iter()
            .filter(|e| !seen.insert(e.image_id.as_str()))
            .map(|e| e.image_id.clone())
            .collect();
        if !dups.is_empty() {
            return Err(Error::InconsistentScene(format!(
                "duplicate image ids: {}",
                dups.join(", ")
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn count_source(&self, source: Source) -> usize {
        self.entries.iter().filter(|e| e.source == source).count()
    }

    pub fn resolve(&self, entry: &DatasetEntry) -> PathBuf {
        if entry.image_path.is_absolute() {
            entry.image_path.clone()
        } else {
            self.base_dir.join(&entry.image_path)
        }
    }

    /// Copy with every image path made absolute (or base-relative when the
    /// base is itself relative), so entries can move between manifests.
    pub fn with_resolved_paths(&self) -> DatasetManifest {
        let entries = self
            .entries
            .iter()
            .map(|e| DatasetEntry {
                image_path: self.resolve(e),
                ..e.clone()
            })
            .collect();
        DatasetManifest {
            provenance: self.provenance.clone(),
            entries,
            base_dir: PathBuf::new(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut m: DatasetManifest = serde_json::from_str(&text)
            .map_err(|e| Error::parse(path, Some(e.line()), e.to_string()))?;
        m.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        m.validate()?;
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = self.to_json();
        text.push('\n');
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

/// Decode any supported image file to 8-bit RGB. PPM goes through the
/// crate's own reader so simulated images round-trip exactly.
pub fn load_rgb(path: &Path) -> Result<(u32, u32, Vec<u8>)> {
    let is_ppm = path
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("ppm"));
    if is_ppm {
        let img = read_ppm(path)?;
        return Ok((img.width, img.height, img.rgb));
    }
    let img = image::open(path)
        .map_err(|e| Error::Image {
            path: path.to_path_buf(),
            source: e,
        })?
        .to_rgb8();
    Ok((img.width(), img.height(), img.into_raw()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(id: &str) -> DatasetEntry {
        DatasetEntry {
            image_id: id.into(),
            image_path: PathBuf::from(format!("images/{id}.ppm")),
            source: Source::Real,
            width: 10,
            height: 10,
            annotation: Annotation::empty(id, 10, 10),
            scene: None,
        }
    }

    #[test]
    fn duplicate_ids_rejected() {
        let m = DatasetManifest::new(
            Provenance::Unknown,
            vec![entry("a"), entry("b"), entry("a")],
        );
        assert!(m.validate().is_err());
    }

    #[test]
    fn save_load_resolves_relative_paths() {
        let dir = tempfile::tempdir().unwrap();
        let m = DatasetManifest::new(Provenance::Unknown, vec![entry("a")]);
        let path = dir.path().join("manifest.json");
        m.save(&path).unwrap();
        let back = DatasetManifest::load(&path).unwrap();
        assert_eq!(back.entries, m.entries);
        assert_eq!(
            back.resolve(&back.entries[0]),
            dir.path().join("images/a.ppm")
        );
    }
}
