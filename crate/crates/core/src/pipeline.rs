//! Simulated corpus generation: sample scenes, render every capture, label
//! the renders and write images plus a manifest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dataset::{DatasetEntry, DatasetManifest, Provenance, SceneRecord, Source};
use crate::geometry::TriMesh;
use crate::labeler::{extract_labels, Annotation, InstanceInfo};
use crate::par::{map_indices, Exec};
use crate::render::{encode_ppm, rasterize, write_png, FrameBuffer, RenderSettings};
use crate::scenegen::{
    capture_plan, sample_scene, scene_meshes, Capture, GenerationConfig, SceneSpec,
};
use crate::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const PROVENANCE_FILE: &str = "provenance.json";
pub const ANNOTATIONS_FILE: &str = "annotations.json";
pub const CONFIG_FILE: &str = "config.toml";
pub const IMAGES_DIR: &str = "images";

pub fn image_id(scene_index: u64, capture_index: usize) -> String {
    format!("sim_{scene_index:05}_{capture_index:02}")
}

/// Render one capture and label it. Fruit visibility comes from a solo render
/// of each fruit that shows up in the full scene.
pub fn render_capture(
    config: &GenerationConfig,
    meshes: &[TriMesh],
    capture: &Capture,
    image_id: &str,
) -> Result<(FrameBuffer, Annotation)> {
    let settings = RenderSettings::with_size(config.image_width, config.image_height);
    let fb = rasterize(meshes, &capture.camera, capture.lighting, &settings)?;
    let mut instances = BTreeMap::new();
    for mesh in meshes {
        let solo_pixels = if mesh.is_fruit() && fb.count_instance(mesh.instance_id) > 0 {
            let solo = rasterize(
                std::slice::from_ref(mesh),
                &capture.camera,
                capture.lighting,
                &settings,
            )?;
            Some(solo.count_instance(mesh.instance_id) as u64)
        } else {
            None
        };
        instances.insert(
            mesh.instance_id,
            InstanceInfo {
                class_id: mesh.class_id,
                solo_pixels,
            },
        );
    }
    let ann = extract_labels(image_id, &fb, &instances, config.min_visibility)?;
    Ok((fb, ann))
}

/// Manifest entries plus `(image_id, message)` for every failed sink call.
pub type Generated = (Vec<DatasetEntry>, Vec<(String, String)>);

/// One rendered image handed to a sink.
pub struct Rendered<'a> {
    pub scene: &'a SceneSpec,
    pub capture_index: usize,
    pub capture: &'a Capture,
    pub image_id: &'a str,
    pub framebuffer: &'a FrameBuffer,
    pub annotation: &'a Annotation,
}

/// Per-file outcome of a generation run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GenerateReport {
    pub images_written: usize,
    pub failures: Vec<(String, String)>,
}

impl GenerateReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn entry_for(config: &GenerationConfig, r: &Rendered<'_>) -> DatasetEntry {
    DatasetEntry {
        image_id: r.image_id.to_string(),
        image_path: PathBuf::from(IMAGES_DIR).join(format!("{}.ppm", r.image_id)),
        source: Source::Sim,
        width: config.image_width,
        height: config.image_height,
        annotation: r.annotation.clone(),
        scene: Some(SceneRecord {
            scene: r.scene.clone(),
            capture_index: r.capture_index,
            camera_index: r.capture.camera_index,
            lighting: r.capture.lighting,
        }),
    }
}

/// Render the configured corpus, passing every image to `sink` in job order
/// per scene. Returns the manifest entries and the sink failures, both in
/// image id order regardless of `exec`.
pub fn generate_with<F>(config: &GenerationConfig, exec: Exec, sink: F) -> Result<Generated>
where
    F: Fn(&Rendered<'_>) -> std::result::Result<(), String> + Sync + Send,
{
    config.validate()?;
    let per_scene = config.captures_per_scene();
    let target = config.target_image_count;
    let scenes = config.scene_count();
    let results = map_indices(
        exec,
        scenes,
        |s| -> Result<Vec<(DatasetEntry, Option<String>)>> {
            let spec = sample_scene(config, s as u64)?;
            let plan = capture_plan(config, &spec)?;
            let wanted = per_scene.min(target - s * per_scene);
            let meshes = scene_meshes(config, &spec);
            let mut out = Vec::with_capacity(wanted);
            for (ci, capture) in plan.iter().take(wanted).enumerate() {
                let id = image_id(spec.scene_index, ci);
                let (fb, ann) = render_capture(config, &meshes, capture, &id)?;
                let rendered = Rendered {
                    scene: &spec,
                    capture_index: ci,
                    capture,
                    image_id: &id,
                    framebuffer: &fb,
                    annotation: &ann,
                };
                let failure = sink(&rendered).err();
                out.push((entry_for(config, &rendered), failure));
            }
            Ok(out)
        },
    );
    let mut entries = Vec::with_capacity(target);
    let mut failures = Vec::new();
    for scene in results {
        for (entry, failure) in scene? {
            if let Some(msg) = failure {
                failures.push((entry.image_id.clone(), msg));
            }
            entries.push(entry);
        }
    }
    Ok((entries, failures))
}

pub fn provenance(config: &GenerationConfig) -> Provenance {
    Provenance::Generated {
        config_hash: config.hash(),
        master_seed: config.master_seed,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
    }
}

/// Generate labels without writing any images.
pub fn generate_in_memory(config: &GenerationConfig, exec: Exec) -> Result<DatasetManifest> {
    let (entries, _) = generate_with(config, exec, |_| Ok(()))?;
    Ok(DatasetManifest::new(provenance(config), entries))
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Generate the corpus into `out_dir`: `images/*.ppm` (plus `.png` when
/// configured), `manifest.json`, `annotations.json`, `provenance.json` and
/// the resolved `config.toml`. The manifest lists every image; failed
/// writes are reported rather than aborting the run.
pub fn generate(
    config: &GenerationConfig,
    out_dir: &Path,
    exec: Exec,
) -> Result<(DatasetManifest, GenerateReport)> {
    config.validate()?;
    let images = out_dir.join(IMAGES_DIR);
    std::fs::create_dir_all(&images).map_err(|e| Error::io(&images, e))?;
    let (entries, failures) = generate_with(config, exec, |r| {
        let fb = r.framebuffer;
        let path = images.join(format!("{}.ppm", r.image_id));
        write_bytes(&path, &encode_ppm(fb.width(), fb.height(), &fb.rgb))
            .map_err(|e| e.to_string())?;
        if config.png_sidecar {
            write_png(fb, &images.join(format!("{}.png", r.image_id)))
                .map_err(|e| e.to_string())?;
        }
        Ok(())
    })?;
    let report = GenerateReport {
        images_written: entries.len() - failures.len(),
        failures,
    };
    let mut manifest = DatasetManifest::new(provenance(config), entries);
    manifest.base_dir = out_dir.to_path_buf();
    manifest.save(&out_dir.join(MANIFEST_FILE))?;
    let annotations: Vec<&Annotation> = manifest.entries.iter().map(|e| &e.annotation).collect();
    write_bytes(
        &out_dir.join(ANNOTATIONS_FILE),
        serde_json::to_string_pretty(&annotations)
            .expect("annotations serialize")
            .as_bytes(),
    )?;
    let record = serde_json::json!({
        "provenance": manifest.provenance,
        "image_count": manifest.len(),
        "report": report,
    });
    write_bytes(
        &out_dir.join(PROVENANCE_FILE),
        serde_json::to_string_pretty(&record)
            .expect("provenance serializes")
            .as_bytes(),
    )?;
    write_bytes(
        &out_dir.join(CONFIG_FILE),
        config.to_toml_string().as_bytes(),
    )?;
    Ok((manifest, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenegen::CapturePolicy;

    fn small(n: usize) -> GenerationConfig {
        GenerationConfig {
            target_image_count: n,
            image_width: 96,
            image_height: 96,
            capture: CapturePolicy::PerScene(2),
            ..GenerationConfig::default()
        }
    }

    #[test]
    fn count_contract() {
        let m = generate_in_memory(&small(5), Exec::Sequential).unwrap();
        assert_eq!(m.len(), 5);
        let ids: Vec<&str> = m.entries.iter().map(|e| e.image_id.as_str()).collect();
        assert_eq!(
            ids,
            [
                "sim_00000_00",
                "sim_00000_01",
                "sim_00001_00",
                "sim_00001_01",
                "sim_00002_00"
            ]
        );
        m.validate().unwrap();
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let c = small(6);
        assert_eq!(
            generate_in_memory(&c, Exec::Sequential).unwrap().to_json(),
            generate_in_memory(&c, Exec::Parallel).unwrap().to_json()
        );
    }

    #[test]
    fn writes_layout() {
        let dir = tempfile::tempdir().unwrap();
        let (m, report) = generate(&small(3), dir.path(), Exec::Parallel).unwrap();
        assert!(report.is_ok());
        assert_eq!(report.images_written, 3);
        for f in [
            MANIFEST_FILE,
            ANNOTATIONS_FILE,
            PROVENANCE_FILE,
            CONFIG_FILE,
        ] {
            assert!(dir.path().join(f).is_file(), "{f}");
        }
        for e in &m.entries {
            let img = crate::render::read_ppm(&m.resolve(e)).unwrap();
            assert_eq!((img.width, img.height), (96, 96));
        }
        let loaded = DatasetManifest::load(&dir.path().join(MANIFEST_FILE)).unwrap();
        assert_eq!(loaded.to_json(), m.to_json());
    }
}
