use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::{DatasetEntry, DatasetManifest, LabelFormat, Provenance, Source};
use crate::geometry::{BBox2D, BACKGROUND_CLASS};
use crate::labeler::{Annotation, InstanceLabel};
use crate::{Error, Result};

const IMAGE_EXTENSIONS: [&str; 6] = ["jpg", "jpeg", "png", "ppm", "bmp", "webp"];

#[derive(Debug, Clone, PartialEq)]
pub struct SkippedImage {
    pub path: PathBuf,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ImportReport {
    pub imported: usize,
    pub skipped: Vec<SkippedImage>,
}

/// Import an annotated real-image corpus.
///
/// YOLO corpora use `root/images/*` with matching `root/labels/<stem>.txt`;
/// images without a label file are listed in the report rather than
/// imported. COCO corpora use `root/labels/annotations.json` or
/// `root/annotations.json`, with `file_name` resolved under `root/images/`.
pub fn import_real(root: &Path, format: LabelFormat) -> Result<(DatasetManifest, ImportReport)> {
    let (entries, report) = match format {
        LabelFormat::Yolo => import_yolo(root)?,
        LabelFormat::Coco => import_coco(root)?,
    };
    let manifest = DatasetManifest::new(
        Provenance::Imported {
            root: root.to_path_buf(),
            format: format.name().into(),
        },
        entries,
    );
    manifest.validate()?;
    Ok((manifest, report))
}

fn list_images(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase);
        if path.is_file() && ext.is_some_and(|e| IMAGE_EXTENSIONS.contains(&e.as_str())) {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn dimensions(path: &Path) -> Result<(u32, u32)> {
    image::image_dimensions(path).map_err(|e| Error::Image {
        path: path.to_path_buf(),
        source: e,
    })
}

fn real_label(index: usize, class_id: u8, bbox: BBox2D) -> InstanceLabel {
    InstanceLabel {
        instance_id: index as u32,
        class_id,
        bbox,
        visibility: 1.0,
        pixel_count: (bbox.area().round() as u64).max(1),
    }
}

/// Parse one YOLO label file for an image of the given size.
pub(crate) fn parse_yolo_labels(
    path: &Path,
    text: &str,
    width: u32,
    height: u32,
) -> Result<Vec<InstanceLabel>> {
    let (w, h) = (f64::from(width), f64::from(height));
    let mut labels = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(Error::parse(
                path,
                Some(line_no),
                format!("expected 5 fields, found {}", fields.len()),
            ));
        }
        let class_id: u8 = fields[0]
            .parse()
            .ok()
            .filter(|&c| c != BACKGROUND_CLASS)
            .ok_or_else(|| {
                Error::parse(path, Some(line_no), format!("bad class id {:?}", fields[0]))
            })?;
        let mut nums = [0.0; 4];
        for (slot, field) in nums.iter_mut().zip(&fields[1..]) {
            *slot = field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| {
                    Error::parse(path, Some(line_no), format!("bad number {field:?}"))
                })?;
        }
        let [cx, cy, bw, bh] = nums;
        let x_min = ((cx - 0.5 * bw) * w).clamp(0.0, w);
        let x_max = ((cx + 0.5 * bw) * w).clamp(0.0, w);
        let y_min = ((cy - 0.5 * bh) * h).clamp(0.0, h);
        let y_max = ((cy + 0.5 * bh) * h).clamp(0.0, h);
        let bbox = BBox2D::new(x_min, y_min, x_max, y_max)
            .map_err(|e| Error::parse(path, Some(line_no), format!("degenerate box: {e}")))?;
        labels.push(real_label(labels.len(), class_id, bbox));
    }
    Ok(labels)
}

fn import_yolo(root: &Path) -> Result<(Vec<DatasetEntry>, ImportReport)> {
    let images_dir = root.join("images");
    let labels_dir = root.join("labels");
    let mut entries = Vec::new();
    let mut report = ImportReport::default();
    for image_path in list_images(&images_dir)? {
        let id = stem(&image_path);
        let label_path = labels_dir.join(format!("{id}.txt"));
        if !label_path.is_file() {
            report.skipped.push(SkippedImage {
                path: image_path,
                reason: format!("missing annotation {}", label_path.display()),
            });
            continue;
        }
        let (width, height) = dimensions(&image_path)?;
        let text = fs::read_to_string(&label_path).map_err(|e| Error::io(&label_path, e))?;
        let labels = parse_yolo_labels(&label_path, &text, width, height)?;
        entries.push(DatasetEntry {
            image_id: id.clone(),
            image_path: image_path.canonicalize().unwrap_or(image_path),
            source: Source::Real,
            width,
            height,
            annotation: Annotation {
                image_id: id,
                width,
                height,
                labels,
            },
            scene: None,
        });
    }
    report.imported = entries.len();
    Ok((entries, report))
}

#[derive(Debug, Deserialize)]
struct CocoFile {
    images: Vec<CocoImage>,
    #[serde(default)]
    annotations: Vec<CocoAnnotation>,
    #[serde(default)]
    categories: Vec<CocoCategory>,
}

#[derive(Debug, Deserialize)]
struct CocoImage {
    id: u64,
    file_name: String,
    width: u32,
    height: u32,
}

#[derive(Debug, Deserialize)]
struct CocoAnnotation {
    image_id: u64,
    category_id: u64,
    bbox: [f64; 4],
}

#[derive(Debug, Deserialize)]
struct CocoCategory {
    id: u64,
}

fn import_coco(root: &Path) -> Result<(Vec<DatasetEntry>, ImportReport)> {
    let json_path = [
        root.join("labels/annotations.json"),
        root.join("annotations.json"),
    ]
    .into_iter()
    .find(|p| p.is_file())
    .ok_or_else(|| Error::parse(root, None, "no labels/annotations.json or annotations.json"))?;
    let text = fs::read_to_string(&json_path).map_err(|e| Error::io(&json_path, e))?;
    let coco: CocoFile = serde_json::from_str(&text)
        .map_err(|e| Error::parse(&json_path, Some(e.line()), e.to_string()))?;

    // categories map to classes by ascending id
    let mut cat_ids: Vec<u64> = coco.categories.iter().map(|c| c.id).collect();
    cat_ids.sort_unstable();
    cat_ids.dedup();
    let class_of = |cat: u64| -> Option<u8> {
        if cat_ids.is_empty() {
            u8::try_from(cat).ok()
        } else {
            cat_ids
                .iter()
                .position(|&c| c == cat)
                .and_then(|p| u8::try_from(p).ok())
        }
    };

    let mut by_image: BTreeMap<u64, Vec<&CocoAnnotation>> = BTreeMap::new();
    for a in &coco.annotations {
        by_image.entry(a.image_id).or_default().push(a);
    }
    let known: BTreeMap<u64, &CocoImage> = coco.images.iter().map(|i| (i.id, i)).collect();
    if let Some(orphan) = by_image.keys().find(|id| !known.contains_key(id)) {
        return Err(Error::parse(
            &json_path,
            None,
            format!("annotation references unknown image id {orphan}"),
        ));
    }

    let mut entries = Vec::new();
    let mut report = ImportReport::default();
    let images_dir = root.join("images");
    for img in &coco.images {
        let image_path = [images_dir.join(&img.file_name), root.join(&img.file_name)]
            .into_iter()
            .find(|p| p.is_file());
        let Some(image_path) = image_path else {
            report.skipped.push(SkippedImage {
                path: images_dir.join(&img.file_name),
                reason: "image file not found".into(),
            });
            continue;
        };
        let id = stem(Path::new(&img.file_name));
        let mut labels = Vec::new();
        for a in by_image.get(&img.id).into_iter().flatten() {
            let [x, y, w, h] = a.bbox;
            let class_id = class_of(a.category_id)
                .filter(|&c| c != BACKGROUND_CLASS)
                .ok_or_else(|| {
                    Error::parse(
                        &json_path,
                        None,
                        format!("unmapped category {}", a.category_id),
                    )
                })?;
            let bbox = BBox2D::new(x, y, x + w, y + h).map_err(|e| {
                Error::parse(&json_path, None, format!("image {}: {e}", img.file_name))
            })?;
            labels.push(real_label(labels.len(), class_id, bbox));
        }
        entries.push(DatasetEntry {
            image_id: id.clone(),
            image_path: image_path.canonicalize().unwrap_or(image_path),
            source: Source::Real,
            width: img.width,
            height: img.height,
            annotation: Annotation {
                image_id: id,
                width: img.width,
                height: img.height,
                labels,
            },
            scene: None,
        });
    }
    report.imported = entries.len();
    Ok((entries, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::render::write_ppm;

    #[test]
    fn yolo_line_to_pixels() {
        let labels =
            parse_yolo_labels(Path::new("a.txt"), "0 0.5 0.5 0.1 0.2\n", 1280, 720).unwrap();
        assert_eq!(labels.len(), 1);
        let b = labels[0].bbox;
        assert!((b.x_min - 576.0).abs() < 1e-9);
        assert!((b.y_min - 288.0).abs() < 1e-9);
        assert!((b.x_max - 704.0).abs() < 1e-9);
        assert!((b.y_max - 432.0).abs() < 1e-9);
    }

    #[test]
    fn empty_file_is_negative_image() {
        assert!(parse_yolo_labels(Path::new("a.txt"), "", 10, 10)
            .unwrap()
            .is_empty());
        assert!(parse_yolo_labels(Path::new("a.txt"), "\n  \n", 10, 10)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn degenerate_box_names_the_line() {
        let err = parse_yolo_labels(
            Path::new("lab/x.txt"),
            "0 0.5 0.5 0.1 0.1\n0 0.5 0.5 0.0 0.2\n",
            100,
            100,
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("lab/x.txt:2"), "{msg}");
    }

    #[test]
    fn malformed_lines_rejected() {
        for bad in [
            "0 0.5 0.5 0.1",
            "x 0.5 0.5 0.1 0.1",
            "0 0.5 nan 0.1 0.1",
            "255 0.5 0.5 0.1 0.1",
        ] {
            assert!(matches!(
                parse_yolo_labels(Path::new("a.txt"), bad, 10, 10),
                Err(Error::Parse { line: Some(1), .. })
            ));
        }
    }

    #[test]
    fn yolo_directory_with_missing_label() {
        let dir = tempfile::tempdir().unwrap();
        fs::create_dir_all(dir.path().join("images")).unwrap();
        fs::create_dir_all(dir.path().join("labels")).unwrap();
        for id in ["a", "b", "c"] {
            write_ppm(
                &dir.path().join(format!("images/{id}.ppm")),
                20,
                10,
                &vec![0; 600],
            )
            .unwrap();
        }
        fs::write(dir.path().join("labels/a.txt"), "0 0.5 0.5 0.5 0.5\n").unwrap();
        fs::write(dir.path().join("labels/b.txt"), "").unwrap();
        let (m, report) = import_real(dir.path(), LabelFormat::Yolo).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(report.imported, 2);
        assert_eq!(report.skipped.len(), 1);
        assert!(report.skipped[0].path.ends_with("images/c.ppm"));
        assert_eq!(m.entries[0].width, 20);
        assert_eq!(m.entries[0].annotation.labels.len(), 1);
        assert!(m.entries[1].annotation.labels.is_empty());
        assert!(m.entries.iter().all(|e| e.source == Source::Real));
    }

    #[test]
    fn coco_directory() {
        let dir = tempfile::tempdir().unwrap();
        fs::create_dir_all(dir.path().join("images")).unwrap();
        write_ppm(&dir.path().join("images/f1.ppm"), 4, 4, &[0; 48]).unwrap();
        fs::write(
            dir.path().join("annotations.json"),
            r#"{"images":[{"id":7,"file_name":"f1.ppm","width":4,"height":4}],
                "annotations":[{"id":1,"image_id":7,"category_id":3,"bbox":[1,1,2,2]}],
                "categories":[{"id":3,"name":"strawberry"}]}"#,
        )
        .unwrap();
        let (m, _) = import_real(dir.path(), LabelFormat::Coco).unwrap();
        assert_eq!(m.entries[0].image_id, "f1");
        let l = &m.entries[0].annotation.labels[0];
        assert_eq!(l.class_id, 0);
        assert_eq!(l.bbox, BBox2D::new(1.0, 1.0, 3.0, 3.0).unwrap());
    }
}
