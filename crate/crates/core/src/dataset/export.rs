use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{load_rgb, DatasetEntry, DatasetManifest, Provenance, CLASS_NAMES, SINGLE_CLASS_NAME};
use crate::labeler::Annotation;
use crate::par::{map_slice, Exec};
use crate::render::write_ppm;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelFormat {
    Yolo,
    Coco,
}

impl LabelFormat {
    pub fn name(self) -> &'static str {
        match self {
            LabelFormat::Yolo => "yolo",
            LabelFormat::Coco => "coco",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageFormat {
    Ppm,
    Png,
}

impl ImageFormat {
    fn extension(self) -> &'static str {
        match self {
            ImageFormat::Ppm => "ppm",
            ImageFormat::Png => "png",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resample {
    Nearest,
    Bilinear,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExportOptions {
    pub format: LabelFormat,
    /// Output images are `target_size x target_size`.
    pub target_size: u32,
    /// Merge ripe and unripe into one class 0.
    pub single_class: bool,
    pub image_format: ImageFormat,
    pub resample: Resample,
    pub exec: Exec,
}

impl Default for ExportOptions {
    fn default() -> Self {
        ExportOptions {
            format: LabelFormat::Yolo,
            target_size: 416,
            single_class: false,
            image_format: ImageFormat::Ppm,
            resample: Resample::Nearest,
            exec: Exec::Parallel,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExportReport {
    pub images_written: usize,
    pub labels_written: usize,
    /// Labels whose rescaled box fell below one pixel in width or height.
    pub labels_dropped: usize,
    pub failures: Vec<(PathBuf, String)>,
}

impl ExportReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Nearest-neighbour resample; destination pixel centres map back onto the
/// source grid.
pub fn resize_nearest(src: &[u8], sw: u32, sh: u32, dw: u32, dh: u32) -> Vec<u8> {
    let mut out = Vec::with_capacity(3 * dw as usize * dh as usize);
    let xs: Vec<usize> = (0..dw)
        .map(|x| ((u64::from(x) * 2 + 1) * u64::from(sw) / (2 * u64::from(dw))) as usize)
        .collect();
    for y in 0..dh {
        let sy = ((u64::from(y) * 2 + 1) * u64::from(sh) / (2 * u64::from(dh))) as usize;
        let row = sy * sw as usize;
        for &sx in &xs {
            let i = 3 * (row + sx);
            out.extend_from_slice(&src[i..i + 3]);
        }
    }
    out
}

pub fn resize_bilinear(src: &[u8], sw: u32, sh: u32, dw: u32, dh: u32) -> Vec<u8> {
    let mut out = Vec::with_capacity(3 * dw as usize * dh as usize);
    let sample = |x: usize, y: usize, c: usize| f64::from(src[3 * (y * sw as usize + x) + c]);
    for y in 0..dh {
        let fy = ((f64::from(y) + 0.5) * f64::from(sh) / f64::from(dh) - 0.5)
            .clamp(0.0, f64::from(sh - 1));
        let (y0, ty) = (fy.floor() as usize, fy.fract());
        let y1 = (y0 + 1).min(sh as usize - 1);
        for x in 0..dw {
            let fx = ((f64::from(x) + 0.5) * f64::from(sw) / f64::from(dw) - 0.5)
                .clamp(0.0, f64::from(sw - 1));
            let (x0, tx) = (fx.floor() as usize, fx.fract());
            let x1 = (x0 + 1).min(sw as usize - 1);
            for c in 0..3 {
                let top = sample(x0, y0, c) * (1.0 - tx) + sample(x1, y0, c) * tx;
                let bot = sample(x0, y1, c) * (1.0 - tx) + sample(x1, y1, c) * tx;
                out.push((top * (1.0 - ty) + bot * ty).round() as u8);
            }
        }
    }
    out
}

struct Exported {
    entry: DatasetEntry,
    dropped: usize,
}

fn export_entry(
    manifest: &DatasetManifest,
    entry: &DatasetEntry,
    opts: &ExportOptions,
    out_dir: &Path,
) -> Result<Exported> {
    let src = manifest.resolve(entry);
    let (sw, sh, rgb) = load_rgb(&src)?;
    if (sw, sh) != (entry.width, entry.height) {
        return Err(Error::InconsistentScene(format!(
            "{}: image is {sw}x{sh} but manifest says {}x{}",
            src.display(),
            entry.width,
            entry.height
        )));
    }
    let t = opts.target_size;
    let resized = if (sw, sh) == (t, t) {
        rgb
    } else {
        match opts.resample {
            Resample::Nearest => resize_nearest(&rgb, sw, sh, t, t),
            Resample::Bilinear => resize_bilinear(&rgb, sw, sh, t, t),
        }
    };
    let rel = PathBuf::from("images").join(format!(
        "{}.{}",
        entry.image_id,
        opts.image_format.extension()
    ));
    let dst = out_dir.join(&rel);
    match opts.image_format {
        ImageFormat::Ppm => write_ppm(&dst, t, t, &resized)?,
        ImageFormat::Png => {
            image::save_buffer(&dst, &resized, t, t, image::ExtendedColorType::Rgb8).map_err(
                |e| Error::Image {
                    path: dst.clone(),
                    source: e,
                },
            )?
        }
    }

    let (sx, sy) = (f64::from(t) / f64::from(sw), f64::from(t) / f64::from(sh));
    let mut labels = Vec::with_capacity(entry.annotation.labels.len());
    let mut dropped = 0;
    for label in &entry.annotation.labels {
        let scaled = label.bbox.scaled(sx, sy).clamp_to(t, t);
        match scaled {
            Some(b) if b.width() >= 1.0 && b.height() >= 1.0 => {
                let mut l = label.clone();
                l.bbox = b;
                if opts.single_class {
                    l.class_id = 0;
                }
                labels.push(l);
            }
            _ => dropped += 1,
        }
    }
    let annotation = Annotation {
        image_id: entry.image_id.clone(),
        width: t,
        height: t,
        labels,
    };
    if opts.format == LabelFormat::Yolo {
        let path = out_dir
            .join("labels")
            .join(format!("{}.txt", entry.image_id));
        fs::write(&path, yolo_lines(&annotation)).map_err(|e| Error::io(&path, e))?;
    }
    Ok(Exported {
        entry: DatasetEntry {
            image_path: rel,
            width: t,
            height: t,
            annotation,
            ..entry.clone()
        },
        dropped,
    })
}

/// One `class cx cy w h` line per label, normalized, six decimals.
pub(crate) fn yolo_lines(ann: &Annotation) -> String {
    let (w, h) = (f64::from(ann.width), f64::from(ann.height));
    let mut out = String::new();
    for l in &ann.labels {
        let (cx, cy) = l.bbox.center();
        out.push_str(&format!(
            "{} {:.6} {:.6} {:.6} {:.6}\n",
            l.class_id,
            cx / w,
            cy / h,
            l.bbox.width() / w,
            l.bbox.height() / h
        ));
    }
    out
}

#[derive(Serialize)]
struct CocoOut {
    images: Vec<CocoImageOut>,
    annotations: Vec<CocoAnnOut>,
    categories: Vec<CocoCatOut>,
}

#[derive(Serialize)]
struct CocoImageOut {
    id: usize,
    file_name: String,
    width: u32,
    height: u32,
}

#[derive(Serialize)]
struct CocoAnnOut {
    id: usize,
    image_id: usize,
    category_id: u8,
    bbox: [f64; 4],
    area: f64,
    iscrowd: u8,
}

#[derive(Serialize)]
struct CocoCatOut {
    id: u8,
    name: &'static str,
}

fn coco_json(entries: &[DatasetEntry], single_class: bool) -> String {
    let mut images = Vec::with_capacity(entries.len());
    let mut annotations = Vec::new();
    for (i, e) in entries.iter().enumerate() {
        images.push(CocoImageOut {
            id: i + 1,
            file_name: e
                .image_path
                .file_name()
                .map(|f| f.to_string_lossy().into_owned())
                .unwrap_or_default(),
            width: e.width,
            height: e.height,
        });
        for l in &e.annotation.labels {
            annotations.push(CocoAnnOut {
                id: annotations.len() + 1,
                image_id: i + 1,
                category_id: l.class_id,
                bbox: [l.bbox.x_min, l.bbox.y_min, l.bbox.width(), l.bbox.height()],
                area: l.bbox.area(),
                iscrowd: 0,
            });
        }
    }
    let categories = if single_class {
        vec![CocoCatOut {
            id: 0,
            name: SINGLE_CLASS_NAME,
        }]
    } else {
        CLASS_NAMES
            .iter()
            .enumerate()
            .map(|(id, &name)| CocoCatOut { id: id as u8, name })
            .collect()
    };
    serde_json::to_string_pretty(&CocoOut {
        images,
        annotations,
        categories,
    })
    .expect("coco output serializes")
}

/// Write `manifest` as a detector-ready directory: `images/`, `labels/` and
/// a rescaled `manifest.json`.
///
/// Per-image failures are collected in the report; only failing to create
/// the output layout or write the manifest is an error.
pub fn export(
    manifest: &DatasetManifest,
    opts: &ExportOptions,
    out_dir: &Path,
) -> Result<ExportReport> {
    if opts.target_size == 0 {
        return Err(Error::InvalidSettings(
            "target size must be positive".into(),
        ));
    }
    for sub in ["images", "labels"] {
        let d = out_dir.join(sub);
        fs::create_dir_all(&d).map_err(|e| Error::io(&d, e))?;
    }
    let results = map_slice(opts.exec, &manifest.entries, |e| {
        export_entry(manifest, e, opts, out_dir)
    });

    let mut report = ExportReport::default();
    let mut entries = Vec::with_capacity(results.len());
    for (entry, result) in manifest.entries.iter().zip(results) {
        match result {
            Ok(done) => {
                report.images_written += 1;
                report.labels_written += done.entry.annotation.labels.len();
                report.labels_dropped += done.dropped;
                entries.push(done.entry);
            }
            Err(e) => report
                .failures
                .push((manifest.resolve(entry), e.to_string())),
        }
    }
    if opts.format == LabelFormat::Coco {
        let path = out_dir.join("labels").join("annotations.json");
        fs::write(&path, coco_json(&entries, opts.single_class))
            .map_err(|e| Error::io(&path, e))?;
    }
    let out = DatasetManifest::new(
        Provenance::Exported {
            target_size: opts.target_size,
            single_class: opts.single_class,
            format: opts.format.name().into(),
            from: Box::new(manifest.provenance.clone()),
        },
        entries,
    );
    out.save(&out_dir.join("manifest.json"))?;
    Ok(report)
}
