use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::DatasetManifest;
use crate::geometry::BBox2D;
use crate::{Error, Result};

/// One detector output box, in pixels of the evaluated (exported) image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub image_id: String,
    pub class_id: u8,
    pub confidence: f64,
    pub bbox: BBox2D,
}

/// Parse `image_id class confidence x_min y_min x_max y_max` lines. Blank
/// lines and `#` comments are skipped.
pub fn parse_prediction_lines(path: &Path, text: &str) -> Result<Vec<Detection>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = Some(n + 1);
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 7 {
            return Err(Error::parse(
                path,
                line_no,
                format!("expected 7 fields, found {}", f.len()),
            ));
        }
        let class_id = f[1]
            .parse::<u8>()
            .map_err(|_| Error::parse(path, line_no, format!("bad class {:?}", f[1])))?;
        let mut nums = [0.0f64; 5];
        for (slot, s) in nums.iter_mut().zip(&f[2..]) {
            *slot = s
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| Error::parse(path, line_no, format!("bad number {s:?}")))?;
        }
        let [confidence, x0, y0, x1, y1] = nums;
        if !(0.0..=1.0).contains(&confidence) {
            return Err(Error::parse(
                path,
                line_no,
                format!("confidence {confidence} outside [0, 1]"),
            ));
        }
        let bbox =
            BBox2D::new(x0, y0, x1, y1).map_err(|e| Error::parse(path, line_no, e.to_string()))?;
        out.push(Detection {
            image_id: f[0].to_string(),
            class_id,
            confidence,
            bbox,
        });
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CocoImageRef {
    Index(u64),
    Name(String),
}

#[derive(Deserialize)]
struct CocoResult {
    image_id: CocoImageRef,
    category_id: u8,
    bbox: [f64; 4],
    score: f64,
}

/// Parse a COCO results array. Numeric image ids are 1-based positions in
/// `manifest`, matching the numbering used by the COCO export.
pub fn parse_coco_results(
    path: &Path,
    text: &str,
    manifest: &DatasetManifest,
) -> Result<Vec<Detection>> {
    let results: Vec<CocoResult> = serde_json::from_str(text)
        .map_err(|e| Error::parse(path, Some(e.line()), e.to_string()))?;
    results
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            let where_ = format!("result {i}");
            let image_id = match r.image_id {
                CocoImageRef::Name(s) => s,
                CocoImageRef::Index(k) => manifest
                    .entries
                    .get((k as usize).wrapping_sub(1))
                    .map(|e| e.image_id.clone())
                    .ok_or_else(|| Error::UnknownImageIds(vec![k.to_string()]))?,
            };
            if !(0.0..=1.0).contains(&r.score) {
                return Err(Error::parse(
                    path,
                    None,
                    format!("{where_}: score {} outside [0, 1]", r.score),
                ));
            }
            let [x, y, w, h] = r.bbox;
            let bbox = BBox2D::new(x, y, x + w, y + h)
                .map_err(|e| Error::parse(path, None, format!("{where_}: {e}")))?;
            Ok(Detection {
                image_id,
                class_id: r.category_id,
                confidence: r.score,
                bbox,
            })
        })
        .collect()
}

/// Load a predictions file; `.json` files are COCO results, anything else
/// the line format.
pub fn load_predictions(path: &Path, manifest: &DatasetManifest) -> Result<Vec<Detection>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let is_json = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        parse_coco_results(path, &text, manifest)
    } else {
        parse_prediction_lines(path, &text)
    }
}
