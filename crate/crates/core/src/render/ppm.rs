use std::fs;
use std::io::Write;
use std::path::Path;

use super::FrameBuffer;
use crate::{Error, Result};

/// Decoded 8-bit RGB image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PpmImage {
    pub width: u32,
    pub height: u32,
    pub rgb: Vec<u8>,
}

/// Binary PPM (`P6`, maxval 255) bytes for an RGB raster.
pub fn encode_ppm(width: u32, height: u32, rgb: &[u8]) -> Vec<u8> {
    let header = format!("P6\n{width} {height}\n255\n");
    let mut out = Vec::with_capacity(header.len() + rgb.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(rgb);
    out
}

pub fn write_ppm(path: &Path, width: u32, height: u32, rgb: &[u8]) -> Result<()> {
    debug_assert_eq!(rgb.len(), 3 * width as usize * height as usize);
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&encode_ppm(width, height, rgb))
        .map_err(|e| Error::io(path, e))
}

/// Write the colour raster of `fb` as a `P6` file.
pub fn write_image(fb: &FrameBuffer, path: &Path) -> Result<()> {
    write_ppm(path, fb.width(), fb.height(), &fb.rgb)
}

/// Optional PNG sidecar of the colour raster.
pub fn write_png(fb: &FrameBuffer, path: &Path) -> Result<()> {
    image::save_buffer(
        path,
        &fb.rgb,
        fb.width(),
        fb.height(),
        image::ExtendedColorType::Rgb8,
    )
    .map_err(|e| Error::Image {
        path: path.to_path_buf(),
        source: e,
    })
}

pub fn read_ppm(path: &Path) -> Result<PpmImage> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_ppm(&bytes).map_err(|msg| Error::parse(path, None, msg))
}

pub fn decode_ppm(bytes: &[u8]) -> std::result::Result<PpmImage, String> {
    let mut pos = 0;
    let mut fields = Vec::with_capacity(4);
    while fields.len() < 4 {
        // skip whitespace and comments
        while pos < bytes.len() {
            match bytes[pos] {
                b'#' => {
                    while pos < bytes.len() && bytes[pos] != b'\n' {
                        pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => pos += 1,
                _ => break,
            }
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err("truncated PPM header".into());
        }
        fields.push(std::str::from_utf8(&bytes[start..pos]).map_err(|_| "non-ASCII PPM header")?);
    }
    if fields[0] != "P6" {
        return Err(format!("unsupported magic {:?}, expected P6", fields[0]));
    }
    let num = |s: &str| {
        s.parse::<u32>()
            .map_err(|_| format!("bad header number {s:?}"))
    };
    let (width, height, maxval) = (num(fields[1])?, num(fields[2])?, num(fields[3])?);
    if maxval != 255 {
        return Err(format!("unsupported maxval {maxval}"));
    }
    // exactly one whitespace byte separates the header from the raster
    pos += 1;
    let n = 3 * width as usize * height as usize;
    let rgb = bytes
        .get(pos..pos + n)
        .ok_or_else(|| format!("raster truncated: need {n} bytes"))?
        .to_vec();
    Ok(PpmImage { width, height, rgb })
}
