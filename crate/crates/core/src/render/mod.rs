//! Deterministic software rasterizer.
//!
//! Produces an RGB image, a depth buffer and an instance-ID buffer per
//! capture. Triangles are flat shaded, z-buffered and sampled at pixel
//! centres with a top-left fill rule, so shared edges are drawn exactly once
//! and output is byte-identical across runs, machines and thread counts.

mod framebuffer;
mod material;
mod ppm;
mod raster;

pub use framebuffer::{FrameBuffer, NO_INSTANCE};
pub use material::{quantize, shade, Material, Rgb};
pub use ppm::{decode_ppm, encode_ppm, read_ppm, write_image, write_png, write_ppm, PpmImage};
pub use raster::{rasterize, RenderSettings, DEFAULT_NEAR_PLANE};
