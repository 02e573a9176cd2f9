use std::collections::BTreeMap;

/// Sentinel in the instance raster for pixels no mesh covers.
pub const NO_INSTANCE: u32 = u32::MAX;

/// RGB, depth and instance rasters of one capture, row-major from the
/// top-left pixel.
///
/// `instance[i] != NO_INSTANCE` exactly when `depth[i]` is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameBuffer {
    width: u32,
    height: u32,
    pub rgb: Vec<u8>,
    pub depth: Vec<f64>,
    pub instance: Vec<u32>,
}

impl FrameBuffer {
    pub fn new(width: u32, height: u32, fill: [u8; 3]) -> Self {
        let n = width as usize * height as usize;
        let mut rgb = Vec::with_capacity(3 * n);
        for _ in 0..n {
            rgb.extend_from_slice(&fill);
        }
        FrameBuffer {
            width,
            height,
            rgb,
            depth: vec![f64::INFINITY; n],
            instance: vec![NO_INSTANCE; n],
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn dims(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn index(&self, x: u32, y: u32) -> usize {
        y as usize * self.width as usize + x as usize
    }

    pub fn pixel(&self, x: u32, y: u32) -> [u8; 3] {
        let i = 3 * self.index(x, y);
        [self.rgb[i], self.rgb[i + 1], self.rgb[i + 2]]
    }

    pub fn set_pixel(&mut self, x: u32, y: u32, c: [u8; 3]) {
        let i = 3 * self.index(x, y);
        self.rgb[i..i + 3].copy_from_slice(&c);
    }

    pub fn instance_at(&self, x: u32, y: u32) -> u32 {
        self.instance[self.index(x, y)]
    }

    pub fn count_instance(&self, id: u32) -> usize {
        self.instance.iter().filter(|&&i| i == id).count()
    }

    /// Pixel counts of every instance present, keyed by id.
    pub fn instance_histogram(&self) -> BTreeMap<u32, usize> {
        let mut h = BTreeMap::new();
        for &i in self.instance.iter().filter(|&&i| i != NO_INSTANCE) {
            *h.entry(i).or_insert(0) += 1;
        }
        h
    }
}
