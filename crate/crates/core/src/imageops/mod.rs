//! Grayscale images, intensity transforms and synthetic near-duplicate sets.

mod geometric;
mod io;
mod photometric;
pub mod procedural;
mod shape;
mod synth;
mod transform;

pub use geometric::apply_geometric;
pub use io::{load_image, save_image};
pub use photometric::apply_photometric;
pub use shape::TreeShape;
pub use synth::{replay_manifest, synth_ipt, DatasetManifest, SyntheticIpt, TransformClass};
pub use transform::{apply_transform, TransformKind, TransformSpec};

use crate::{Error, Result};

/// Single-channel image with real-valued intensities in `[0, 255]`, stored
/// row-major.
///
/// Intensities stay real-valued through every transform; quantization to
/// 8 bits only happens when an image is written to disk.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::Input(format!(
                "{}x{} image needs {} pixels, got {}",
                width,
                height,
                width * height,
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|v| !(0.0..=255.0).contains(*v)) {
            return Err(Error::Input(format!("intensity {bad} outside [0, 255]")));
        }
        Ok(Self { width, height, data })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        Self { width, height, data: vec![value.clamp(0.0, 255.0); width * height] }
    }

    /// Builds an image from `f(x, y)`, clamping every value into `[0, 255]`.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(clamp_intensity(f(x, y)));
            }
        }
        Self { width, height, data }
    }

    pub(crate) fn from_raw_clamped(width: usize, height: usize, mut data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), width * height);
        for v in &mut data {
            *v = clamp_intensity(*v);
        }
        Self { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn pixels(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    /// Pixel lookup with replicate-border semantics.
    pub fn get_clamped(&self, x: isize, y: isize) -> f64 {
        let x = x.clamp(0, self.width as isize - 1) as usize;
        let y = y.clamp(0, self.height as isize - 1) as usize;
        self.data[y * self.width + x]
    }

    /// Bilinear sample at real coordinates, replicating the border.
    pub fn sample_bilinear(&self, x: f64, y: f64) -> f64 {
        let x0 = x.floor();
        let y0 = y.floor();
        let fx = x - x0;
        let fy = y - y0;
        let (xi, yi) = (x0 as isize, y0 as isize);
        let top = self.get_clamped(xi, yi) * (1.0 - fx) + self.get_clamped(xi + 1, yi) * fx;
        let bottom =
            self.get_clamped(xi, yi + 1) * (1.0 - fx) + self.get_clamped(xi + 1, yi + 1) * fx;
        top * (1.0 - fy) + bottom * fy
    }

    /// Intensities rounded to 8 bits, as written to disk.
    pub fn to_u8(&self) -> Vec<u8> {
        self.data.iter().map(|v| v.round().clamp(0.0, 255.0) as u8).collect()
    }

    /// The image after a round trip through 8-bit storage.
    pub fn quantized(&self) -> GrayImage {
        let data = self.to_u8().into_iter().map(f64::from).collect();
        GrayImage { width: self.width, height: self.height, data }
    }

    pub(crate) fn ensure_same_dims(&self, other: &GrayImage) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::Input(format!(
                "image dimensions differ: {}x{} vs {}x{}",
                self.width, self.height, other.width, other.height
            )));
        }
        Ok(())
    }
}

fn clamp_intensity(v: f64) -> f64 {
    if v.is_nan() {
        0.0
    } else {
        v.clamp(0.0, 255.0)
    }
}

/// Maps an intensity in `[0, 255]` onto `[-1, 1]`.
pub fn normalize_intensity(p: f64) -> f64 {
    p / 127.5 - 1.0
}

/// Inverse of [`normalize_intensity`].
pub fn denormalize_intensity(u: f64) -> f64 {
    (u + 1.0) * 127.5
}

/// Image rescaled to the unit interval `[-1, 1]`, the domain of the
/// orthogonal polynomial bases.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f64>,
}

pub fn normalize_unit(img: &GrayImage) -> UnitImage {
    UnitImage {
        width: img.width,
        height: img.height,
        data: img.data.iter().map(|&p| normalize_intensity(p)).collect(),
    }
}

impl UnitImage {
    pub fn denormalize(&self) -> GrayImage {
        let data = self.data.iter().map(|&u| denormalize_intensity(u)).collect();
        GrayImage::from_raw_clamped(self.width, self.height, data)
    }
}

/// One square tile of a tessellated image.
///
/// `data` always holds `size * size` values; tiles hanging over the right or
/// bottom edge are padded by replicating the last real column / row.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub x0: usize,
    pub y0: usize,
    pub size: usize,
    /// Number of real (unpadded) columns.
    pub valid_w: usize,
    /// Number of real (unpadded) rows.
    pub valid_h: usize,
    pub data: Vec<f64>,
}

impl Block {
    pub fn is_valid(&self, bx: usize, by: usize) -> bool {
        bx < self.valid_w && by < self.valid_h
    }
}

/// Splits `img` into non-overlapping `block x block` tiles in row-major tile
/// order. There are `ceil(w / block) * ceil(h / block)` tiles.
pub fn tessellate(img: &GrayImage, block: usize) -> Result<Vec<Block>> {
    if block == 0 {
        return Err(Error::ParamDomain("block size must be at least 1".into()));
    }
    if img.is_empty() {
        return Err(Error::DegenerateInput("cannot tessellate an empty image".into()));
    }
    let cols = img.width.div_ceil(block);
    let rows = img.height.div_ceil(block);
    let mut blocks = Vec::with_capacity(cols * rows);
    for r in 0..rows {
        for c in 0..cols {
            let x0 = c * block;
            let y0 = r * block;
            let valid_w = block.min(img.width - x0);
            let valid_h = block.min(img.height - y0);
            let mut data = Vec::with_capacity(block * block);
            for by in 0..block {
                let y = y0 + by.min(valid_h - 1);
                for bx in 0..block {
                    let x = x0 + bx.min(valid_w - 1);
                    data.push(img.get(x, y));
                }
            }
            blocks.push(Block { x0, y0, size: block, valid_w, valid_h, data });
        }
    }
    Ok(blocks)
}

/// Reassembles the unpadded part of `blocks` into a `width x height` image.
pub fn untessellate(blocks: &[Block], width: usize, height: usize) -> Result<GrayImage> {
    let mut data = vec![f64::NAN; width * height];
    for b in blocks {
        for by in 0..b.valid_h {
            for bx in 0..b.valid_w {
                let (x, y) = (b.x0 + bx, b.y0 + by);
                if x >= width || y >= height {
                    return Err(Error::Input("block lies outside the target image".into()));
                }
                data[y * width + x] = b.data[by * b.size + bx];
            }
        }
    }
    if data.iter().any(|v| v.is_nan()) {
        return Err(Error::Input("blocks do not cover the target image".into()));
    }
    GrayImage::new(width, height, data)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(w: usize, h: usize) -> GrayImage {
        GrayImage::from_fn(w, h, |x, y| ((x * 7 + y * 3) % 256) as f64)
    }

    #[test]
    fn normalize_endpoints() {
        assert_eq!(normalize_intensity(0.0), -1.0);
        assert_eq!(normalize_intensity(127.5), 0.0);
        assert_eq!(normalize_intensity(255.0), 1.0);
    }

    #[test]
    fn normalize_round_trip() {
        let img = ramp(13, 9);
        let back = normalize_unit(&img).denormalize();
        for (a, b) in img.pixels().iter().zip(back.pixels()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_bad_buffers() {
        assert!(GrayImage::new(2, 2, vec![0.0; 3]).is_err());
        assert!(GrayImage::new(1, 1, vec![256.0]).is_err());
        assert!(GrayImage::new(1, 1, vec![-0.5]).is_err());
    }

    #[test]
    fn tessellate_exact_tiling() {
        let img = ramp(32, 32);
        let blocks = tessellate(&img, 16).unwrap();
        assert_eq!(blocks.len(), 4);
        assert_eq!((blocks[1].x0, blocks[1].y0), (16, 0));
        assert_eq!((blocks[2].x0, blocks[2].y0), (0, 16));
    }

    #[test]
    fn tessellate_identity_tiling() {
        let img = ramp(16, 16);
        let blocks = tessellate(&img, 16).unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].data, img.pixels());
    }

    #[test]
    fn tessellate_pads_partial_blocks() {
        let img = ramp(33, 16);
        let blocks = tessellate(&img, 16).unwrap();
        assert_eq!(blocks.len(), 3);
        let third = &blocks[2];
        assert_eq!((third.x0, third.valid_w, third.valid_h), (32, 1, 16));
        for by in 0..16 {
            for bx in 0..16 {
                assert_eq!(third.data[by * 16 + bx], img.get(32, by));
            }
        }
    }

    #[test]
    fn tessellate_rejects_zero_block() {
        assert!(matches!(tessellate(&ramp(4, 4), 0), Err(Error::ParamDomain(_))));
    }

    #[test]
    fn untessellate_restores_image() {
        let img = ramp(37, 21);
        let blocks = tessellate(&img, 8).unwrap();
        assert_eq!(untessellate(&blocks, 37, 21).unwrap(), img);
    }
}
