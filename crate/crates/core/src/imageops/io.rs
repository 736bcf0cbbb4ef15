use std::io::Cursor;
use std::path::Path;

use image::ImageFormat;

use super::GrayImage;
use crate::fsutil::write_atomic;
use crate::{Error, Result};

/// Reads an 8-bit grayscale image (PNG or binary PGM). Colour inputs are
/// converted to luma.
pub fn load_image(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let img = image::open(path)
        .map_err(|source| Error::Image { path: path.to_path_buf(), source })?
        .into_luma8();
    let (w, h) = img.dimensions();
    let data = img.into_raw().into_iter().map(f64::from).collect();
    GrayImage::new(w as usize, h as usize, data)
}

/// Writes `img` quantized to 8 bits. The format follows the extension:
/// `.pgm` gives binary PGM (P5), anything else PNG.
pub fn save_image(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let pixels = img.to_u8();
    let is_pgm = path
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("pgm"));
    let bytes = if is_pgm {
        let mut bytes = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
        bytes.extend_from_slice(&pixels);
        bytes
    } else {
        let buf = image::GrayImage::from_raw(img.width() as u32, img.height() as u32, pixels)
            .ok_or_else(|| Error::Input("pixel buffer does not match dimensions".into()))?;
        let mut out = Cursor::new(Vec::new());
        buf.write_to(&mut out, ImageFormat::Png)
            .map_err(|source| Error::Image { path: path.to_path_buf(), source })?;
        out.into_inner()
    };
    write_atomic(path, &bytes)
}
