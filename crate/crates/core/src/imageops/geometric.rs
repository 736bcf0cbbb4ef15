use super::{GrayImage, TransformSpec};
use crate::{Error, Result};

/// Applies a geometric transform. Output keeps the input's dimensions:
/// content moved out of frame is cropped and uncovered areas replicate the
/// nearest border pixel. Sub-pixel sampling is bilinear.
pub fn apply_geometric(img: &GrayImage, spec: &TransformSpec) -> Result<GrayImage> {
    if !spec.kind().is_geometric() {
        return Err(Error::ParamDomain(format!("{:?} is not a geometric transform", spec.kind())));
    }
    spec.validate()?;
    if img.is_empty() {
        return Err(Error::DegenerateInput("empty image".into()));
    }
    let (w, h) = img.dims();
    let cx = (w as f64 - 1.0) / 2.0;
    let cy = (h as f64 - 1.0) / 2.0;
    let out = match *spec {
        TransformSpec::Translate { dx, dy } => GrayImage::from_fn(w, h, |x, y| {
            img.get_clamped(x as isize - dx as isize, y as isize - dy as isize)
        }),
        TransformSpec::Scale { factor } => GrayImage::from_fn(w, h, |x, y| {
            img.sample_bilinear(cx + (x as f64 - cx) / factor, cy + (y as f64 - cy) / factor)
        }),
        TransformSpec::Rotate { degrees } => {
            let (sin, cos) = degrees.to_radians().sin_cos();
            GrayImage::from_fn(w, h, |x, y| {
                let (dx, dy) = (x as f64 - cx, y as f64 - cy);
                img.sample_bilinear(cx + cos * dx + sin * dy, cy - sin * dx + cos * dy)
            })
        }
        TransformSpec::Resample { factor } => {
            let sw = ((w as f64 * factor).round() as usize).max(1);
            let sh = ((h as f64 * factor).round() as usize).max(1);
            resize(&resize(img, sw, sh), w, h)
        }
        _ => unreachable!("checked above"),
    };
    Ok(out)
}

/// Bilinear resize using pixel-centre alignment.
pub(crate) fn resize(img: &GrayImage, new_w: usize, new_h: usize) -> GrayImage {
    let (w, h) = img.dims();
    let sx = w as f64 / new_w as f64;
    let sy = h as f64 / new_h as f64;
    GrayImage::from_fn(new_w, new_h, |x, y| {
        img.sample_bilinear((x as f64 + 0.5) * sx - 0.5, (y as f64 + 0.5) * sy - 0.5)
    })
}
