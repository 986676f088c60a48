use std::path::{Path, PathBuf};

use crate::data::ImageSet;
use crate::error::{Error, Result};

/// Loads every `*.png` in `dir` (sorted by file name) into one stack. All
/// images must be 8-bit grayscale or 8-bit RGB and share one size.
pub fn load_png_dir(dir: impl AsRef<Path>) -> Result<ImageSet> {
    let dir = dir.as_ref();
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension()
                .and_then(|x| x.to_str())
                .is_some_and(|x| x.eq_ignore_ascii_case("png"))
        })
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::Validation(format!("no .png files in {}", dir.display())));
    }
    let mut shape = None;
    let mut pixels = Vec::new();
    for p in &paths {
        let img = image::open(p).map_err(|e| Error::Format(format!("{}: {e}", p.display())))?;
        let (w, h, c, bytes) = match img {
            image::DynamicImage::ImageLuma8(b) => (b.width(), b.height(), 1, b.into_raw()),
            image::DynamicImage::ImageRgb8(b) => (b.width(), b.height(), 3, b.into_raw()),
            other => {
                return Err(Error::Format(format!(
                    "{}: unsupported pixel format {:?}, expected 8-bit gray or RGB",
                    p.display(),
                    other.color()
                )))
            }
        };
        match shape {
            None => shape = Some((h, w, c)),
            Some(s) if s != (h, w, c) => {
                return Err(Error::Validation(format!(
                    "{}: image is {h}x{w}x{c}, expected {}x{}x{}",
                    p.display(),
                    s.0,
                    s.1,
                    s.2
                )))
            }
            _ => {}
        }
        pixels.extend(bytes);
    }
    let (h, w, c) = shape.unwrap();
    ImageSet::new(paths.len(), h as usize, w as usize, c, pixels)
}
