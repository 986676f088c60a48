//! Synthetic out-of-distribution image sets.

use rand::{Rng, RngExt};
use rand_distr::Normal;

use crate::data::{ImageSet, Seed};
use crate::error::{Error, Result};

pub const GAUSSIAN_NOISE_VARIANCE: f64 = 10.0;
/// Default side length of generated noise images.
pub const NOISE_IMAGE_SIZE: usize = 224;

/// Grayscale images with pixels `round(clip(N(0, 10), 0, 255))`.
pub fn gen_gaussian_noise(n: usize, h: usize, w: usize, seed: Seed) -> Result<ImageSet> {
    let normal = Normal::new(0.0, GAUSSIAN_NOISE_VARIANCE.sqrt())
        .map_err(|e| Error::Parameter(e.to_string()))?;
    let mut rng = seed.rng();
    let pixels = (0..n * h * w)
        .map(|_| {
            let v: f64 = rng.sample(normal);
            v.clamp(0.0, 255.0).round() as u8
        })
        .collect();
    ImageSet::new(n, h, w, 1, pixels)
}

/// Grayscale images whose pixels are 0 or 255 with probability ½ each.
pub fn gen_sap_noise(n: usize, h: usize, w: usize, seed: Seed) -> Result<ImageSet> {
    let mut rng = seed.rng();
    let mut pixels = Vec::with_capacity(n * h * w);
    while pixels.len() < n * h * w {
        let bits = rng.next_u32();
        for b in 0..32 {
            if pixels.len() == n * h * w {
                break;
            }
            pixels.push(if bits >> b & 1 == 1 { 255 } else { 0 });
        }
    }
    ImageSet::new(n, h, w, 1, pixels)
}
