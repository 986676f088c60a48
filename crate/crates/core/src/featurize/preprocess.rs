use crate::data::{FeatureMatrix, ImageSet};
use crate::error::Result;

/// Lower bound applied to the standard deviation.
pub const STD_FLOOR: f64 = 1e-8;

/// One mean/std pair for a whole data split, computed over every pixel
/// value of every image and channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreprocessStats {
    pub mean: f64,
    pub std: f64,
}

impl PreprocessStats {
    pub fn new(mean: f64, std: f64) -> Self {
        Self {
            mean,
            std: std.max(STD_FLOOR),
        }
    }
}

/// Population mean and standard deviation of all pixel values.
pub fn compute_stats(images: &ImageSet) -> PreprocessStats {
    let mut hist = [0u64; 256];
    for &p in images.pixels() {
        hist[p as usize] += 1;
    }
    let n = images.pixels().len() as f64;
    let mean = hist
        .iter()
        .enumerate()
        .map(|(v, &c)| v as f64 * c as f64)
        .sum::<f64>()
        / n;
    let var = hist
        .iter()
        .enumerate()
        .map(|(v, &c)| {
            let d = v as f64 - mean;
            d * d * c as f64
        })
        .sum::<f64>()
        / n;
    PreprocessStats::new(mean, var.sqrt())
}

/// Real-valued image stack, same layout as [`ImageSet`].
#[derive(Debug, Clone, PartialEq)]
pub struct StandardizedImages {
    pub n: usize,
    pub h: usize,
    pub w: usize,
    pub c: usize,
    pub values: Vec<f64>,
}

impl StandardizedImages {
    pub fn image_len(&self) -> usize {
        self.h * self.w * self.c
    }

    pub fn image(&self, i: usize) -> &[f64] {
        let len = self.image_len();
        &self.values[i * len..(i + 1) * len]
    }

    /// One row per image, `h · w · c` columns.
    pub fn into_matrix(self) -> Result<FeatureMatrix> {
        FeatureMatrix::from_f64(self.n, self.image_len(), &self.values)
    }
}

pub fn standardize(images: &ImageSet, stats: PreprocessStats) -> StandardizedImages {
    let std = stats.std.max(STD_FLOOR);
    StandardizedImages {
        n: images.len(),
        h: images.height(),
        w: images.width(),
        c: images.channels(),
        values: images
            .pixels()
            .iter()
            .map(|&p| (f64::from(p) - stats.mean) / std)
            .collect(),
    }
}

/// Source index sampled for output index `i` when resampling `src` to
/// `dst` positions: the source pixel whose span holds the output pixel's
/// centre.
fn nearest(i: usize, src: usize, dst: usize) -> usize {
    ((2 * i + 1) * src / (2 * dst)).min(src - 1)
}

/// Nearest-neighbour resampling to `target_h × target_w`.
pub fn resize(images: &ImageSet, target_h: usize, target_w: usize) -> Result<ImageSet> {
    let (h, w, c) = (images.height(), images.width(), images.channels());
    if (h, w) == (target_h, target_w) {
        return Ok(images.clone());
    }
    let rows: Vec<usize> = (0..target_h).map(|y| nearest(y, h, target_h)).collect();
    let cols: Vec<usize> = (0..target_w).map(|x| nearest(x, w, target_w)).collect();
    let mut out = Vec::with_capacity(images.len() * target_h * target_w * c);
    for i in 0..images.len() {
        let img = images.image(i);
        for &sy in &rows {
            for &sx in &cols {
                let at = (sy * w + sx) * c;
                out.extend_from_slice(&img[at..at + c]);
            }
        }
    }
    ImageSet::new(images.len(), target_h, target_w, c, out)
}
