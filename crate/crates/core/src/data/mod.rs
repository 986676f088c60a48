//! Value types shared by every stage of the pipeline: feature matrices,
//! image stacks, seeds, and the bundled accuracy/distance tables.

mod csv_matrix;
mod fmat;
mod seed;
pub mod tables;

pub use csv_matrix::{load_csv_matrix, parse_csv_matrix};
pub use fmat::{decode_fmat, encode_fmat, load_fmat, save_fmat, FMAT_MAGIC, FMAT_VERSION};
pub use seed::{derive_round_seed, splitmix64, uniform_below, Pcg32, Seed};

use crate::error::{Error, Result};

/// A dense `rows × cols` table of feature vectors, stored row-major.
///
/// Values are kept at the on-disk width (`f32`) so that files round-trip
/// bit-exactly; all arithmetic on them is carried out in `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f32>,
}

impl FeatureMatrix {
    pub fn new(rows: usize, cols: usize, values: Vec<f32>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Validation(format!(
                "feature matrix must be at least 1x1, got {rows}x{cols}"
            )));
        }
        if values.len() != rows * cols {
            return Err(Error::Validation(format!(
                "expected {} values for a {rows}x{cols} matrix, got {}",
                rows * cols,
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Validation(format!(
                "non-finite value {} at row {}, column {}",
                values[pos],
                pos / cols,
                pos % cols
            )));
        }
        Ok(Self { rows, cols, values })
    }

    /// Builds a matrix from `f64` data, narrowing each value to `f32`.
    pub fn from_f64(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        Self::new(rows, cols, values.iter().map(|&v| v as f32).collect())
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut values = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Validation(format!(
                    "row {i} has {} columns, expected {cols}",
                    r.len()
                )));
            }
            values.extend(r.iter().map(|&v| v as f32));
        }
        Self::new(rows.len(), cols, values)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f32] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl ExactSizeIterator<Item = &[f32]> + '_ {
        self.values.chunks_exact(self.cols)
    }

    /// Copies the given rows, in order, into a new matrix.
    pub fn select_rows(&self, indices: &[usize]) -> Result<Self> {
        let mut values = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            if i >= self.rows {
                return Err(Error::Parameter(format!(
                    "row index {i} out of range for {} rows",
                    self.rows
                )));
            }
            values.extend_from_slice(self.row(i));
        }
        Self::new(indices.len(), self.cols, values)
    }

    /// Column `j` widened to `f64`.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.iter_rows().map(|r| f64::from(r[j])).collect()
    }
}

/// A stack of `n` images of `h × w` pixels with `c` 8-bit channels, stored
/// as `n, h, w, c` with the channel index varying fastest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageSet {
    n: usize,
    h: usize,
    w: usize,
    c: usize,
    pixels: Vec<u8>,
}

impl ImageSet {
    pub fn new(n: usize, h: usize, w: usize, c: usize, pixels: Vec<u8>) -> Result<Self> {
        if n == 0 || h == 0 || w == 0 {
            return Err(Error::Validation(format!(
                "image stack dimensions must be positive, got n={n} h={h} w={w}"
            )));
        }
        if c != 1 && c != 3 {
            return Err(Error::Validation(format!(
                "channel count must be 1 or 3, got {c}"
            )));
        }
        if pixels.len() != n * h * w * c {
            return Err(Error::Validation(format!(
                "pixel buffer has {} bytes, expected {}",
                pixels.len(),
                n * h * w * c
            )));
        }
        Ok(Self { n, h, w, c, pixels })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn height(&self) -> usize {
        self.h
    }

    pub fn width(&self) -> usize {
        self.w
    }

    pub fn channels(&self) -> usize {
        self.c
    }

    /// Number of values in one image (`h · w · c`).
    pub fn image_len(&self) -> usize {
        self.h * self.w * self.c
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn image(&self, i: usize) -> &[u8] {
        let len = self.image_len();
        &self.pixels[i * len..(i + 1) * len]
    }
}
