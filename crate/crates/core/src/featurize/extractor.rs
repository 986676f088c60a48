use std::path::PathBuf;

use rand::RngExt;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::preprocess::{standardize, PreprocessStats};
use crate::data::{FeatureMatrix, ImageSet, Seed};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Extractor {
    /// Standardized pixels as-is: `n′ = h · w · c`.
    Flatten,
    /// Standardized pixels times a seeded Gaussian matrix.
    RandomProjection { out_dim: usize, seed: Seed },
    /// An ONNX model taking a `1 × c × h × w` standardized tensor.
    ExternalModel { path: PathBuf, out_dim: usize },
}

/// Dense `in_dim × out_dim` projection with i.i.d. `N(0, 1/out_dim)`
/// entries, drawn row-major from the PCG32 stream of `seed`.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomProjection {
    in_dim: usize,
    out_dim: usize,
    weights: Vec<f64>,
}

impl RandomProjection {
    pub fn new(in_dim: usize, out_dim: usize, seed: Seed) -> Result<Self> {
        if in_dim == 0 || out_dim == 0 {
            return Err(Error::Parameter(format!(
                "projection dimensions must be positive, got {in_dim}x{out_dim}"
            )));
        }
        let scale = 1.0 / (out_dim as f64).sqrt();
        let mut rng = seed.rng();
        let weights = (0..in_dim * out_dim)
            .map(|_| rng.sample::<f64, _>(StandardNormal) * scale)
            .collect();
        Ok(Self {
            in_dim,
            out_dim,
            weights,
        })
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    /// Row-major `in_dim × out_dim` weights.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.in_dim);
        let mut out = vec![0.0; self.out_dim];
        for (xi, row) in x.iter().zip(self.weights.chunks_exact(self.out_dim)) {
            for (o, w) in out.iter_mut().zip(row) {
                *o += xi * w;
            }
        }
        out
    }

    pub fn project_matrix(&self, m: &FeatureMatrix) -> Result<FeatureMatrix> {
        if m.cols() != self.in_dim {
            return Err(Error::DimensionMismatch {
                left: m.cols(),
                right: self.in_dim,
            });
        }
        let rows: Vec<Vec<f64>> = m
            .iter_rows()
            .collect::<Vec<_>>()
            .par_iter()
            .map(|r| self.project(&r.iter().map(|&v| f64::from(v)).collect::<Vec<_>>()))
            .collect();
        FeatureMatrix::from_rows(&rows)
    }
}

/// Standardizes `images` with `stats` and maps each image to one feature
/// row. Rows are produced in parallel and assembled in input order.
pub fn extract_features(
    images: &ImageSet,
    extractor: &Extractor,
    stats: PreprocessStats,
) -> Result<FeatureMatrix> {
    let z = standardize(images, stats);
    match extractor {
        Extractor::Flatten => z.into_matrix(),
        Extractor::RandomProjection { out_dim, seed } => {
            let proj = RandomProjection::new(z.image_len(), *out_dim, *seed)?;
            let rows: Vec<Vec<f64>> = (0..z.n)
                .into_par_iter()
                .map(|i| proj.project(z.image(i)))
                .collect();
            FeatureMatrix::from_rows(&rows)
        }
        Extractor::ExternalModel { path, out_dim } => external(&z, path, *out_dim),
    }
}

#[cfg(feature = "onnx")]
fn external(z: &super::StandardizedImages, path: &std::path::Path, out_dim: usize) -> Result<FeatureMatrix> {
    let runner = super::OnnxRunner::load(path, z.c, z.h, z.w, out_dim)?;
    let mut values = Vec::with_capacity(z.n * out_dim);
    for i in 0..z.n {
        values.extend(runner.run(z.image(i))?);
    }
    FeatureMatrix::new(z.n, out_dim, values)
}

#[cfg(not(feature = "onnx"))]
fn external(_: &super::StandardizedImages, path: &std::path::Path, _: usize) -> Result<FeatureMatrix> {
    Err(Error::Extractor(format!(
        "cannot load {}: built without the `onnx` feature",
        path.display()
    )))
}
