use rand::{Rng, RngExt};
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::data::{FeatureMatrix, Seed};
use crate::error::{Error, Result};

/// In-distribution generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TaskShape {
    /// Isotropic Gaussian blobs with centres `separation/√2 · e_k`, so any
    /// two centres are `separation` apart.
    Blobs { dim: usize, separation: f64, spread: f64 },
    /// Two interleaved half circles in the plane with Gaussian noise.
    Moons { noise: f64 },
}

/// Distribution the out-of-distribution share of the unlabelled pool is drawn from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Contaminant {
    None,
    /// One Gaussian blob centred at `shift · 1` with the task's spread.
    ShiftedBlob { shift: f64 },
    /// Uniform over the in-distribution bounding box, widened by 10% per side.
    UniformNoise,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    pub shape: TaskShape,
    #[serde(default = "two")]
    pub classes: usize,
    pub n_l: usize,
    pub n_u: usize,
    #[serde(default = "default_test")]
    pub n_test: usize,
    #[serde(default)]
    pub pct_ood: f64,
    #[serde(default = "no_contaminant")]
    pub contaminant: Contaminant,
    #[serde(default)]
    pub seed: Seed,
}

fn two() -> usize {
    2
}

fn default_test() -> usize {
    1000
}

fn no_contaminant() -> Contaminant {
    Contaminant::None
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticTask {
    pub classes: usize,
    pub dim: usize,
    pub labelled: Vec<(Vec<f64>, usize)>,
    pub unlabelled: Vec<Vec<f64>>,
    /// Parallel to `unlabelled`; true for contaminant points.
    pub unlabelled_ood: Vec<bool>,
    pub test: Vec<(Vec<f64>, usize)>,
}

impl SyntheticTask {
    pub fn labelled_matrix(&self) -> Result<FeatureMatrix> {
        let v: Vec<f64> = self.labelled.iter().flat_map(|(x, _)| x.iter().copied()).collect();
        FeatureMatrix::from_f64(self.labelled.len(), self.dim, &v)
    }

    pub fn unlabelled_matrix(&self) -> Result<FeatureMatrix> {
        let v: Vec<f64> = self.unlabelled.iter().flatten().copied().collect();
        FeatureMatrix::from_f64(self.unlabelled.len(), self.dim, &v)
    }

    pub fn n_ood(&self) -> usize {
        self.unlabelled_ood.iter().filter(|b| **b).count()
    }
}

impl TaskSpec {
    fn dim(&self) -> usize {
        match self.shape {
            TaskShape::Blobs { dim, .. } => dim,
            TaskShape::Moons { .. } => 2,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Parameter(m));
        if self.classes < 2 {
            return bad(format!("need at least 2 classes, got {}", self.classes));
        }
        if self.n_l == 0 || !self.n_l.is_multiple_of(self.classes) {
            return bad(format!("n_l = {} must be a positive multiple of {} classes", self.n_l, self.classes));
        }
        if self.n_test == 0 {
            return bad("n_test must be positive".into());
        }
        if !(0.0..=100.0).contains(&self.pct_ood) {
            return bad(format!("pct_ood must lie in [0, 100], got {}", self.pct_ood));
        }
        if self.pct_ood > 0.0 && self.n_u > 0 && self.contaminant == Contaminant::None {
            return bad("pct_ood > 0 needs a contaminant".into());
        }
        match self.shape {
            TaskShape::Blobs { dim, separation, spread } => {
                if dim < self.classes {
                    return bad(format!("blob dim {dim} must be at least the class count {}", self.classes));
                }
                if !(separation >= 0.0) || !(spread > 0.0) {
                    return bad("blob separation must be ≥ 0 and spread > 0".into());
                }
            }
            TaskShape::Moons { noise } => {
                if self.classes != 2 {
                    return bad("moons has exactly 2 classes".into());
                }
                if !(noise >= 0.0) {
                    return bad("moons noise must be ≥ 0".into());
                }
            }
        }
        Ok(())
    }

    fn draw<R: Rng>(&self, class: usize, rng: &mut R) -> Vec<f64> {
        match self.shape {
            TaskShape::Blobs { dim, separation, spread } => {
                let c = separation / std::f64::consts::SQRT_2;
                (0..dim)
                    .map(|j| {
                        let mu = if j == class { c } else { 0.0 };
                        mu + spread * rng.sample::<f64, _>(StandardNormal)
                    })
                    .collect()
            }
            TaskShape::Moons { noise } => {
                let t = rng.random_range(0.0..std::f64::consts::PI);
                let (x, y) = if class == 0 { (t.cos(), t.sin()) } else { (1.0 - t.cos(), 0.5 - t.sin()) };
                vec![
                    x + noise * rng.sample::<f64, _>(StandardNormal),
                    y + noise * rng.sample::<f64, _>(StandardNormal),
                ]
            }
        }
    }
}

fn bounding_box(points: &[(Vec<f64>, usize)], dim: usize) -> Vec<(f64, f64)> {
    (0..dim)
        .map(|j| {
            let (lo, hi) = points
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (x, _)| (lo.min(x[j]), hi.max(x[j])));
            let pad = 0.1 * (hi - lo).max(1e-6);
            (lo - pad, hi + pad)
        })
        .collect()
}

/// Deterministic synthetic task; the labelled and test sets depend only on
/// the seed and shape, so runs that differ only in contamination share them.
pub fn gen_synthetic_task(spec: &TaskSpec) -> Result<SyntheticTask> {
    spec.validate()?;
    let dim = spec.dim();
    let k = spec.classes;

    let mut rng = spec.seed.derive(0).rng();
    let labelled: Vec<(Vec<f64>, usize)> =
        (0..spec.n_l).map(|i| i % k).map(|c| (spec.draw(c, &mut rng), c)).collect();

    let mut rng = spec.seed.derive(2).rng();
    let test: Vec<(Vec<f64>, usize)> =
        (0..spec.n_test).map(|i| i % k).map(|c| (spec.draw(c, &mut rng), c)).collect();

    let n_ood = (spec.n_u as f64 * spec.pct_ood / 100.0).round() as usize;
    let mut rng = spec.seed.derive(1).rng();
    let mut pool: Vec<(Vec<f64>, bool)> =
        (0..spec.n_u - n_ood)
        .map(|_| {
            let c = rng.random_range(0..k);
            (spec.draw(c, &mut rng), false)
        })
        .collect();

    let mut rng = spec.seed.derive(3).rng();
    match &spec.contaminant {
        Contaminant::None => {}
        Contaminant::ShiftedBlob { shift } => {
            let spread = match spec.shape {
                TaskShape::Blobs { spread, .. } => spread,
                TaskShape::Moons { noise } => noise.max(0.1),
            };
            for _ in 0..n_ood {
                let x = (0..dim).map(|_| shift + spread * rng.sample::<f64, _>(StandardNormal)).collect();
                pool.push((x, true));
            }
        }
        Contaminant::UniformNoise => {
            let bounds = bounding_box(&test, dim);
            for _ in 0..n_ood {
                let x = bounds.iter().map(|&(lo, hi)| rng.random_range(lo..hi)).collect();
                pool.push((x, true));
            }
        }
    }
    // interleave contaminants through the pool
    for i in (1..pool.len()).rev() {
        let j = rng.random_range(0..=i);
        pool.swap(i, j);
    }
    let (unlabelled, unlabelled_ood) = pool.into_iter().unzip();
    Ok(SyntheticTask { classes: k, dim, labelled, unlabelled, unlabelled_ood, test })
}
