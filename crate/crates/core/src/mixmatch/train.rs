use rand::{Rng, RngExt};
use serde::Serialize;

use super::config::MixMatchConfig;
use super::loss::{mixmatch_loss_and_grad, LossSpec, Sample};
use super::mlp::{MlpClassifier, MlpLayout};
use super::ops::{guess_labels, jitter, mixup, ProbVector};
use super::task::SyntheticTask;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpochMetrics {
    pub epoch: usize,
    pub test_accuracy: f64,
    pub mean_loss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrainMetrics {
    pub epochs: Vec<EpochMetrics>,
    pub best_accuracy: f64,
    pub final_accuracy: f64,
}

/// Endless reshuffled pass over `0..n`.
struct Cycler {
    order: Vec<usize>,
    pos: usize,
}

impl Cycler {
    fn new(n: usize) -> Self {
        Self { order: (0..n).collect(), pos: n }
    }

    fn next<R: Rng>(&mut self, rng: &mut R) -> usize {
        if self.pos == self.order.len() {
            shuffle(&mut self.order, rng);
            self.pos = 0;
        }
        self.pos += 1;
        self.order[self.pos - 1]
    }
}

fn shuffle<T, R: Rng>(v: &mut [T], rng: &mut R) {
    for i in (1..v.len()).rev() {
        let j = rng.random_range(0..=i);
        v.swap(i, j);
    }
}

/// Root mean per-dimension standard deviation of the labelled inputs.
fn feature_scale(task: &SyntheticTask) -> f64 {
    let n = task.labelled.len() as f64;
    let mut acc = 0.0;
    for j in 0..task.dim {
        let mean = task.labelled.iter().map(|(x, _)| x[j]).sum::<f64>() / n;
        acc += task.labelled.iter().map(|(x, _)| (x[j] - mean).powi(2)).sum::<f64>() / n;
    }
    (acc / task.dim as f64).sqrt()
}

pub fn accuracy(model: &MlpClassifier, data: &[(Vec<f64>, usize)]) -> f64 {
    let hits = data.iter().filter(|(x, c)| model.predict(x) == *c).count();
    hits as f64 / data.len() as f64
}

/// Trains a fresh classifier with MixMatch and reports test accuracy after
/// every epoch. With an empty unlabelled pool the unlabelled term vanishes
/// and training is MixUp-regularised supervised learning.
pub fn train_mixmatch(task: &SyntheticTask, cfg: &MixMatchConfig) -> Result<TrainMetrics> {
    cfg.validate()?;
    if task.labelled.is_empty() || task.test.is_empty() {
        return Err(Error::Validation("task needs labelled and test points".into()));
    }
    let layout = MlpLayout { inputs: task.dim, hidden1: cfg.hidden, hidden2: cfg.hidden, classes: task.classes };
    let mut model = MlpClassifier::new(layout, cfg.seed.derive(0));
    let mut rng = cfg.seed.derive(1).rng();
    let sigma = cfg.jitter * feature_scale(task);
    let has_u = !task.unlabelled.is_empty();
    let gamma = if has_u { cfg.gamma } else { 0.0 };
    let b = cfg.batch_size;

    let mut lab = Cycler::new(task.labelled.len());
    let mut unl = Cycler::new(task.unlabelled.len());
    let mut epochs = Vec::with_capacity(cfg.epochs);
    let mut step = 0usize;

    for epoch in 1..=cfg.epochs {
        let mut loss_sum = 0.0;
        for _ in 0..cfg.steps_per_epoch {
            let x_hat: Vec<Sample> = (0..b)
                .map(|_| {
                    let (x, c) = &task.labelled[lab.next(&mut rng)];
                    Sample { x: jitter(x, sigma, &mut rng), y: ProbVector::one_hot(*c, task.classes) }
                })
                .collect();

            let mut u_hat: Vec<Sample> = Vec::new();
            if has_u {
                for _ in 0..b {
                    let u = &task.unlabelled[unl.next(&mut rng)];
                    let mut copies = Vec::with_capacity(cfg.k);
                    let q = guess_labels(&model, u, cfg.k, cfg.temperature, &mut |x| {
                        let a = jitter(x, sigma, &mut rng);
                        copies.push(a.clone());
                        a
                    });
                    u_hat.extend(copies.into_iter().map(|x| Sample { x, y: q.clone() }));
                }
            }

            let mut pool: Vec<&Sample> = x_hat.iter().chain(&u_hat).collect();
            shuffle(&mut pool, &mut rng);
            let mix = |s: &Sample, w: &Sample, rng: &mut crate::data::Pcg32| -> Result<Sample> {
                let (x, y, _) = mixup(&s.x, &s.y, &w.x, &w.y, cfg.alpha, rng)?;
                Ok(Sample { x, y })
            };
            let x_mixed = x_hat
                .iter()
                .zip(&pool)
                .map(|(s, w)| mix(s, w, &mut rng))
                .collect::<Result<Vec<_>>>()?;
            let u_mixed = u_hat
                .iter()
                .zip(&pool[b..])
                .map(|(s, w)| mix(s, w, &mut rng))
                .collect::<Result<Vec<_>>>()?;

            let spec = LossSpec { gamma, step: step as f64, rho: cfg.rampup_rho, l2_squared: cfg.l2_squared };
            let (loss, grad) = mixmatch_loss_and_grad(&model, &x_mixed, &u_mixed, &spec)?;
            if !loss.is_finite() {
                return Err(Error::Training { step, msg: format!("loss became {loss}") });
            }
            for (p, g) in model.params_mut().iter_mut().zip(&grad) {
                *p -= cfg.lr * (g + cfg.weight_decay * *p);
            }
            if model.params().iter().any(|p| !p.is_finite()) {
                return Err(Error::Training { step, msg: "parameters became non-finite".into() });
            }
            loss_sum += loss;
            step += 1;
        }
        epochs.push(EpochMetrics {
            epoch,
            test_accuracy: accuracy(&model, &task.test),
            mean_loss: loss_sum / cfg.steps_per_epoch as f64,
        });
    }
    let best_accuracy = epochs.iter().map(|e| e.test_accuracy).fold(0.0, f64::max);
    let final_accuracy = epochs.last().map_or(0.0, |e| e.test_accuracy);
    Ok(TrainMetrics { epochs, best_accuracy, final_accuracy })
}
