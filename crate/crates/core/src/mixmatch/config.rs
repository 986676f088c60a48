use serde::{Deserialize, Serialize};

use crate::data::Seed;
use crate::error::{Error, Result};

/// Training hyperparameters. Defaults follow the reference MixMatch
/// settings (`K = 2`, `T = 0.5`, `α = 0.75`, `γ = 25`, ramp-up over 3000
/// steps, batch 16, learning rate 2e-4, weight decay 1e-4, 50 epochs).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MixMatchConfig {
    /// Augmented copies per unlabelled point when guessing labels.
    pub k: usize,
    /// Sharpening temperature.
    pub temperature: f64,
    /// Beta(α, α) parameter for MixUp.
    pub alpha: f64,
    /// Weight of the unlabelled consistency term.
    pub gamma: f64,
    /// Ramp-up length in optimizer steps.
    pub rampup_rho: f64,
    pub batch_size: usize,
    pub lr: f64,
    pub weight_decay: f64,
    pub epochs: usize,
    pub steps_per_epoch: usize,
    /// Width of both hidden layers.
    pub hidden: usize,
    /// Augmentation jitter, as a fraction of the labelled feature scale.
    pub jitter: f64,
    /// Squared (`true`) or plain Euclidean consistency term.
    pub l2_squared: bool,
    pub seed: Seed,
}

impl Default for MixMatchConfig {
    fn default() -> Self {
        Self {
            k: 2,
            temperature: 0.5,
            alpha: 0.75,
            gamma: 25.0,
            rampup_rho: 3000.0,
            batch_size: 16,
            lr: 0.0002,
            weight_decay: 0.0001,
            epochs: 50,
            steps_per_epoch: 32,
            hidden: 32,
            jitter: 0.1,
            l2_squared: true,
            seed: Seed(0),
        }
    }
}

impl MixMatchConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Parameter(msg));
        if self.k < 1 {
            return bad(format!("K must be at least 1, got {}", self.k));
        }
        if !(self.temperature > 0.0) {
            return bad(format!("temperature must be positive, got {}", self.temperature));
        }
        if !(self.alpha > 0.0) {
            return bad(format!("alpha must be positive, got {}", self.alpha));
        }
        if !(self.gamma >= 0.0) {
            return bad(format!("gamma must be non-negative, got {}", self.gamma));
        }
        if !(self.rampup_rho > 0.0) {
            return bad(format!("rampup_rho must be positive, got {}", self.rampup_rho));
        }
        if self.batch_size == 0 || self.epochs == 0 || self.steps_per_epoch == 0 || self.hidden == 0 {
            return bad("batch_size, epochs, steps_per_epoch and hidden must be positive".into());
        }
        if !(self.lr > 0.0) || !(self.weight_decay >= 0.0) || !(self.jitter >= 0.0) {
            return bad("lr must be positive; weight_decay and jitter non-negative".into());
        }
        Ok(())
    }
}
