//! A small, self-contained MixMatch trainer on synthetic low-dimensional
//! tasks: label guessing over `K` jittered copies, temperature sharpening,
//! MixUp over the pooled labelled and pseudo-labelled batch, and the
//! cross-entropy plus ramped consistency loss, optimised with SGD.

mod config;
mod loss;
mod mlp;
mod ops;
mod task;
mod train;

pub use config::MixMatchConfig;
pub use loss::{cross_entropy, mixmatch_loss, mixmatch_loss_and_grad, LossSpec, Sample};
pub use mlp::{MlpClassifier, MlpLayout};
pub use ops::{guess_labels, jitter, mixup, mixup_with_lambda, rampup, sharpen, ProbVector};
pub use task::{gen_synthetic_task, Contaminant, SyntheticTask, TaskShape, TaskSpec};
pub use train::{accuracy, train_mixmatch, EpochMetrics, TrainMetrics};
