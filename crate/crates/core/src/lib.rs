//! Deep dataset dissimilarity measures and ante hoc ranking of unlabelled
//! datasets for semi-supervised learning under class distribution mismatch.
//!
//! - [`data`]: feature matrices, image stacks, file formats, seeding.
//! - [`featurize`]: preprocessing, feature extractors, noise datasets.
//! - [`dedims`]: the four dissimilarity measures (`l1`, `l2`, `js`, `cos`).
//! - [`stats`]: Wilcoxon signed-rank test and Pearson correlation.
//! - [`ranking`]: candidate ranking and distance/accuracy correlation.
//! - [`mixmatch`]: a small MixMatch trainer for synthetic tasks.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod data;
pub mod dedims;
pub mod error;
pub mod featurize;
pub mod mixmatch;
pub mod ranking;
pub mod stats;

pub use data::{FeatureMatrix, ImageSet, Seed};
pub use dedims::{dedim, dedim_parallel, DedimParams, DistanceReport, Measure};
pub use error::{Error, Result};
pub use ranking::{rank_candidates, RankingReport};
