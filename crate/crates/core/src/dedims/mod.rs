//! Deep dataset dissimilarity measures.
//!
//! Each measure compares a labelled feature set `S_a` with an unlabelled
//! one `S_b` over `C` sampling rounds. In round `c` two fresh `τ`-row
//! subsamples give the inter-dataset value `d̂_c`; two further independent
//! subsamples of `S_a` give the intra-dataset reference `ď_c`. The reported
//! distance is the mean of `|d̂_c − ď_c|`, with a paired two-sided Wilcoxon
//! test of `d̂` against `ď`.
//!
//! Round values are one scalar per round: the mean nearest-neighbour
//! distance for `l1`/`l2`, and the sum of per-dimension histogram
//! distances for `js`/`cos`.

mod density;
mod minkowski;
mod subsample;

pub use density::{
    bin_index, cosine_distance, density_distance_round, js_divergence, shared_edges,
    shared_histograms, DensityKind, Histogram,
};
pub use minkowski::nn_distance_round;
pub use subsample::{sample_indices, subsample_pair};

use serde::Serialize;

pub use crate::data::tables::Measure;
use crate::data::{FeatureMatrix, Seed};
use crate::error::{Error, Result};
use crate::stats::{wilcoxon_signed_rank, WilcoxonMethod};

pub const DEFAULT_TAU: usize = 80;
pub const DEFAULT_ROUNDS: usize = 30;
pub const DEFAULT_BINS: usize = 10;
/// Reports with a Wilcoxon p-value above this are flagged low-confidence.
pub const LOW_CONFIDENCE_P: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DedimParams {
    pub measure: Measure,
    pub tau: usize,
    pub rounds: usize,
    pub bins: usize,
    pub seed: Seed,
}

impl Default for DedimParams {
    fn default() -> Self {
        Self {
            measure: Measure::Cos,
            tau: DEFAULT_TAU,
            rounds: DEFAULT_ROUNDS,
            bins: DEFAULT_BINS,
            seed: Seed(0),
        }
    }
}

impl DedimParams {
    pub fn new(measure: Measure) -> Self {
        Self {
            measure,
            ..Self::default()
        }
    }

    pub fn validate(&self, a: &FeatureMatrix, b: &FeatureMatrix) -> Result<()> {
        if a.cols() != b.cols() {
            return Err(Error::DimensionMismatch {
                left: a.cols(),
                right: b.cols(),
            });
        }
        let min_rows = a.rows().min(b.rows());
        if self.tau < 2 || self.tau > min_rows {
            return Err(Error::Parameter(format!(
                "tau must satisfy 2 <= tau <= {min_rows} (smallest dataset), got {}",
                self.tau
            )));
        }
        if self.rounds < 1 {
            return Err(Error::Parameter("rounds must be at least 1".into()));
        }
        if self.bins < 2 {
            return Err(Error::Parameter(format!(
                "bins must be at least 2, got {}",
                self.bins
            )));
        }
        Ok(())
    }
}

/// Records how the significance value was obtained.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignificanceInfo {
    pub test: &'static str,
    pub alternative: &'static str,
    pub pairing: &'static str,
    pub method: WilcoxonMethod,
    pub n_effective: usize,
    pub w_statistic: f64,
}

/// Field order here is the serialized key order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceReport {
    pub measure: Measure,
    pub d_bar: f64,
    pub p_value: f64,
    pub low_confidence: bool,
    pub significance: SignificanceInfo,
    pub inter: Vec<f64>,
    pub intra: Vec<f64>,
    pub diffs: Vec<f64>,
    pub params: DedimParams,
}

impl DistanceReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }
}

/// One round value between two equally sized subsamples.
pub fn round_value(a: &FeatureMatrix, b: &FeatureMatrix, measure: Measure, bins: usize) -> Result<f64> {
    match measure {
        Measure::L1 => nn_distance_round(a, b, 1),
        Measure::L2 => nn_distance_round(a, b, 2),
        Measure::Js => density_distance_round(a, b, DensityKind::JensenShannon, bins),
        Measure::Cos => density_distance_round(a, b, DensityKind::Cosine, bins),
    }
}

/// `(d̂_c, ď_c)` for round `c`, a pure function of the inputs and `c`.
fn run_round(a: &FeatureMatrix, b: &FeatureMatrix, params: &DedimParams, c: u64) -> Result<(f64, f64)> {
    // inter and intra share the round seed, so S_b = S_a gives d_c = 0
    let round_seed = params.seed.derive(c);
    let (ha, hb) = subsample_pair(a, b, params.tau, round_seed)?;
    let inter = round_value(&ha, &hb, params.measure, params.bins)?;
    let (ra, rb) = subsample_pair(a, a, params.tau, round_seed)?;
    let intra = round_value(&ra, &rb, params.measure, params.bins)?;
    Ok((inter, intra))
}

/// Runs all rounds sequentially on the calling thread.
pub fn dedim(a: &FeatureMatrix, b: &FeatureMatrix, params: &DedimParams) -> Result<DistanceReport> {
    params.validate(a, b)?;
    let rounds = (1..=params.rounds as u64)
        .map(|c| run_round(a, b, params, c))
        .collect::<Result<Vec<_>>>()?;
    assemble(rounds, params)
}

/// Same as [`dedim`], spreading rounds over `threads` workers. The output
/// does not depend on `threads`.
pub fn dedim_parallel(
    a: &FeatureMatrix,
    b: &FeatureMatrix,
    params: &DedimParams,
    threads: usize,
) -> Result<DistanceReport> {
    use rayon::prelude::*;

    if threads <= 1 {
        return dedim(a, b, params);
    }
    params.validate(a, b)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Parameter(format!("cannot build thread pool: {e}")))?;
    let rounds = pool.install(|| {
        (1..=params.rounds as u64)
            .into_par_iter()
            .map(|c| run_round(a, b, params, c))
            .collect::<Result<Vec<_>>>()
    })?;
    assemble(rounds, params)
}

fn assemble(rounds: Vec<(f64, f64)>, params: &DedimParams) -> Result<DistanceReport> {
    let (inter, intra): (Vec<f64>, Vec<f64>) = rounds.into_iter().unzip();
    let diffs: Vec<f64> = inter.iter().zip(&intra).map(|(x, y)| (x - y).abs()).collect();
    let d_bar = diffs.iter().sum::<f64>() / diffs.len() as f64;
    let w = wilcoxon_signed_rank(&inter, &intra)?;
    Ok(DistanceReport {
        measure: params.measure,
        d_bar,
        p_value: w.p_value,
        low_confidence: w.p_value > LOW_CONFIDENCE_P,
        significance: SignificanceInfo {
            test: "wilcoxon_signed_rank",
            alternative: "two-sided",
            pairing: "inter_vs_intra_by_round",
            method: w.method,
            n_effective: w.n_effective,
            w_statistic: w.w_statistic,
        },
        inter,
        intra,
        diffs,
        params: *params,
    })
}
