//! Paired significance testing and linear correlation.

mod pearson;
mod wilcoxon;

pub use pearson::{pearson, PearsonResult};
pub use wilcoxon::{
    signed_ranks, wilcoxon_signed_rank, WilcoxonMethod, WilcoxonResult, EXACT_MAX_N,
};
