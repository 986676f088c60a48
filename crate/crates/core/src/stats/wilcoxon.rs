//! Two-sided Wilcoxon signed-rank test on paired samples.
//!
//! Zero differences are dropped, tied magnitudes share their average rank,
//! and `W` is the smaller of the positive and negative rank sums. Up to
//! [`EXACT_MAX_N`] non-zero pairs the p-value is exact over all `2^n` sign
//! assignments; beyond that a tie- and continuity-corrected normal
//! approximation is used.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

pub const EXACT_MAX_N: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WilcoxonMethod {
    Exact,
    NormalApprox,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WilcoxonResult {
    pub w_statistic: f64,
    pub p_value: f64,
    pub n_effective: usize,
    pub method: WilcoxonMethod,
}

/// Non-zero differences `x - y` paired with their average ranks by
/// magnitude. Returned in input order.
pub fn signed_ranks(xs: &[f64], ys: &[f64]) -> Vec<(f64, f64)> {
    let diffs: Vec<f64> = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| x - y)
        .filter(|d| *d != 0.0)
        .collect();
    let mut order: Vec<usize> = (0..diffs.len()).collect();
    order.sort_by(|&a, &b| diffs[a].abs().total_cmp(&diffs[b].abs()));
    let mut ranks = vec![0.0; diffs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && diffs[order[j + 1]].abs() == diffs[order[i]].abs() {
            j += 1;
        }
        // positions i..=j (0-based) hold ranks i+1..=j+1
        let avg = (i + j + 2) as f64 / 2.0;
        for &k in &order[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    diffs.into_iter().zip(ranks).collect()
}

pub fn wilcoxon_signed_rank(xs: &[f64], ys: &[f64]) -> Result<WilcoxonResult> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    if xs.is_empty() {
        return Err(Error::Parameter("Wilcoxon test needs at least one pair".into()));
    }
    let ranked = signed_ranks(xs, ys);
    let n = ranked.len();
    if n == 0 {
        return Ok(WilcoxonResult {
            w_statistic: 0.0,
            p_value: 1.0,
            n_effective: 0,
            method: WilcoxonMethod::Exact,
        });
    }
    let w_plus: f64 = ranked.iter().filter(|(d, _)| *d > 0.0).map(|(_, r)| r).sum();
    let total = (n * (n + 1)) as f64 / 2.0;
    let w = w_plus.min(total - w_plus);

    if n <= EXACT_MAX_N {
        let p = exact_p(&ranked, w);
        Ok(WilcoxonResult {
            w_statistic: w,
            p_value: p,
            n_effective: n,
            method: WilcoxonMethod::Exact,
        })
    } else {
        let p = normal_p(&ranked, w_plus);
        Ok(WilcoxonResult {
            w_statistic: w,
            p_value: p,
            n_effective: n,
            method: WilcoxonMethod::NormalApprox,
        })
    }
}

/// Exact two-sided p-value: `2 · #{sign vectors with W+ ≤ w} / 2^n`.
///
/// Average ranks are multiples of ½, so doubled ranks are integers and the
/// null distribution of `W+` over all sign vectors is counted by a subset-sum
/// table rather than by visiting each vector.
fn exact_p(ranked: &[(f64, f64)], w: f64) -> f64 {
    let doubled: Vec<usize> = ranked.iter().map(|(_, r)| (2.0 * r).round() as usize).collect();
    let max_sum: usize = doubled.iter().sum();
    let mut counts = vec![0u64; max_sum + 1];
    counts[0] = 1;
    let mut reach = 0;
    for &r in &doubled {
        for s in (0..=reach).rev() {
            if counts[s] != 0 {
                counts[s + r] += counts[s];
            }
        }
        reach += r;
    }
    let limit = (2.0 * w).round() as usize;
    let below: u64 = counts[..=limit.min(max_sum)].iter().sum();
    let p = 2.0 * below as f64 / (1u64 << ranked.len()) as f64;
    p.min(1.0)
}

fn normal_p(ranked: &[(f64, f64)], w_plus: f64) -> f64 {
    let n = ranked.len() as f64;
    let mean = n * (n + 1.0) / 4.0;
    let mut mags: Vec<f64> = ranked.iter().map(|(d, _)| d.abs()).collect();
    mags.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < mags.len() {
        let mut j = i;
        while j + 1 < mags.len() && mags[j + 1] == mags[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        i = j + 1;
    }
    let var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    if var <= 0.0 {
        return 1.0;
    }
    let dev = ((w_plus - mean).abs() - 0.5).max(0.0);
    let z = dev / var.sqrt();
    let std_normal = Normal::standard();
    (2.0 * std_normal.sf(z)).clamp(0.0, 1.0)
}
