use crate::data::{uniform_below, FeatureMatrix, Seed};
use crate::error::{Error, Result};

/// `tau` distinct indices from `0..n` by a partial Fisher–Yates shuffle.
pub fn sample_indices(n: usize, tau: usize, seed: Seed) -> Result<Vec<usize>> {
    if tau > n {
        return Err(Error::Parameter(format!(
            "subsample size tau={tau} exceeds dataset size {n}"
        )));
    }
    if n > u32::MAX as usize {
        return Err(Error::Parameter(format!("dataset too large to sample: {n} rows")));
    }
    let mut rng = seed.rng();
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..tau {
        let j = i + uniform_below(&mut rng, (n - i) as u32) as usize;
        idx.swap(i, j);
    }
    idx.truncate(tau);
    Ok(idx)
}

/// Draws `tau` rows without replacement from each matrix. The two draws use
/// sub-seeds 0 and 1 of `round_seed`.
pub fn subsample_pair(
    a: &FeatureMatrix,
    b: &FeatureMatrix,
    tau: usize,
    round_seed: Seed,
) -> Result<(FeatureMatrix, FeatureMatrix)> {
    let ia = sample_indices(a.rows(), tau, round_seed.derive(0))?;
    let ib = sample_indices(b.rows(), tau, round_seed.derive(1))?;
    Ok((a.select_rows(&ia)?, b.select_rows(&ib)?))
}
