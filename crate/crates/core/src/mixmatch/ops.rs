use rand::{Rng, RngExt};
use rand_distr::{Beta, StandardNormal};

use super::mlp::MlpClassifier;
use crate::error::{Error, Result};

/// A probability vector over classes.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() || p.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::Validation(format!("not a probability vector: {p:?}")));
        }
        let s: f64 = p.iter().sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(Error::Validation(format!("probabilities sum to {s}")));
        }
        Ok(Self(p))
    }

    pub(crate) fn new_unchecked(p: Vec<f64>) -> Self {
        Self(p)
    }

    pub fn one_hot(class: usize, classes: usize) -> Self {
        let mut p = vec![0.0; classes];
        p[class] = 1.0;
        Self(p)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn argmax(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &v)| if v > best.1 { (i, v) } else { best })
            .0
    }
}

/// `p_i^{1/T} / Σ_j p_j^{1/T}`, evaluated in log space.
pub fn sharpen(p: &ProbVector, temperature: f64) -> ProbVector {
    let inv = 1.0 / temperature;
    let logs: Vec<f64> = p
        .0
        .iter()
        .map(|&v| if v > 0.0 { v.ln() * inv } else { f64::NEG_INFINITY })
        .collect();
    let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut out: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
    let s: f64 = out.iter().sum();
    out.iter_mut().for_each(|v| *v /= s);
    ProbVector(out)
}

/// Additive Gaussian jitter with standard deviation `sigma`.
pub fn jitter<R: Rng + ?Sized>(x: &[f64], sigma: f64, rng: &mut R) -> Vec<f64> {
    x.iter()
        .map(|v| v + sigma * rng.sample::<f64, _>(StandardNormal))
        .collect()
}

/// Sharpened mean prediction over `k` augmented copies of `x`.
pub fn guess_labels(
    model: &MlpClassifier,
    x: &[f64],
    k: usize,
    temperature: f64,
    augment: &mut dyn FnMut(&[f64]) -> Vec<f64>,
) -> ProbVector {
    let mut mean = vec![0.0; model.layout().classes];
    for _ in 0..k {
        let p = model.forward(&augment(x));
        for (m, v) in mean.iter_mut().zip(p.as_slice()) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= k as f64);
    sharpen(&ProbVector(mean), temperature)
}

/// Interpolates two labelled points with weight `λ' = max(λ, 1 − λ)` on
/// the first.
pub fn mixup_with_lambda(
    xa: &[f64],
    ya: &ProbVector,
    xb: &[f64],
    yb: &ProbVector,
    lambda: f64,
) -> (Vec<f64>, ProbVector, f64) {
    let l = lambda.max(1.0 - lambda);
    let x = xa.iter().zip(xb).map(|(a, b)| l * a + (1.0 - l) * b).collect();
    let y = ya.0.iter().zip(&yb.0).map(|(a, b)| l * a + (1.0 - l) * b).collect();
    (x, ProbVector(y), l)
}

/// MixUp with `λ ~ Beta(α, α)`. Returns the mixed point, its label and `λ'`.
pub fn mixup<R: Rng + ?Sized>(
    xa: &[f64],
    ya: &ProbVector,
    xb: &[f64],
    yb: &ProbVector,
    alpha: f64,
    rng: &mut R,
) -> Result<(Vec<f64>, ProbVector, f64)> {
    let beta = Beta::new(alpha, alpha).map_err(|e| Error::Parameter(format!("Beta({alpha}, {alpha}): {e}")))?;
    let lambda: f64 = rng.sample(beta);
    Ok(mixup_with_lambda(xa, ya, xb, yb, lambda))
}

/// Linear ramp `t / ρ`, clamped to 1.
pub fn rampup(step: f64, rho: f64) -> f64 {
    (step / rho).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Seed;
    use proptest::prelude::*;

    fn pv(v: &[f64]) -> ProbVector {
        ProbVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn sharpen_examples() {
        assert_eq!(sharpen(&pv(&[0.5, 0.5]), 0.3).as_slice(), &[0.5, 0.5]);
        let s = sharpen(&pv(&[0.8, 0.2]), 0.5);
        assert!((s.as_slice()[0] - 0.64 / 0.68).abs() < 1e-12);
        assert!((s.as_slice()[0] - 0.9412).abs() < 1e-4);
        let p = pv(&[0.1, 0.7, 0.2]);
        let id = sharpen(&p, 1.0);
        for (a, b) in id.as_slice().iter().zip(p.as_slice()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn sharpen_low_temperature_is_one_hot() {
        let s = sharpen(&pv(&[0.3, 0.36, 0.34]), 1e-3);
        assert!((s.as_slice()[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn mixup_examples() {
        let (x, _, l) = mixup_with_lambda(&[0.0], &ProbVector::one_hot(0, 2), &[1.0], &ProbVector::one_hot(1, 2), 0.3);
        assert_eq!(l, 0.7);
        assert!((x[0] - 0.3).abs() < 1e-15);
        let y = pv(&[0.25, 0.75]);
        let mut rng = Seed(1).rng();
        let (x, ym, _) = mixup(&[2.0, -1.0], &y, &[2.0, -1.0], &y, 0.75, &mut rng).unwrap();
        assert_eq!(x, vec![2.0, -1.0]);
        for (a, b) in ym.as_slice().iter().zip(y.as_slice()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn rampup_examples() {
        assert_eq!(rampup(0.0, 3000.0), 0.0);
        assert_eq!(rampup(1500.0, 3000.0), 0.5);
        assert_eq!(rampup(6000.0, 3000.0), 1.0);
    }

    #[test]
    fn prob_vector_validation() {
        assert!(ProbVector::new(vec![0.5, 0.6]).is_err());
        assert!(ProbVector::new(vec![-0.1, 1.1]).is_err());
        assert!(ProbVector::new(vec![]).is_err());
    }

    fn simplex() -> impl Strategy<Value = ProbVector> {
        proptest::collection::vec(0.001f64..1.0, 2..6).prop_map(|v| {
            let s: f64 = v.iter().sum();
            ProbVector::new_unchecked(v.iter().map(|x| x / s).collect())
        })
    }

    proptest! {
        #[test]
        fn sharpen_preserves_simplex_and_argmax(p in simplex(), t in 0.05f64..3.0) {
            let s = sharpen(&p, t);
            prop_assert!(ProbVector::new(s.as_slice().to_vec()).is_ok());
            let max = p.as_slice().iter().cloned().fold(f64::MIN, f64::max);
            // ties at the max may resolve either way
            prop_assert!((p.as_slice()[s.argmax()] - max).abs() < 1e-12);
        }

        #[test]
        fn mixup_label_valid_and_nearer_first(
            ya in simplex(), lambda in 0.0f64..1.0, xa in -5.0f64..5.0, xb in -5.0f64..5.0,
        ) {
            let yb = ProbVector::one_hot(0, ya.as_slice().len());
            let (x, y, l) = mixup_with_lambda(&[xa], &ya, &[xb], &yb, lambda);
            prop_assert!(l >= 0.5);
            prop_assert!(ProbVector::new(y.into_vec()).is_ok());
            prop_assert!((x[0] - xa).abs() <= (x[0] - xb).abs() + 1e-12);
            // swapping inputs and lambda <-> 1 - lambda gives the same lambda'
            let (_, _, l2) = mixup_with_lambda(&[xb], &yb, &[xa], &ya, 1.0 - lambda);
            prop_assert!((l - l2).abs() < 1e-15);
        }

        #[test]
        fn rampup_monotone_bounded(a in 0.0f64..1e5, b in 0.0f64..1e5, rho in 1.0f64..1e4) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(rampup(lo, rho) <= rampup(hi, rho));
            prop_assert!((0.0..=1.0).contains(&rampup(a, rho)));
        }
    }
}
