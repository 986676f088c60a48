use super::mlp::MlpClassifier;
use super::ops::{rampup, ProbVector};
use crate::error::{Error, Result};

/// An input with a soft target.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub x: Vec<f64>,
    pub y: ProbVector,
}

/// Weighting of the unlabelled term at a given optimizer step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossSpec {
    pub gamma: f64,
    pub step: f64,
    pub rho: f64,
    pub l2_squared: bool,
}

impl LossSpec {
    pub fn unlabelled_weight(&self) -> f64 {
        self.gamma * rampup(self.step, self.rho)
    }
}

/// `−Σ_k y_k log p_k` given log-probabilities.
pub fn cross_entropy(y: &ProbVector, log_p: &[f64]) -> f64 {
    y.as_slice()
        .iter()
        .zip(log_p)
        .filter(|(yk, _)| **yk > 0.0)
        .map(|(yk, lp)| -yk * lp)
        .sum()
}

fn consistency(y: &ProbVector, p: &[f64], squared: bool) -> f64 {
    let sq: f64 = y.as_slice().iter().zip(p).map(|(a, b)| (a - b) * (a - b)).sum();
    if squared {
        sq
    } else {
        sq.sqrt()
    }
}

fn check_batches(labelled: &[Sample], unlabelled: &[Sample], spec: &LossSpec) -> Result<()> {
    if labelled.is_empty() {
        return Err(Error::Validation("labelled batch is empty".into()));
    }
    if unlabelled.is_empty() && spec.unlabelled_weight() > 0.0 {
        return Err(Error::Validation("unlabelled batch is empty but its weight is positive".into()));
    }
    Ok(())
}

/// Mean cross-entropy over the mixed labelled batch plus `r(t)·γ` times the
/// mean consistency distance over the mixed unlabelled batch.
pub fn mixmatch_loss(
    model: &MlpClassifier,
    labelled: &[Sample],
    unlabelled: &[Sample],
    spec: &LossSpec,
) -> Result<f64> {
    check_batches(labelled, unlabelled, spec)?;
    let sup = labelled
        .iter()
        .map(|s| cross_entropy(&s.y, &model.activations(&s.x).log_probs))
        .sum::<f64>()
        / labelled.len() as f64;
    let w = spec.unlabelled_weight();
    if w == 0.0 {
        return Ok(sup);
    }
    let unsup = unlabelled
        .iter()
        .map(|s| consistency(&s.y, &model.activations(&s.x).probs, spec.l2_squared))
        .sum::<f64>()
        / unlabelled.len() as f64;
    Ok(sup + w * unsup)
}

/// Loss value and its gradient with respect to every model parameter.
pub fn mixmatch_loss_and_grad(
    model: &MlpClassifier,
    labelled: &[Sample],
    unlabelled: &[Sample],
    spec: &LossSpec,
) -> Result<(f64, Vec<f64>)> {
    check_batches(labelled, unlabelled, spec)?;
    let mut grad = vec![0.0; model.params().len()];
    let mut loss = 0.0;

    let scale_l = 1.0 / labelled.len() as f64;
    for s in labelled {
        let act = model.activations(&s.x);
        loss += scale_l * cross_entropy(&s.y, &act.log_probs);
        let dz: Vec<f64> = act
            .probs
            .iter()
            .zip(s.y.as_slice())
            .map(|(p, y)| scale_l * (p - y))
            .collect();
        model.backprop(&s.x, &act, &dz, &mut grad);
    }

    let w = spec.unlabelled_weight();
    if w > 0.0 {
        let scale_u = w / unlabelled.len() as f64;
        for s in unlabelled {
            let act = model.activations(&s.x);
            let p = &act.probs;
            let dist = consistency(&s.y, p, spec.l2_squared);
            loss += scale_u * dist;
            // dL/dp, then through the softmax Jacobian: p ⊙ (g − p·g)
            let g: Vec<f64> = if spec.l2_squared {
                p.iter().zip(s.y.as_slice()).map(|(pk, yk)| 2.0 * (pk - yk)).collect()
            } else if dist > 0.0 {
                p.iter().zip(s.y.as_slice()).map(|(pk, yk)| (pk - yk) / dist).collect()
            } else {
                vec![0.0; p.len()]
            };
            let pg: f64 = p.iter().zip(&g).map(|(a, b)| a * b).sum();
            let dz: Vec<f64> = p.iter().zip(&g).map(|(pk, gk)| scale_u * pk * (gk - pg)).collect();
            model.backprop(&s.x, &act, &dz, &mut grad);
        }
    }
    Ok((loss, grad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Seed;
    use crate::mixmatch::MlpLayout;
    use rand::RngExt;

    const LAYOUT: MlpLayout = MlpLayout { inputs: 2, hidden1: 3, hidden2: 3, classes: 2 };

    fn spec(gamma: f64, step: f64) -> LossSpec {
        LossSpec { gamma, step, rho: 100.0, l2_squared: true }
    }

    /// A network whose output bias swamps everything, so softmax is exactly one-hot.
    fn certain_model(class: usize) -> MlpClassifier {
        let mut m = MlpClassifier::new(LAYOUT, Seed(0));
        let n = m.params().len();
        m.params_mut()[n - 2 + class] = 1000.0;
        m
    }

    fn random_batch(n: usize, seed: u64) -> Vec<Sample> {
        let mut rng = Seed(seed).rng();
        (0..n)
            .map(|_| {
                let a: f64 = rng.random();
                Sample {
                    x: vec![rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)],
                    y: ProbVector::new(vec![a, 1.0 - a]).unwrap(),
                }
            })
            .collect()
    }

    #[test]
    fn perfect_predictions_give_zero_loss_and_gradient() {
        let m = certain_model(1);
        let batch = vec![
            Sample { x: vec![0.3, -0.2], y: ProbVector::one_hot(1, 2) },
            Sample { x: vec![-1.0, 2.0], y: ProbVector::one_hot(1, 2) },
        ];
        let u = random_batch(3, 1);
        assert_eq!(mixmatch_loss(&m, &batch, &u, &spec(25.0, 0.0)).unwrap(), 0.0);
        let (l, g) = mixmatch_loss_and_grad(&m, &batch, &[], &spec(0.0, 0.0)).unwrap();
        assert_eq!(l, 0.0);
        assert!(g.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn gamma_zero_is_supervised_cross_entropy() {
        let m = MlpClassifier::new(LAYOUT, Seed(5));
        let l = random_batch(4, 2);
        let u = random_batch(4, 3);
        let with_u = mixmatch_loss(&m, &l, &u, &spec(0.0, 500.0)).unwrap();
        let without = mixmatch_loss(&m, &l, &[], &spec(0.0, 500.0)).unwrap();
        assert_eq!(with_u, without);
    }

    #[test]
    fn hand_computed_two_term_sum() {
        let m = MlpClassifier::new(LAYOUT, Seed(9));
        let l = random_batch(2, 4);
        let u = random_batch(3, 5);
        let ce: f64 = l
            .iter()
            .map(|s| {
                let p = m.forward(&s.x);
                -(0..2).map(|k| s.y.as_slice()[k] * p.as_slice()[k].ln()).sum::<f64>()
            })
            .sum::<f64>()
            / 2.0;
        let l2: f64 = u
            .iter()
            .map(|s| {
                let p = m.forward(&s.x);
                (0..2).map(|k| (s.y.as_slice()[k] - p.as_slice()[k]).powi(2)).sum::<f64>()
            })
            .sum::<f64>()
            / 3.0;
        let expected = ce + 25.0 * 0.5 * l2;
        let got = mixmatch_loss(&m, &l, &u, &spec(25.0, 50.0)).unwrap();
        assert!((got - expected).abs() < 1e-9, "{got} vs {expected}");
        let (lg, _) = mixmatch_loss_and_grad(&m, &l, &u, &spec(25.0, 50.0)).unwrap();
        assert!((lg - got).abs() < 1e-12);
    }

    #[test]
    fn empty_batches_rejected() {
        let m = MlpClassifier::new(LAYOUT, Seed(0));
        assert!(mixmatch_loss(&m, &[], &random_batch(1, 0), &spec(1.0, 10.0)).is_err());
        assert!(mixmatch_loss(&m, &random_batch(1, 0), &[], &spec(1.0, 10.0)).is_err());
    }

    fn fd_check(l2_squared: bool) {
        let layout = MlpLayout { inputs: 3, hidden1: 4, hidden2: 3, classes: 3 };
        let mut rng = Seed(77).rng();
        for trial in 0..5 {
            let mut m = MlpClassifier::new(layout, Seed(trial));
            let mk = |rng: &mut crate::data::Pcg32| {
                let raw: Vec<f64> = (0..3).map(|_| rng.random_range(0.05..1.0)).collect();
                let s: f64 = raw.iter().sum();
                Sample {
                    x: (0..3).map(|_| rng.random_range(-1.5..1.5)).collect(),
                    y: ProbVector::new(raw.iter().map(|v| v / s).collect()).unwrap(),
                }
            };
            let l: Vec<Sample> = (0..3).map(|_| mk(&mut rng)).collect();
            let u: Vec<Sample> = (0..3).map(|_| mk(&mut rng)).collect();
            let sp = LossSpec { gamma: 3.0, step: 40.0, rho: 100.0, l2_squared };
            let (_, g) = mixmatch_loss_and_grad(&m, &l, &u, &sp).unwrap();
            let h = 1e-5;
            for (i, &gi) in g.iter().enumerate() {
                let orig = m.params()[i];
                m.params_mut()[i] = orig + h;
                let up = mixmatch_loss(&m, &l, &u, &sp).unwrap();
                m.params_mut()[i] = orig - h;
                let down = mixmatch_loss(&m, &l, &u, &sp).unwrap();
                m.params_mut()[i] = orig;
                let fd = (up - down) / (2.0 * h);
                let rel = (fd - gi).abs() / fd.abs().max(gi.abs()).max(1e-6);
                assert!(rel < 1e-4, "param {i}: analytic {gi} vs fd {fd}");
            }
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        fd_check(true);
        fd_check(false);
    }
}
