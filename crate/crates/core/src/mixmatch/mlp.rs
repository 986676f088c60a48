use rand_distr::StandardNormal;
use rand::RngExt;

use super::ops::ProbVector;
use crate::data::Seed;

/// Input width, two tanh hidden layers and a softmax output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MlpLayout {
    pub inputs: usize,
    pub hidden1: usize,
    pub hidden2: usize,
    pub classes: usize,
}

impl MlpLayout {
    fn offsets(&self) -> [usize; 7] {
        let w1 = self.inputs * self.hidden1;
        let w2 = self.hidden1 * self.hidden2;
        let w3 = self.hidden2 * self.classes;
        let mut o = [0; 7];
        let sizes = [w1, self.hidden1, w2, self.hidden2, w3, self.classes];
        for (i, s) in sizes.iter().enumerate() {
            o[i + 1] = o[i] + s;
        }
        o
    }

    pub fn n_params(&self) -> usize {
        self.offsets()[6]
    }
}

/// Multilayer perceptron whose parameters live in one flat vector:
/// `W1 (in×h1), b1, W2 (h1×h2), b2, W3 (h2×classes), b3`, row-major.
#[derive(Debug, Clone)]
pub struct MlpClassifier {
    layout: MlpLayout,
    params: Vec<f64>,
}

pub(crate) struct Activations {
    a1: Vec<f64>,
    a2: Vec<f64>,
    pub(crate) probs: Vec<f64>,
    pub(crate) log_probs: Vec<f64>,
}

fn affine(x: &[f64], w: &[f64], b: &[f64]) -> Vec<f64> {
    let out = b.len();
    let mut z = b.to_vec();
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0.0 {
            continue;
        }
        let row = &w[i * out..(i + 1) * out];
        for (zj, wj) in z.iter_mut().zip(row) {
            *zj += xi * wj;
        }
    }
    z
}

impl MlpClassifier {
    /// Xavier-style initialisation with zero biases.
    pub fn new(layout: MlpLayout, seed: Seed) -> Self {
        let mut rng = seed.rng();
        let o = layout.offsets();
        let mut params = vec![0.0; layout.n_params()];
        let blocks = [
            (o[0], o[1], layout.inputs, layout.hidden1),
            (o[2], o[3], layout.hidden1, layout.hidden2),
            (o[4], o[5], layout.hidden2, layout.classes),
        ];
        for (start, end, fan_in, fan_out) in blocks {
            let scale = (2.0 / (fan_in + fan_out) as f64).sqrt();
            for p in &mut params[start..end] {
                *p = scale * rng.sample::<f64, _>(StandardNormal);
            }
        }
        Self { layout, params }
    }

    pub fn from_params(layout: MlpLayout, params: Vec<f64>) -> Self {
        assert_eq!(params.len(), layout.n_params(), "parameter count");
        Self { layout, params }
    }

    pub fn layout(&self) -> MlpLayout {
        self.layout
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    fn block(&self, i: usize) -> &[f64] {
        let o = self.layout.offsets();
        &self.params[o[i]..o[i + 1]]
    }

    pub(crate) fn activations(&self, x: &[f64]) -> Activations {
        debug_assert_eq!(x.len(), self.layout.inputs);
        let a1: Vec<f64> = affine(x, self.block(0), self.block(1)).into_iter().map(f64::tanh).collect();
        let a2: Vec<f64> = affine(&a1, self.block(2), self.block(3)).into_iter().map(f64::tanh).collect();
        let z = affine(&a2, self.block(4), self.block(5));
        let max = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let exps: Vec<f64> = z.iter().map(|v| (v - max).exp()).collect();
        let sum: f64 = exps.iter().sum();
        let lse = max + sum.ln();
        Activations {
            a1,
            a2,
            probs: exps.iter().map(|e| e / sum).collect(),
            log_probs: z.iter().map(|v| v - lse).collect(),
        }
    }

    pub fn forward(&self, x: &[f64]) -> ProbVector {
        ProbVector::new_unchecked(self.activations(x).probs)
    }

    pub fn predict(&self, x: &[f64]) -> usize {
        self.forward(x).argmax()
    }

    /// Adds `∂L/∂θ` into `grad` given the input, its activations and
    /// `∂L/∂z` at the output logits.
    pub(crate) fn backprop(&self, x: &[f64], act: &Activations, dz3: &[f64], grad: &mut [f64]) {
        let l = self.layout;
        let o = l.offsets();
        let (g_w1, rest) = grad.split_at_mut(o[1]);
        let (g_b1, rest) = rest.split_at_mut(o[2] - o[1]);
        let (g_w2, rest) = rest.split_at_mut(o[3] - o[2]);
        let (g_b2, rest) = rest.split_at_mut(o[4] - o[3]);
        let (g_w3, g_b3) = rest.split_at_mut(o[5] - o[4]);

        let w3 = self.block(4);
        let mut dz2 = vec![0.0; l.hidden2];
        for i in 0..l.hidden2 {
            let row = &w3[i * l.classes..(i + 1) * l.classes];
            let mut acc = 0.0;
            for j in 0..l.classes {
                g_w3[i * l.classes + j] += act.a2[i] * dz3[j];
                acc += row[j] * dz3[j];
            }
            dz2[i] = acc * (1.0 - act.a2[i] * act.a2[i]);
        }
        for (g, d) in g_b3.iter_mut().zip(dz3) {
            *g += d;
        }

        let w2 = self.block(2);
        let mut dz1 = vec![0.0; l.hidden1];
        for i in 0..l.hidden1 {
            let row = &w2[i * l.hidden2..(i + 1) * l.hidden2];
            let mut acc = 0.0;
            for j in 0..l.hidden2 {
                g_w2[i * l.hidden2 + j] += act.a1[i] * dz2[j];
                acc += row[j] * dz2[j];
            }
            dz1[i] = acc * (1.0 - act.a1[i] * act.a1[i]);
        }
        for (g, d) in g_b2.iter_mut().zip(&dz2) {
            *g += d;
        }

        for (i, &xi) in x.iter().enumerate() {
            for j in 0..l.hidden1 {
                g_w1[i * l.hidden1 + j] += xi * dz1[j];
            }
        }
        for (g, d) in g_b1.iter_mut().zip(&dz1) {
            *g += d;
        }
    }
}
