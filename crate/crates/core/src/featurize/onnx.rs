use std::path::Path;

use tract_onnx::prelude::*;

use crate::error::{Error, Result};

type Plan = std::sync::Arc<TypedSimplePlan>;

/// A loaded ONNX feature extractor for fixed `1 × c × h × w` inputs.
pub struct OnnxRunner {
    plan: Plan,
    shape: [usize; 4],
    out_dim: usize,
}

impl std::fmt::Debug for OnnxRunner {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OnnxRunner")
            .field("shape", &self.shape)
            .field("out_dim", &self.out_dim)
            .finish_non_exhaustive()
    }
}

fn err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Extractor(format!("{}: {e}", path.display()))
}

impl OnnxRunner {
    pub fn load(path: &Path, c: usize, h: usize, w: usize, out_dim: usize) -> Result<Self> {
        let shape = [1, c, h, w];
        let plan = tract_onnx::onnx()
            .model_for_path(path)
            .and_then(|m| m.with_input_fact(0, f32::fact(shape).into()))
            .and_then(|m| m.into_optimized())
            .and_then(|m| m.into_runnable())
            .map_err(|e| err(path, e))?;
        let runner = Self { plan, shape, out_dim };
        // probe once so a wrong output size is reported before any real work
        runner.run(&vec![0.0; c * h * w])?;
        Ok(runner)
    }

    /// Features for one standardized image given in `h, w, c` order.
    pub fn run(&self, image: &[f64]) -> Result<Vec<f32>> {
        let [_, c, h, w] = self.shape;
        let mut chw = vec![0f32; c * h * w];
        for y in 0..h {
            for x in 0..w {
                for k in 0..c {
                    chw[(k * h + y) * w + x] = image[(y * w + x) * c + k] as f32;
                }
            }
        }
        let input = Tensor::from_shape(&self.shape, &chw)
            .map_err(|e| Error::Extractor(e.to_string()))?;
        let outputs = self
            .plan
            .run(tvec!(input.into()))
            .map_err(|e| Error::Extractor(format!("inference failed: {e}")))?;
        let view = outputs[0]
            .to_plain_array_view::<f32>()
            .map_err(|e| Error::Extractor(format!("model output is not f32: {e}")))?;
        let out: Vec<f32> = view.iter().copied().collect();
        if out.len() != self.out_dim {
            return Err(Error::Extractor(format!(
                "model output has {} values, expected output_dim {}",
                out.len(),
                self.out_dim
            )));
        }
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::Extractor("model produced non-finite features".into()));
        }
        Ok(out)
    }
}
