//! From image stacks to feature matrices: preprocessing, feature
//! extractors, and the synthetic noise datasets.

mod extractor;
mod imgb;
mod noise;
#[cfg(feature = "onnx")]
mod onnx;
mod png_dir;
mod preprocess;

pub use extractor::{extract_features, Extractor, RandomProjection};
pub use imgb::{decode_imgb, encode_imgb, load_imgb, save_imgb, IMGB_MAGIC, IMGB_VERSION};
pub use noise::{gen_gaussian_noise, gen_sap_noise, GAUSSIAN_NOISE_VARIANCE, NOISE_IMAGE_SIZE};
#[cfg(feature = "onnx")]
pub use onnx::OnnxRunner;
pub use png_dir::load_png_dir;
pub use preprocess::{compute_stats, resize, standardize, PreprocessStats, StandardizedImages, STD_FLOOR};
