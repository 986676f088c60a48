use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use mixmood::data::{load_fmat, save_fmat, tables, FeatureMatrix, Seed};
use mixmood::featurize::{
    compute_stats, extract_features, gen_gaussian_noise, gen_sap_noise, load_imgb, load_png_dir, resize, save_imgb,
    Extractor,
};
use mixmood::mixmatch::{gen_synthetic_task, train_mixmatch, MixMatchConfig, TaskSpec};
use mixmood::ranking::{correlate_tables, emit_ranking_json};
use mixmood::{dedim_parallel, rank_candidates, Error, Result};
use serde::{Deserialize, Serialize};

use crate::{CorrelateArgs, DemoArgs, DistanceArgs, ExtractorKind, FeaturizeArgs, GenNoiseArgs, NoiseKind, RankArgs};

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Error::io(path, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

pub fn distance(a: DistanceArgs) -> Result<()> {
    let labelled = load_fmat(&a.labelled)?;
    let unlabelled = load_fmat(&a.unlabelled)?;
    let report = dedim_parallel(&labelled, &unlabelled, &a.dedim.params(), a.dedim.threads)?;
    if report.low_confidence {
        eprintln!("note: p = {:.3} > 0.5, distance is low confidence", report.p_value);
    }
    emit(a.output.as_deref(), &with_newline(report.to_json()))
}

fn parse_candidate(spec: &str) -> (String, PathBuf) {
    match spec.split_once('=') {
        Some((name, path)) if !name.is_empty() => (name.to_owned(), PathBuf::from(path)),
        _ => {
            let path = PathBuf::from(spec);
            let name = path.file_stem().map_or_else(|| spec.to_owned(), |s| s.to_string_lossy().into_owned());
            (name, path)
        }
    }
}

pub fn rank(a: RankArgs) -> Result<()> {
    let labelled = load_fmat(&a.labelled)?;
    let labelled_id = a.labelled.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    let mut candidates: Vec<(String, FeatureMatrix)> = Vec::with_capacity(a.candidates.len());
    for spec in &a.candidates {
        let (name, path) = parse_candidate(spec);
        if candidates.iter().any(|(n, _)| *n == name) {
            return Err(Error::Validation(format!("duplicate candidate name `{name}`")));
        }
        candidates.push((name, load_fmat(&path)?));
    }
    let report = rank_candidates(&labelled_id, &labelled, &candidates, &a.dedim.params(), a.dedim.threads)?;
    for e in report.entries.iter().filter(|e| e.report.low_confidence) {
        eprintln!("note: candidate `{}` is low confidence (p = {:.3})", e.candidate_id, e.report.p_value);
    }
    emit(a.output.as_deref(), &with_newline(emit_ranking_json(&report)))?;
    let line = format!("best: {} (d_bar = {:.6})", report.best, report.best_entry().report.d_bar);
    if a.output.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
    Ok(())
}

pub fn correlate(a: CorrelateArgs) -> Result<()> {
    let (acc, dist) = match (&a.accuracies, &a.distances) {
        (Some(acc), Some(dist)) => (tables::load_accuracies(acc)?, tables::load_distances(dist)?),
        _ => tables::bundled_tables()?,
    };
    let table = correlate_tables(&acc, &dist)?;
    emit(a.output.as_deref(), &table.to_csv())
}

pub fn gen_noise(a: GenNoiseArgs) -> Result<()> {
    let seed = Seed(a.seed);
    let set = match a.kind {
        NoiseKind::Gaussian => gen_gaussian_noise(a.n, a.size, a.size, seed)?,
        NoiseKind::Sap => gen_sap_noise(a.n, a.size, a.size, seed)?,
    };
    save_imgb(&set, &a.output)
}

fn parse_size(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parameter(format!("--resize expects HxW or N, got `{s}`"));
    let (h, w) = match s.split_once(['x', 'X']) {
        Some((h, w)) => (h, w),
        None => (s, s),
    };
    let h: usize = h.trim().parse().map_err(|_| bad())?;
    let w: usize = w.trim().parse().map_err(|_| bad())?;
    if h == 0 || w == 0 {
        return Err(bad());
    }
    Ok((h, w))
}

pub fn featurize(a: FeaturizeArgs) -> Result<()> {
    let mut images = if a.input.is_dir() { load_png_dir(&a.input)? } else { load_imgb(&a.input)? };
    if let Some(size) = &a.resize {
        let (h, w) = parse_size(size)?;
        images = resize(&images, h, w)?;
    }
    let extractor = match a.extractor {
        ExtractorKind::Flatten => Extractor::Flatten,
        ExtractorKind::Randproj => Extractor::RandomProjection { out_dim: a.out_dim, seed: Seed(a.seed) },
        ExtractorKind::Model => {
            let path = a
                .model_path
                .clone()
                .ok_or_else(|| Error::Parameter("--extractor model needs --model-path".into()))?;
            Extractor::ExternalModel { path, out_dim: a.out_dim }
        }
    };
    let stats = compute_stats(&images);
    let features = extract_features(&images, &extractor, stats)?;
    eprintln!(
        "{} images -> {}x{} features (mean {:.4}, std {:.4})",
        images.len(),
        features.rows(),
        features.cols(),
        stats.mean,
        stats.std
    );
    save_fmat(&features, &a.output)
}

/// `ssdl-demo` configuration file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DemoConfig {
    task: TaskSpec,
    #[serde(default)]
    mixmatch: MixMatchConfig,
    /// Drop the unlabelled pool and train on labelled data only.
    #[serde(default)]
    supervised: bool,
}

#[derive(Serialize)]
struct DemoSummary<'a> {
    supervised: bool,
    n_labelled: usize,
    n_unlabelled: usize,
    n_ood: usize,
    best_accuracy: f64,
    final_accuracy: f64,
    best_epoch: usize,
    config: &'a MixMatchConfig,
}

pub fn ssdl_demo(a: DemoArgs) -> Result<()> {
    let text = fs::read_to_string(&a.config).map_err(|e| Error::io(&a.config, e))?;
    let mut cfg: DemoConfig = serde_json::from_str(&text)
        .map_err(|e| Error::Validation(format!("{}: {e}", a.config.display())))?;
    if let Some(sq) = a.l2_squared {
        cfg.mixmatch.l2_squared = sq;
    }
    let mut task = gen_synthetic_task(&cfg.task)?;
    if cfg.supervised {
        task.unlabelled.clear();
        task.unlabelled_ood.clear();
    }
    let metrics = train_mixmatch(&task, &cfg.mixmatch)?;

    if let Some(path) = &a.metrics {
        let mut csv = String::from("epoch,test_accuracy\n");
        for e in &metrics.epochs {
            csv.push_str(&format!("{},{:.6}\n", e.epoch, e.test_accuracy));
        }
        fs::write(path, csv).map_err(|e| Error::io(path, e))?;
    }
    let best_epoch = metrics
        .epochs
        .iter()
        .find(|e| e.test_accuracy == metrics.best_accuracy)
        .map_or(0, |e| e.epoch);
    let summary = DemoSummary {
        supervised: cfg.supervised,
        n_labelled: task.labelled.len(),
        n_unlabelled: task.unlabelled.len(),
        n_ood: task.n_ood(),
        best_accuracy: metrics.best_accuracy,
        final_accuracy: metrics.final_accuracy,
        best_epoch,
        config: &cfg.mixmatch,
    };
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    eprintln!("best test accuracy {:.4} at epoch {best_epoch}", metrics.best_accuracy);
    emit(a.output.as_deref(), &with_newline(json))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn candidate_specs() {
        assert_eq!(parse_candidate("a=x/b.fmat"), ("a".into(), PathBuf::from("x/b.fmat")));
        assert_eq!(parse_candidate("x/b.fmat"), ("b".into(), PathBuf::from("x/b.fmat")));
    }

    #[test]
    fn sizes() {
        assert_eq!(parse_size("32x16").unwrap(), (32, 16));
        assert_eq!(parse_size("28").unwrap(), (28, 28));
        assert!(parse_size("0x3").is_err());
        assert!(parse_size("ax3").is_err());
    }
}
