//! Per-dimension histogram densities and the distances between them.

use crate::data::FeatureMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityKind {
    JensenShannon,
    Cosine,
}

/// A normalised histogram over explicit bin edges.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    edges: Vec<f64>,
    mass: Vec<f64>,
}

impl Histogram {
    pub fn new(edges: Vec<f64>, mass: Vec<f64>) -> Result<Self> {
        if edges.len() != mass.len() + 1 || mass.is_empty() {
            return Err(Error::Validation(format!(
                "histogram needs B+1 edges for B bins, got {} edges and {} bins",
                edges.len(),
                mass.len()
            )));
        }
        if edges.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Validation("histogram edges must be strictly increasing".into()));
        }
        if mass.iter().any(|m| !(*m >= 0.0)) {
            return Err(Error::Validation("histogram mass must be non-negative".into()));
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Validation(format!(
                "histogram mass sums to {total}, expected 1"
            )));
        }
        Ok(Self { edges, mass })
    }

    /// Histogram given directly by its masses on `0..B` unit bins.
    pub fn from_mass(mass: Vec<f64>) -> Result<Self> {
        let edges = (0..=mass.len()).map(|i| i as f64).collect();
        Self::new(edges, mass)
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn bins(&self) -> usize {
        self.mass.len()
    }
}

/// Equal-width bin edges spanning the pooled range of both columns. A
/// degenerate span `[v, v]` is widened to `[v - ½, v + ½]`.
pub fn shared_edges(col_a: &[f64], col_b: &[f64], bins: usize) -> Vec<f64> {
    let (lo, hi) = col_a
        .iter()
        .chain(col_b)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let (lo, hi) = if lo == hi { (lo - 0.5, hi + 0.5) } else { (lo, hi) };
    let width = (hi - lo) / bins as f64;
    let mut edges: Vec<f64> = (0..bins).map(|i| lo + width * i as f64).collect();
    edges.push(hi);
    edges
}

/// Index of the bin holding `v`; bins are half-open except the last, which
/// includes the top edge.
pub fn bin_index(edges: &[f64], v: f64) -> usize {
    let bins = edges.len() - 1;
    let (lo, hi) = (edges[0], edges[bins]);
    let guess = ((v - lo) / (hi - lo) * bins as f64).floor();
    let mut i = if guess <= 0.0 { 0 } else { (guess as usize).min(bins - 1) };
    // settle rounding at exact edges against the stored edges
    while i > 0 && v < edges[i] {
        i -= 1;
    }
    while i + 1 < bins && v >= edges[i + 1] {
        i += 1;
    }
    i
}

fn normalised_counts(col: &[f64], edges: &[f64]) -> Vec<f64> {
    let mut counts = vec![0.0; edges.len() - 1];
    for &v in col {
        counts[bin_index(edges, v)] += 1.0;
    }
    let n = col.len() as f64;
    counts.iter_mut().for_each(|c| *c /= n);
    counts
}

pub fn shared_histograms(
    col_a: &[f64],
    col_b: &[f64],
    bins: usize,
) -> Result<(Histogram, Histogram)> {
    if col_a.is_empty() || col_b.is_empty() {
        return Err(Error::Parameter("histogram columns must be non-empty".into()));
    }
    if bins < 2 {
        return Err(Error::Parameter(format!("bin count must be at least 2, got {bins}")));
    }
    let edges = shared_edges(col_a, col_b, bins);
    let pa = normalised_counts(col_a, &edges);
    let pb = normalised_counts(col_b, &edges);
    Ok((Histogram::new(edges.clone(), pa)?, Histogram::new(edges, pb)?))
}

fn check_shared(pa: &Histogram, pb: &Histogram) -> Result<()> {
    if pa.edges != pb.edges {
        return Err(Error::Validation("histograms do not share bin edges".into()));
    }
    Ok(())
}

/// Jensen–Shannon divergence in bits; lies in `[0, 1]`.
pub fn js_divergence(pa: &Histogram, pb: &Histogram) -> Result<f64> {
    check_shared(pa, pb)?;
    Ok(js_mass(&pa.mass, &pb.mass))
}

pub(crate) fn js_mass(p: &[f64], q: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        let m = 0.5 * (a + b);
        let term = |x: f64| if x > 0.0 { 0.5 * x * (x / m).log2() } else { 0.0 };
        acc += term(a) + term(b);
    }
    acc.clamp(0.0, 1.0)
}

/// `1 − cos(pa, pb)`; lies in `[0, 1]` for histograms.
pub fn cosine_distance(pa: &Histogram, pb: &Histogram) -> Result<f64> {
    check_shared(pa, pb)?;
    cosine_mass(&pa.mass, &pb.mass)
}

pub(crate) fn cosine_mass(p: &[f64], q: &[f64]) -> Result<f64> {
    if p == q {
        return Ok(0.0);
    }
    let dot: f64 = p.iter().zip(q).map(|(a, b)| a * b).sum();
    let na = p.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nb = q.iter().map(|b| b * b).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return Err(Error::Validation("cosine distance of a zero-norm histogram".into()));
    }
    Ok((1.0 - dot / (na * nb)).clamp(0.0, 1.0))
}

/// Sum over feature dimensions of the histogram distance between the two
/// samples' marginals, each dimension binned on its own shared edges.
pub fn density_distance_round(
    a: &FeatureMatrix,
    b: &FeatureMatrix,
    kind: DensityKind,
    bins: usize,
) -> Result<f64> {
    if a.cols() != b.cols() {
        return Err(Error::DimensionMismatch {
            left: a.cols(),
            right: b.cols(),
        });
    }
    if bins < 2 {
        return Err(Error::Parameter(format!("bin count must be at least 2, got {bins}")));
    }
    let mut total = 0.0;
    for r in 0..a.cols() {
        let (ca, cb) = (a.column(r), b.column(r));
        let edges = shared_edges(&ca, &cb, bins);
        let pa = normalised_counts(&ca, &edges);
        let pb = normalised_counts(&cb, &edges);
        total += match kind {
            DensityKind::JensenShannon => js_mass(&pa, &pb),
            DensityKind::Cosine => cosine_mass(&pa, &pb)?,
        };
    }
    Ok(total)
}
