//! Library results against direct, independent reimplementations.

use mixmood::data::{FeatureMatrix, ImageSet, Seed};
use mixmood::dedims::{
    bin_index, cosine_distance, density_distance_round, js_divergence, nn_distance_round, shared_edges,
    shared_histograms, DensityKind, Histogram,
};
use mixmood::featurize::{extract_features, resize, Extractor, PreprocessStats, RandomProjection};
use mixmood::stats::{pearson, wilcoxon_signed_rank};
use rand::RngExt;
use rand_distr::StandardNormal;

fn random_matrix(rows: usize, cols: usize, rng: &mut mixmood::data::Pcg32) -> FeatureMatrix {
    let v: Vec<f64> = (0..rows * cols).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    FeatureMatrix::from_f64(rows, cols, &v).unwrap()
}

fn nn_oracle(a: &FeatureMatrix, b: &FeatureMatrix, p: u32) -> f64 {
    let mut total = 0.0;
    for i in 0..a.rows() {
        let mut best = f64::INFINITY;
        for j in 0..b.rows() {
            let d: f64 = a
                .row(i)
                .iter()
                .zip(b.row(j))
                .map(|(x, y)| (f64::from(*x) - f64::from(*y)).abs().powi(p as i32))
                .sum::<f64>()
                .powf(1.0 / p as f64);
            best = best.min(d);
        }
        total += best;
    }
    total / a.rows() as f64
}

#[test]
fn nn_distance_matches_double_loop() {
    let mut rng = Seed(2024).rng();
    for trial in 0..100 {
        let a = random_matrix(80, 512, &mut rng);
        let b = random_matrix(80, 512, &mut rng);
        let p = if trial % 2 == 0 { 1 } else { 2 };
        let got = nn_distance_round(&a, &b, p).unwrap();
        let want = nn_oracle(&a, &b, p);
        assert!((got - want).abs() < 1e-9 * want.max(1.0), "trial {trial}: {got} vs {want}");
    }
}

/// Histogram by scanning edges: bin k holds `e_k ≤ v < e_{k+1}`, the last
/// bin also holds its top edge.
fn hist_oracle(col: &[f64], lo: f64, hi: f64, bins: usize) -> Vec<f64> {
    let edges: Vec<f64> = (0..=bins).map(|k| if k == bins { hi } else { lo + (hi - lo) / bins as f64 * k as f64 }).collect();
    let mut counts = vec![0.0; bins];
    for &v in col {
        let k = (0..bins)
            .find(|&k| v >= edges[k] && (v < edges[k + 1] || k == bins - 1))
            .expect("value inside range");
        counts[k] += 1.0;
    }
    counts.iter().map(|c| c / col.len() as f64).collect()
}

fn density_oracle(a: &FeatureMatrix, b: &FeatureMatrix, bins: usize, js: bool) -> f64 {
    let mut total = 0.0;
    for r in 0..a.cols() {
        let (ca, cb) = (a.column(r), b.column(r));
        let lo = ca.iter().chain(&cb).cloned().fold(f64::INFINITY, f64::min);
        let hi = ca.iter().chain(&cb).cloned().fold(f64::NEG_INFINITY, f64::max);
        let (lo, hi) = if lo == hi { (lo - 0.5, hi + 0.5) } else { (lo, hi) };
        let p = hist_oracle(&ca, lo, hi, bins);
        let q = hist_oracle(&cb, lo, hi, bins);
        total += if js {
            let kl = |x: &[f64], m: &[f64]| -> f64 {
                x.iter().zip(m).filter(|(xi, _)| **xi > 0.0).map(|(xi, mi)| xi * (xi / mi).log2()).sum()
            };
            let m: Vec<f64> = p.iter().zip(&q).map(|(x, y)| (x + y) / 2.0).collect();
            0.5 * kl(&p, &m) + 0.5 * kl(&q, &m)
        } else {
            let dot: f64 = p.iter().zip(&q).map(|(x, y)| x * y).sum();
            let n = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
            1.0 - dot / (n(&p) * n(&q))
        };
    }
    total
}

#[test]
fn density_round_matches_per_dimension_oracle() {
    let mut rng = Seed(7).rng();
    for trial in 0..40 {
        let a = random_matrix(80, 64, &mut rng);
        let mut b = random_matrix(80, 64, &mut rng);
        if trial % 3 == 0 {
            let shifted: Vec<f64> = b.values().iter().map(|v| f64::from(*v) + 0.7).collect();
            b = FeatureMatrix::from_f64(80, 64, &shifted).unwrap();
        }
        for (kind, js) in [(DensityKind::JensenShannon, true), (DensityKind::Cosine, false)] {
            let got = density_distance_round(&a, &b, kind, 10).unwrap();
            let want = density_oracle(&a, &b, 10, js);
            assert!((got - want).abs() < 1e-9, "trial {trial} {kind:?}: {got} vs {want}");
        }
    }
}

#[test]
fn bin_counting_on_edges() {
    // integers 0..=10 over 10 bins: every value except the top sits on a left edge
    let col: Vec<f64> = (0..=10).map(f64::from).collect();
    let edges = shared_edges(&col, &col, 10);
    let (h, _) = shared_histograms(&col, &col, 10).unwrap();
    assert_eq!(h.mass(), hist_oracle(&col, 0.0, 10.0, 10).as_slice());
    assert_eq!(h.mass()[9], 2.0 / 11.0);
    for (i, v) in col.iter().enumerate() {
        assert_eq!(bin_index(&edges, *v), i.min(9));
    }
    // awkward range where edges are not exactly representable
    let mut rng = Seed(3).rng();
    for _ in 0..200 {
        let lo: f64 = rng.random_range(-3.0..3.0);
        let w: f64 = rng.random_range(0.01..5.0);
        let e = shared_edges(&[lo], &[lo + w], 7);
        for (k, edge) in e.iter().enumerate().take(7) {
            assert_eq!(bin_index(&e, *edge), k);
        }
        assert_eq!(bin_index(&e, lo + w), 6);
    }
}

#[test]
fn closed_form_histogram_distances() {
    let p = Histogram::from_mass(vec![1.0, 0.0]).unwrap();
    let q = Histogram::from_mass(vec![0.5, 0.5]).unwrap();
    // 0.5·log2(4/3) + 0.25·log2(2/3) + 0.25·log2(2)
    let js = 0.5 * (4.0f64 / 3.0).log2() + 0.25 * (2.0f64 / 3.0).log2() + 0.25;
    assert!((js_divergence(&p, &q).unwrap() - js).abs() < 1e-12);
    assert!((js_divergence(&p, &q).unwrap() - 0.31128).abs() < 1e-5);
    assert!((cosine_distance(&p, &q).unwrap() - (1.0 - 0.5f64.sqrt())).abs() < 1e-12);
    assert!((cosine_distance(&p, &q).unwrap() - 0.29289).abs() < 1e-5);
}

#[test]
fn random_projection_matches_matmul() {
    let mut rng = Seed(5).rng();
    let pixels: Vec<u8> = (0..6 * 3 * 3 * 3).map(|_| rng.random_range(0..=255u8)).collect();
    let set = ImageSet::new(6, 3, 3, 3, pixels.clone()).unwrap();
    let stats = PreprocessStats::new(120.0, 60.0);
    let proj = RandomProjection::new(27, 5, Seed(11)).unwrap();
    let got = extract_features(&set, &Extractor::RandomProjection { out_dim: 5, seed: Seed(11) }, stats).unwrap();
    let w = proj.weights();
    for n in 0..6 {
        for j in 0..5 {
            let z = |i: usize| (f64::from(pixels[n * 27 + i]) - 120.0) / 60.0;
            let want: f64 = (0..27).map(|i| z(i) * w[i * 5 + j]).sum();
            assert!((f64::from(got.row(n)[j]) - want).abs() < 1e-5 * want.abs().max(1.0));
        }
    }
    // entries scaled to variance 1/out_dim
    let big = RandomProjection::new(200, 50, Seed(1)).unwrap();
    let var = big.weights().iter().map(|x| x * x).sum::<f64>() / big.weights().len() as f64;
    assert!((var - 1.0 / 50.0).abs() < 0.002, "{var}");
}

#[test]
fn resize_matches_index_map() {
    let mut rng = Seed(9).rng();
    for (h, w, th, tw) in [(5, 7, 3, 4), (3, 3, 8, 5), (28, 28, 32, 32), (32, 32, 28, 28)] {
        let c = 3;
        let pixels: Vec<u8> = (0..2 * h * w * c).map(|_| rng.random_range(0..=255u8)).collect();
        let set = ImageSet::new(2, h, w, c, pixels.clone()).unwrap();
        let out = resize(&set, th, tw).unwrap();
        for n in 0..2 {
            for y in 0..th {
                let sy = (((2 * y + 1) * h) / (2 * th)).min(h - 1);
                for x in 0..tw {
                    let sx = (((2 * x + 1) * w) / (2 * tw)).min(w - 1);
                    for ch in 0..c {
                        let want = pixels[((n * h + sy) * w + sx) * c + ch];
                        assert_eq!(out.image(n)[(y * tw + x) * c + ch], want);
                    }
                }
            }
        }
    }
}

/// Two-sided p by enumerating all 2^n sign assignments of the ranks.
fn wilcoxon_brute(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let d: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| x - y).filter(|d| *d != 0.0).collect();
    let n = d.len();
    if n == 0 {
        return None;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].abs().total_cmp(&d[b].abs()));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && d[order[j + 1]].abs() == d[order[i]].abs() {
            j += 1;
        }
        for k in i..=j {
            ranks[order[k]] = (i + j) as f64 / 2.0 + 1.0;
        }
        i = j + 1;
    }
    let total: f64 = ranks.iter().sum();
    let w_plus: f64 = (0..n).filter(|k| d[*k] > 0.0).map(|k| ranks[k]).sum();
    let w = w_plus.min(total - w_plus);
    let mut hits = 0u64;
    for mask in 0u64..(1 << n) {
        let s: f64 = (0..n).filter(|k| mask >> k & 1 == 1).map(|k| ranks[k]).sum();
        if s.min(total - s) <= w + 1e-9 {
            hits += 1;
        }
    }
    Some((hits as f64 / (1u64 << n) as f64).min(1.0))
}

#[test]
fn wilcoxon_matches_sign_enumeration() {
    let mut rng = Seed(31).rng();
    for trial in 0..200 {
        let n = rng.random_range(1..=10);
        // coarse values so ties and zero differences occur
        let xs: Vec<f64> = (0..n).map(|_| f64::from(rng.random_range(0..6u8))).collect();
        let ys: Vec<f64> = (0..n).map(|_| f64::from(rng.random_range(0..6u8))).collect();
        match (wilcoxon_brute(&xs, &ys), wilcoxon_signed_rank(&xs, &ys)) {
            (Some(p), Ok(r)) => assert_eq!(r.p_value, p, "trial {trial}: {xs:?} {ys:?}"),
            (None, r) => assert!(r.is_err() || r.unwrap().p_value == 1.0),
            (Some(_), Err(e)) => panic!("trial {trial}: {e}"),
        }
    }
}

#[test]
fn pearson_matches_direct_formula() {
    let mut rng = Seed(41).rng();
    for _ in 0..200 {
        let n = rng.random_range(3..40);
        let xs: Vec<f64> = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 0.3 * x + rng.random_range(-5.0..5.0)).collect();
        let (mx, my) = (xs.iter().sum::<f64>() / n as f64, ys.iter().sum::<f64>() / n as f64);
        let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let vx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let vy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
        let want = cov / (vx * vy).sqrt();
        assert!((pearson(&xs, &ys).unwrap().r - want).abs() < 1e-12);
    }
}
