use mixmood::data::{FeatureMatrix, Seed};
use mixmood::dedims::{density_distance_round, nn_distance_round, DensityKind};
use mixmood::{dedim, dedim_parallel, rank_candidates, DedimParams, Measure};
use proptest::prelude::*;
use rand::RngExt;
use rand_distr::StandardNormal;

fn gaussian(rows: usize, cols: usize, shift: f64, seed: u64) -> FeatureMatrix {
    let mut rng = Seed(seed).rng();
    let v: Vec<f64> = (0..rows * cols).map(|_| shift + rng.sample::<f64, _>(StandardNormal)).collect();
    FeatureMatrix::from_f64(rows, cols, &v).unwrap()
}

#[test]
fn distance_grows_with_mean_shift() {
    let labelled = gaussian(400, 8, 0.0, 1);
    let pools: Vec<FeatureMatrix> = [0.0, 1.0, 2.0, 4.0].iter().map(|s| gaussian(400, 8, *s, 2)).collect();
    for measure in Measure::ALL {
        let p = DedimParams { measure, seed: Seed(3), ..Default::default() };
        let d: Vec<f64> = pools.iter().map(|u| dedim(&labelled, u, &p).unwrap().d_bar).collect();
        assert!(d.windows(2).all(|w| w[0] < w[1]), "{measure}: {d:?}");
    }
}

#[test]
fn thread_count_does_not_change_reports() {
    let a = gaussian(120, 6, 0.0, 4);
    let b = gaussian(150, 6, 0.5, 5);
    for measure in Measure::ALL {
        let p = DedimParams { measure, tau: 40, rounds: 12, seed: Seed(8), ..Default::default() };
        let base = dedim(&a, &b, &p).unwrap().to_json();
        for threads in [1, 2, 3, 8] {
            assert_eq!(dedim_parallel(&a, &b, &p, threads).unwrap().to_json(), base);
        }
    }
}

#[test]
fn ranking_ignores_candidate_order() {
    let l = gaussian(200, 4, 0.0, 10);
    let mut cands: Vec<(String, FeatureMatrix)> =
        [("far", 3.0), ("near", 0.2), ("mid", 1.0)].iter().map(|(n, s)| (n.to_string(), gaussian(200, 4, *s, 11))).collect();
    let p = DedimParams { tau: 50, rounds: 10, ..Default::default() };
    let a = rank_candidates("l", &l, &cands, &p, 1).unwrap();
    cands.reverse();
    let b = rank_candidates("l", &l, &cands, &p, 2).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.best, "near");
    let order: Vec<&str> = a.entries.iter().map(|e| e.candidate_id.as_str()).collect();
    assert_eq!(order, ["near", "mid", "far"]);
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = FeatureMatrix> {
    proptest::collection::vec(-50.0f64..50.0, rows * cols)
        .prop_map(move |v| FeatureMatrix::from_f64(rows, cols, &v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn self_distance_is_zero(a in matrix(12, 5)) {
        prop_assert_eq!(nn_distance_round(&a, &a, 1).unwrap(), 0.0);
        prop_assert_eq!(nn_distance_round(&a, &a, 2).unwrap(), 0.0);
        prop_assert!(density_distance_round(&a, &a, DensityKind::JensenShannon, 10).unwrap().abs() < 1e-12);
        prop_assert_eq!(density_distance_round(&a, &a, DensityKind::Cosine, 10).unwrap(), 0.0);
    }

    #[test]
    fn round_values_are_bounded(a in matrix(10, 4), b in matrix(10, 4)) {
        let js = density_distance_round(&a, &b, DensityKind::JensenShannon, 10).unwrap();
        let cos = density_distance_round(&a, &b, DensityKind::Cosine, 10).unwrap();
        prop_assert!((0.0..=4.0).contains(&js));
        prop_assert!((0.0..=4.0).contains(&cos));
        prop_assert!(nn_distance_round(&a, &b, 1).unwrap() >= nn_distance_round(&a, &b, 2).unwrap() - 1e-9);
    }

    #[test]
    fn reports_are_well_formed(a in matrix(20, 3), b in matrix(25, 3), seed in any::<u64>(), m in 0usize..4) {
        let p = DedimParams { measure: Measure::ALL[m], tau: 10, rounds: 8, seed: Seed(seed), ..Default::default() };
        let r = dedim(&a, &b, &p).unwrap();
        prop_assert!(r.d_bar >= 0.0);
        prop_assert!((0.0..=1.0).contains(&r.p_value));
        prop_assert_eq!(r.low_confidence, r.p_value > 0.5);
        prop_assert_eq!(r.diffs.len(), 8);
        let mean = r.diffs.iter().sum::<f64>() / 8.0;
        prop_assert!((mean - r.d_bar).abs() < 1e-12);
    }
}
