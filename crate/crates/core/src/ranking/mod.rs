//! Ante hoc ranking of candidate unlabelled datasets, and the correlation
//! of published distances with published SSDL accuracy.

mod correlate;

pub use correlate::{correlate_tables, CorrelationRow, CorrelationTable};

use std::collections::BTreeSet;

use serde::Serialize;

use crate::data::FeatureMatrix;
use crate::dedims::{dedim, dedim_parallel, DedimParams, DistanceReport, Measure};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedEntry {
    pub candidate_id: String,
    pub report: DistanceReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankingReport {
    pub labelled_id: String,
    pub measure: Measure,
    pub best: String,
    pub params: DedimParams,
    pub entries: Vec<RankedEntry>,
}

impl RankingReport {
    pub fn best_entry(&self) -> &RankedEntry {
        &self.entries[0]
    }
}

/// Computes one distance per candidate against `labelled`, all with the same
/// parameters and master seed, and orders candidates by ascending `d̄`
/// (ties by name). Low-confidence candidates are kept and flagged.
pub fn rank_candidates(
    labelled_id: &str,
    labelled: &FeatureMatrix,
    candidates: &[(String, FeatureMatrix)],
    params: &DedimParams,
    threads: usize,
) -> Result<RankingReport> {
    if candidates.is_empty() {
        return Err(Error::Parameter("no candidate datasets to rank".into()));
    }
    let mut names = BTreeSet::new();
    for (name, _) in candidates {
        if !names.insert(name.as_str()) {
            return Err(Error::Validation(format!("duplicate candidate name `{name}`")));
        }
    }
    let mut entries = Vec::with_capacity(candidates.len());
    for (name, m) in candidates {
        let report = if threads > 1 {
            dedim_parallel(labelled, m, params, threads)
        } else {
            dedim(labelled, m, params)
        }
        .map_err(|e| Error::Candidate {
            name: name.clone(),
            source: Box::new(e),
        })?;
        entries.push(RankedEntry {
            candidate_id: name.clone(),
            report,
        });
    }
    Ok(order_entries(labelled_id, entries, params))
}

pub(crate) fn order_entries(
    labelled_id: &str,
    mut entries: Vec<RankedEntry>,
    params: &DedimParams,
) -> RankingReport {
    entries.sort_by(|a, b| {
        a.report
            .d_bar
            .total_cmp(&b.report.d_bar)
            .then_with(|| a.candidate_id.cmp(&b.candidate_id))
    });
    RankingReport {
        labelled_id: labelled_id.to_owned(),
        measure: params.measure,
        best: entries[0].candidate_id.clone(),
        params: *params,
        entries,
    }
}

/// Stable-key-order JSON of a ranking report.
pub fn emit_ranking_json(report: &RankingReport) -> String {
    serde_json::to_string_pretty(report).expect("report serialization is infallible")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dedims::SignificanceInfo;
    use crate::stats::WilcoxonMethod;

    fn fake_report(d_bar: f64, p: f64) -> DistanceReport {
        DistanceReport {
            measure: Measure::Cos,
            d_bar,
            p_value: p,
            low_confidence: p > 0.5,
            significance: SignificanceInfo {
                test: "wilcoxon_signed_rank",
                alternative: "two-sided",
                pairing: "inter_vs_intra_by_round",
                method: WilcoxonMethod::Exact,
                n_effective: 1,
                w_statistic: 0.0,
            },
            inter: vec![d_bar],
            intra: vec![0.0],
            diffs: vec![d_bar],
            params: DedimParams::default(),
        }
    }

    fn entry(name: &str, d: f64) -> RankedEntry {
        RankedEntry {
            candidate_id: name.into(),
            report: fake_report(d, 0.01),
        }
    }

    #[test]
    fn sorted_by_distance() {
        let r = order_entries(
            "l",
            vec![entry("first", 0.5), entry("second", 0.2), entry("third", 0.9)],
            &DedimParams::default(),
        );
        let order: Vec<&str> = r.entries.iter().map(|e| e.candidate_id.as_str()).collect();
        assert_eq!(order, ["second", "first", "third"]);
        assert_eq!(r.best, "second");
    }

    #[test]
    fn ties_broken_by_name_regardless_of_input_order() {
        let a = order_entries("l", vec![entry("b", 1.0), entry("a", 1.0)], &DedimParams::default());
        let b = order_entries("l", vec![entry("a", 1.0), entry("b", 1.0)], &DedimParams::default());
        assert_eq!(a, b);
        assert_eq!(a.best, "a");
    }

    #[test]
    fn low_confidence_serialized() {
        let mut e = entry("x", 0.3);
        e.report = fake_report(0.3, 0.9);
        let r = order_entries("l", vec![e], &DedimParams::default());
        let json = emit_ranking_json(&r);
        assert!(json.contains("\"low_confidence\": true"));
        assert_eq!(json, emit_ranking_json(&r));
    }

    #[test]
    fn empty_and_duplicate_candidates_rejected() {
        let m = FeatureMatrix::new(4, 1, vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let params = DedimParams {
            tau: 2,
            rounds: 2,
            ..DedimParams::default()
        };
        assert!(rank_candidates("l", &m, &[], &params, 1).is_err());
        let dup = vec![("a".to_string(), m.clone()), ("a".to_string(), m.clone())];
        assert!(matches!(
            rank_candidates("l", &m, &dup, &params, 1),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn failing_candidate_is_named() {
        let m = FeatureMatrix::new(4, 1, vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let wide = FeatureMatrix::new(4, 2, vec![0.0; 8]).unwrap();
        let params = DedimParams {
            tau: 2,
            rounds: 2,
            ..DedimParams::default()
        };
        let err = rank_candidates("l", &m, &[("wide".into(), wide)], &params, 1).unwrap_err();
        assert!(err.to_string().contains("wide"), "{err}");
    }
}
