use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::data::tables::{AccuracyRow, DistanceRow, Measure};
use crate::error::{Error, Result};
use crate::stats::pearson;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationRow {
    pub task: String,
    pub n_l: u32,
    pub measure: Measure,
    pub r: f64,
    pub pairs: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CorrelationTable {
    pub rows: Vec<CorrelationRow>,
}

impl CorrelationTable {
    pub fn get(&self, task: &str, n_l: u32, measure: Measure) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.task == task && r.n_l == n_l && r.measure == measure)
            .map(|r| r.r)
    }

    /// `task,n_l,measure,r` with one row per group.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("task,n_l,measure,r\n");
        for row in &self.rows {
            out.push_str(&format!("{},{},{},{:.6}\n", row.task, row.n_l, row.measure, row.r));
        }
        out
    }
}

type ConfigKey = (String, u32);

/// Pearson correlation between mean distance and mean accuracy for every
/// `(task, n_l, measure)` group, over the unlabelled configurations
/// `(ood_source, pct_ood)` present in the distance table.
///
/// Accuracy rows with `pct_ood = 0` are the no-contamination baseline and
/// have no distance counterpart; any other accuracy configuration, and every
/// distance configuration, must be present in both tables.
pub fn correlate_tables(
    accuracies: &[AccuracyRow],
    distances: &[DistanceRow],
) -> Result<CorrelationTable> {
    let mut task_order: Vec<&str> = Vec::new();
    for t in accuracies.iter().map(|r| r.task.as_str()).chain(distances.iter().map(|r| r.task.as_str())) {
        if !task_order.contains(&t) {
            task_order.push(t);
        }
    }

    let mut acc: BTreeMap<(&str, u32), BTreeMap<ConfigKey, f64>> = BTreeMap::new();
    for r in accuracies.iter().filter(|r| r.pct_ood != 0) {
        let slot = acc.entry((&r.task, r.n_l)).or_default();
        if slot.insert((r.ood_source.clone(), r.pct_ood), r.mean).is_some() {
            return Err(Error::Validation(format!(
                "duplicate accuracy row {}/{}/{}%/n_l={}",
                r.task, r.ood_source, r.pct_ood, r.n_l
            )));
        }
    }
    let mut dist: BTreeMap<(&str, Measure), BTreeMap<ConfigKey, f64>> = BTreeMap::new();
    for r in distances {
        let slot = dist.entry((&r.task, r.measure)).or_default();
        if slot.insert((r.ood_source.clone(), r.pct_ood), r.mean).is_some() {
            return Err(Error::Validation(format!(
                "duplicate distance row {}/{}/{}%/{}",
                r.task, r.ood_source, r.pct_ood, r.measure
            )));
        }
    }

    let mut rows = Vec::new();
    let mut missing = Vec::new();
    for task in task_order {
        let n_ls: BTreeSet<u32> = acc.keys().filter(|(t, _)| *t == task).map(|(_, n)| *n).collect();
        for n_l in n_ls {
            let acc_group = &acc[&(task, n_l)];
            for measure in Measure::ALL {
                let Some(dist_group) = dist.get(&(task, measure)) else {
                    missing.push(format!("{task}: no {measure} distances"));
                    continue;
                };
                let mut xs = Vec::new();
                let mut ys = Vec::new();
                for (key, &d) in dist_group {
                    match acc_group.get(key) {
                        Some(&a) => {
                            xs.push(d);
                            ys.push(a);
                        }
                        None => missing.push(format!(
                            "{task}/{}/{}% n_l={n_l}: accuracy missing",
                            key.0, key.1
                        )),
                    }
                }
                for key in acc_group.keys().filter(|k| !dist_group.contains_key(*k)) {
                    missing.push(format!(
                        "{task}/{}/{}% {measure}: distance missing",
                        key.0, key.1
                    ));
                }
                if xs.len() < 2 {
                    missing.push(format!(
                        "{task} n_l={n_l} {measure}: only {} matched pairs",
                        xs.len()
                    ));
                    continue;
                }
                let r = pearson(&xs, &ys)?;
                rows.push(CorrelationRow {
                    task: task.to_owned(),
                    n_l,
                    measure,
                    r: r.r,
                    pairs: r.n,
                });
            }
        }
    }
    if !missing.is_empty() {
        return Err(Error::Validation(format!(
            "unmatched table keys: {}",
            missing.join("; ")
        )));
    }
    Ok(CorrelationTable { rows })
}
