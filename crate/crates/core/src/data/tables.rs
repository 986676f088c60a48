//! Accuracy and distance tables: the published per-configuration results
//! bundled under `data/published/`, or any user table with the same schema.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const BUNDLED_ACCURACIES: &str = include_str!("../../../../data/published/accuracies.csv");
pub const BUNDLED_DISTANCES: &str = include_str!("../../../../data/published/distances.csv");

/// Environment variable that points at a directory containing
/// `published/accuracies.csv` and `published/distances.csv`.
pub const DATA_DIR_ENV: &str = "MIXMOOD_DATA_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    L1,
    L2,
    Js,
    Cos,
}

impl Measure {
    pub const ALL: [Measure; 4] = [Measure::L1, Measure::L2, Measure::Js, Measure::Cos];

    pub fn as_str(self) -> &'static str {
        match self {
            Measure::L1 => "l1",
            Measure::L2 => "l2",
            Measure::Js => "js",
            Measure::Cos => "cos",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "l1" => Ok(Measure::L1),
            "l2" => Ok(Measure::L2),
            "js" => Ok(Measure::Js),
            "cos" | "cosine" => Ok(Measure::Cos),
            other => Err(Error::Parameter(format!(
                "unknown measure {other:?}, expected one of l1, l2, js, cos"
            ))),
        }
    }
}

/// Mean/std accuracy of one SSDL configuration.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct AccuracyRow {
    pub task: String,
    pub ood_source: String,
    pub pct_ood: u32,
    pub n_l: u32,
    pub mean: f64,
    pub std: f64,
}

/// Mean/std of one dissimilarity measure for one unlabelled configuration.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct DistanceRow {
    pub task: String,
    pub ood_source: String,
    pub pct_ood: u32,
    #[serde(deserialize_with = "de_measure")]
    pub measure: Measure,
    pub mean: f64,
    pub std: f64,
}

fn de_measure<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Measure, D::Error> {
    let s = String::deserialize(d)?;
    s.parse().map_err(serde::de::Error::custom)
}

const ACCURACY_HEADER: [&str; 6] = ["task", "ood_source", "pct_ood", "n_l", "mean", "std"];
const DISTANCE_HEADER: [&str; 6] = ["task", "ood_source", "pct_ood", "measure", "mean", "std"];

fn parse_rows<T: serde::de::DeserializeOwned>(
    text: &str,
    header: &[&str; 6],
    check: impl Fn(&T) -> Option<String>,
) -> Result<Vec<T>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let found: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Format(format!("table header: {e}")))?
        .iter()
        .map(str::to_owned)
        .collect();
    if found != header {
        return Err(Error::Format(format!(
            "table header is {found:?}, expected {header:?}"
        )));
    }
    let mut rows = Vec::new();
    for (i, rec) in reader.deserialize::<T>().enumerate() {
        let line = i + 2;
        let row = rec.map_err(|e| Error::Format(format!("table line {line}: {e}")))?;
        if let Some(msg) = check(&row) {
            return Err(Error::Validation(format!("table line {line}: {msg}")));
        }
        rows.push(row);
    }
    Ok(rows)
}

fn check_common(pct_ood: u32, mean: f64, std: f64) -> Option<String> {
    if pct_ood > 100 {
        return Some(format!("pct_ood {pct_ood} outside [0, 100]"));
    }
    if !mean.is_finite() {
        return Some(format!("non-finite mean {mean}"));
    }
    if !(std.is_finite() && std >= 0.0) {
        return Some(format!("std must be finite and non-negative, got {std}"));
    }
    None
}

pub fn parse_accuracies(text: &str) -> Result<Vec<AccuracyRow>> {
    parse_rows(text, &ACCURACY_HEADER, |r: &AccuracyRow| {
        check_common(r.pct_ood, r.mean, r.std)
    })
}

pub fn parse_distances(text: &str) -> Result<Vec<DistanceRow>> {
    parse_rows(text, &DISTANCE_HEADER, |r: &DistanceRow| {
        check_common(r.pct_ood, r.mean, r.std)
    })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn load_accuracies(path: impl AsRef<Path>) -> Result<Vec<AccuracyRow>> {
    parse_accuracies(&read(path.as_ref())?)
}

pub fn load_distances(path: impl AsRef<Path>) -> Result<Vec<DistanceRow>> {
    parse_distances(&read(path.as_ref())?)
}

/// Directory holding `accuracies.csv`/`distances.csv`, if overridden via
/// [`DATA_DIR_ENV`].
pub fn data_dir_override() -> Option<PathBuf> {
    std::env::var_os(DATA_DIR_ENV).map(|d| PathBuf::from(d).join("published"))
}

/// The published tables: read from `$MIXMOOD_DATA_DIR/published/` when the
/// variable is set, otherwise the copies compiled into the library.
pub fn bundled_tables() -> Result<(Vec<AccuracyRow>, Vec<DistanceRow>)> {
    match data_dir_override() {
        Some(dir) => Ok((
            load_accuracies(dir.join("accuracies.csv"))?,
            load_distances(dir.join("distances.csv"))?,
        )),
        None => Ok((
            parse_accuracies(BUNDLED_ACCURACIES)?,
            parse_distances(BUNDLED_DISTANCES)?,
        )),
    }
}
