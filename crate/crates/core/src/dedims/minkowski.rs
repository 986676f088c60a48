use crate::data::FeatureMatrix;
use crate::error::{Error, Result};

/// Mean over rows of `a` of the `ℓp` distance to the nearest row of `b`.
pub fn nn_distance_round(a: &FeatureMatrix, b: &FeatureMatrix, p: u32) -> Result<f64> {
    if a.cols() != b.cols() {
        return Err(Error::DimensionMismatch {
            left: a.cols(),
            right: b.cols(),
        });
    }
    let dist: fn(&[f32], &[f32]) -> f64 = match p {
        1 => l1,
        2 => l2_squared,
        _ => return Err(Error::Parameter(format!("Minkowski order must be 1 or 2, got {p}"))),
    };
    let mut total = 0.0;
    for ha in a.iter_rows() {
        let mut best = f64::INFINITY;
        for hb in b.iter_rows() {
            let d = dist(ha, hb);
            if d < best {
                best = d;
                if best == 0.0 {
                    break;
                }
            }
        }
        total += if p == 2 { best.sqrt() } else { best };
    }
    Ok(total / a.rows() as f64)
}

fn l1(x: &[f32], y: &[f32]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (f64::from(*a) - f64::from(*b)).abs())
        .sum()
}

fn l2_squared(x: &[f32], y: &[f32]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| {
            let d = f64::from(*a) - f64::from(*b);
            d * d
        })
        .sum()
}
