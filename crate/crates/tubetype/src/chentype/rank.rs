//! Rank growth of the iterate span, the numeric face of infinite-type
//! evidence: a type-k surface's iterates span at most k+1 directions, so a
//! rank profile that keeps growing is an obstruction to every small type.

use super::fit::IterateMatrix;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Singular-value audit of the prefix spans `{y_0}, {y_0, y_1}, ...`.
///
/// Columns are scaled to unit norm before the decomposition; scaling never
/// changes a span, and it keeps one relative threshold meaningful across
/// iterates whose magnitudes differ by many orders.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RankProfile {
    /// `singular_values[k]` belongs to the prefix ending at iterate k.
    pub singular_values: Vec<Vec<f64>>,
    pub ranks: Vec<usize>,
    pub threshold: f64,
    /// Every prefix has full column rank: each iterate adds a direction.
    pub growing: bool,
}

pub fn rank_profile(iterates: &IterateMatrix, threshold: f64) -> RankProfile {
    let n = iterates.rows();
    let cols = iterates.columns.len();
    let mut scaled = DMatrix::zeros(3 * n, cols);
    for (k, col) in iterates.columns.iter().enumerate() {
        let rms = iterates.column_rms(k);
        let scale = if rms > 0.0 {
            1.0 / (rms * (3.0 * n as f64).sqrt())
        } else {
            0.0
        };
        for (i, v) in col.iter().enumerate() {
            for c in 0..3 {
                scaled[(3 * i + c, k)] = v[c] * scale;
            }
        }
    }
    let mut singular_values = Vec::with_capacity(cols);
    let mut ranks = Vec::with_capacity(cols);
    for k in 0..cols {
        let prefix = scaled.columns(0, k + 1).into_owned();
        let svd = prefix.svd(false, false);
        let values: Vec<f64> = svd.singular_values.iter().copied().collect();
        let smax = values.iter().copied().fold(0.0, f64::max);
        let rank = values.iter().filter(|s| **s > threshold * smax).count();
        singular_values.push(values);
        ranks.push(rank);
    }
    let growing = ranks.iter().enumerate().all(|(k, r)| *r == k + 1);
    RankProfile {
        singular_values,
        ranks,
        threshold,
        growing,
    }
}
