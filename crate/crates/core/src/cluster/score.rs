use num_traits::Float;
use serde::Serialize;

use crate::cluster::{ClusterSet, Dataset};
use crate::error::{Error, Result};
use crate::set::ElementSet;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreMetric {
    /// Population variance of each band.
    BandVariance,
    /// Mean squared distance over all ordered pairs, divided by the dimension.
    #[default]
    Nasd,
}

/// Per-band terms of one component; `value` aggregates them per the metric.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentScore {
    pub value: f64,
    pub per_band: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClusterScore {
    pub cluster: usize,
    pub lower: Option<ComponentScore>,
    pub upper: Option<ComponentScore>,
    pub boundary: Option<ComponentScore>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScoreTable {
    pub metric: ScoreMetric,
    pub scores: Vec<ClusterScore>,
}

fn to_f64<T: Float>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `None` when no member maps to a dataset row.
pub fn score_rows<T: Float>(ds: &Dataset<T>, members: &ElementSet, metric: ScoreMetric) -> Option<ComponentScore> {
    let rows: Vec<&[T]> = members.iter().filter(|&i| i < ds.len()).map(|i| ds.row(i)).collect();
    if rows.is_empty() {
        return None;
    }
    let n = T::from(rows.len()).unwrap();
    let per_band: Vec<f64> = (0..ds.dimension())
        .map(|b| {
            let mean = rows.iter().fold(T::zero(), |s, r| s + r[b]) / n;
            let var = rows.iter().fold(T::zero(), |s, r| s + (r[b] - mean) * (r[b] - mean)) / n;
            match metric {
                ScoreMetric::BandVariance => to_f64(var),
                // mean over ordered pairs of (x - y)² equals twice the population variance
                ScoreMetric::Nasd => to_f64(var + var),
            }
        })
        .collect();
    let value = per_band.iter().sum::<f64>() / per_band.len().max(1) as f64;
    Some(ComponentScore { value, per_band })
}

/// Direct ordered-pair evaluation of nasd.
pub fn nasd_pairs<T: Float>(rows: &[Vec<T>]) -> Option<f64> {
    if rows.is_empty() {
        return None;
    }
    let dim = rows[0].len().max(1) as f64;
    let mut total = 0.0;
    for a in rows {
        for b in rows {
            total += a.iter().zip(b).map(|(&x, &y)| to_f64((x - y) * (x - y))).sum::<f64>();
        }
    }
    Some(total / (rows.len() * rows.len()) as f64 / dim)
}

pub fn score_clusters<T: Float>(ds: &Dataset<T>, cs: &ClusterSet, metric: ScoreMetric) -> Result<ScoreTable> {
    let n = cs.system.len();
    let scores = cs
        .clusters
        .iter()
        .map(|c| {
            if c.tuple.upper.universe_size() != n {
                return Err(Error::UniverseMismatch {
                    left: n,
                    right: c.tuple.upper.universe_size(),
                });
            }
            Ok(ClusterScore {
                cluster: c.id,
                lower: score_rows(ds, &c.tuple.lower, metric),
                upper: score_rows(ds, &c.tuple.upper, metric),
                boundary: score_rows(ds, &c.tuple.boundary, metric),
            })
        })
        .collect::<Result<_>>()?;
    Ok(ScoreTable { metric, scores })
}

impl ClusterScore {
    /// Weighted mean of the lower component's per-band terms; unscorable clusters rank last.
    pub fn weighted(&self, weights: &[f64]) -> f64 {
        let Some(lower) = &self.lower else {
            return f64::INFINITY;
        };
        let total: f64 = weights.iter().sum();
        if weights.is_empty() || total == 0.0 {
            return lower.value;
        }
        lower.per_band.iter().zip(weights).map(|(s, w)| s * w).sum::<f64>() / total
    }
}
