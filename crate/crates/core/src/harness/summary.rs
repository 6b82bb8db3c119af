use std::collections::BTreeMap;

use super::config::{EstimatorKind, SweepParam};
use super::runner::TrialResult;
use crate::scenarios::ScenarioKind;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricSummary {
    pub mean: f64,
    /// Sample standard deviation over `√count`; zero for a single row.
    pub stderr: f64,
    pub min: f64,
    pub max: f64,
}

impl MetricSummary {
    /// Sorts before summing so the result does not depend on input order.
    fn of(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        let count = values.len() as f64;
        let mean = values.iter().sum::<f64>() / count;
        let stderr = if values.len() > 1 {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1.0);
            (var / count).sqrt()
        } else {
            0.0
        };
        Self {
            mean,
            stderr,
            min: values[0],
            max: values[values.len() - 1],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub scenario: ScenarioKind,
    pub sweep_param: SweepParam,
    pub sweep_value: f64,
    pub estimator: EstimatorKind,
    pub trials: usize,
    pub qstar_loss: MetricSummary,
    pub hamming: MetricSummary,
}

/// Per (scenario, sweep point, estimator) aggregates, sorted by that key.
pub fn summarize(rows: &[TrialResult]) -> Vec<SummaryRow> {
    type Key = (ScenarioKind, SweepParam, u64, EstimatorKind);
    let mut groups: BTreeMap<Key, (f64, Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for r in rows {
        // Total order on sweep values via the sign-adjusted bit pattern.
        let bits = r.sweep_value.to_bits();
        let ordered = if bits >> 63 == 1 {
            !bits
        } else {
            bits | (1 << 63)
        };
        let entry = groups
            .entry((r.scenario, r.sweep_param, ordered, r.estimator))
            .or_insert_with(|| (r.sweep_value, Vec::new(), Vec::new()));
        entry.1.push(r.qstar_loss);
        entry.2.push(r.hamming);
    }
    groups
        .into_iter()
        .map(
            |((scenario, sweep_param, _, estimator), (sweep_value, q, h))| SummaryRow {
                scenario,
                sweep_param,
                sweep_value,
                estimator,
                trials: q.len(),
                qstar_loss: MetricSummary::of(q),
                hamming: MetricSummary::of(h),
            },
        )
        .collect()
}
