#![allow(dead_code)]

use crowdperm::harness::{run, DSize, EstimatorKind, ExperimentConfig, SweepParam, TrialResult};
use crowdperm::scenarios::ScenarioKind;

pub fn config(
    scenario: ScenarioKind,
    n: usize,
    p_obs: f64,
    sweep_param: SweepParam,
    sweep_values: &[f64],
    estimators: &[EstimatorKind],
    trials: usize,
) -> ExperimentConfig {
    ExperimentConfig {
        scenario,
        n,
        d: DSize::SameAsN,
        p_obs,
        truth_all_plus_one: false,
        sweep_param,
        sweep_values: sweep_values.to_vec(),
        estimators: estimators.to_vec(),
        trials,
        base_seed: 20_170_731,
        output: None,
    }
}

pub fn run_ok(cfg: &ExperimentConfig) -> Vec<TrialResult> {
    let report = run(cfg, 0).expect("run");
    assert!(report.failures.is_empty(), "{:?}", report.failures);
    report.rows
}

pub fn select(
    rows: &[TrialResult],
    est: EstimatorKind,
    sweep_value: f64,
) -> impl Iterator<Item = &TrialResult> {
    rows.iter()
        .filter(move |r| r.estimator == est && r.sweep_value == sweep_value)
}

pub fn mean_of(
    rows: &[TrialResult],
    est: EstimatorKind,
    v: f64,
    f: fn(&TrialResult) -> f64,
) -> f64 {
    let xs: Vec<f64> = select(rows, est, v).map(f).collect();
    assert!(!xs.is_empty());
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn qloss(r: &TrialResult) -> f64 {
    r.qstar_loss
}

pub fn ham(r: &TrialResult) -> f64 {
    r.hamming
}

/// Bimonotone 2x2 matrices on the grid `lo + k·step` (row-major a b / c d),
/// i.e. a ≥ b ≥ d and a ≥ c ≥ d.
pub fn grid_values(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let k = ((hi - lo) / step).round() as usize;
    (0..=k).map(|i| lo + i as f64 * step).collect()
}
