use std::time::Instant;

use rayon::prelude::*;

use super::config::{EstimatorKind, ExperimentConfig, SweepParam};
use crate::error::{Error, Result};
use crate::estimators::{majority_vote, obi_wan, wan};
use crate::metrics::{hamming, qstar_loss};
use crate::model::{sample_responses, Answers, TruthInstance};
use crate::reference_ls::{least_squares, LsLimits};
use crate::rng::mix_seed;
use crate::scenarios::{build, ScenarioKind, ScenarioSpec, TruthMode};
use crate::spectral::WorkerOrdering;

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub scenario: ScenarioKind,
    pub sweep_param: SweepParam,
    pub sweep_value: f64,
    pub estimator: EstimatorKind,
    pub trial: usize,
    pub seed: u64,
    pub qstar_loss: f64,
    pub hamming: f64,
    pub k_wan: Option<usize>,
    pub wall_time_seconds: f64,
}

/// A sweep point (or one estimator at a point) that could not be run.
#[derive(Debug, Clone, PartialEq)]
pub struct PointFailure {
    pub sweep_value: f64,
    pub estimator: Option<EstimatorKind>,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub rows: Vec<TrialResult>,
    pub failures: Vec<PointFailure>,
}

/// Seed for trial `trial` at sweep index `sweep_index`.
pub fn trial_seed(base_seed: u64, sweep_index: usize, trial: usize) -> u64 {
    mix_seed(base_seed, &[sweep_index as u64, trial as u64])
}

struct Outcome {
    answers: Answers,
    k_wan: Option<usize>,
}

fn run_estimator(
    kind: EstimatorKind,
    inst: &TruthInstance,
    y: &crate::model::ResponseMatrix,
    seed: u64,
) -> Result<Outcome> {
    let p = inst.p_obs();
    match kind {
        EstimatorKind::Mv => Ok(Outcome {
            answers: majority_vote(y),
            k_wan: None,
        }),
        EstimatorKind::WanOracle => {
            let order = WorkerOrdering::by_descending(&inst.q().row_means());
            let out = wan(y, &order, p)?;
            Ok(Outcome {
                answers: out.answers,
                k_wan: Some(out.k_wan),
            })
        }
        EstimatorKind::ObiWan => Ok(Outcome {
            answers: obi_wan(y, p, seed)?,
            k_wan: None,
        }),
        EstimatorKind::LsReference => Ok(Outcome {
            answers: least_squares(y, p, LsLimits::default())?.answers,
            k_wan: None,
        }),
    }
}

/// Runs every (sweep point, trial, estimator) of `config` on a pool of
/// `threads` workers (`0` = rayon default). Rows come back in canonical
/// order: sweep value, estimator, trial.
pub fn run(config: &ExperimentConfig, threads: usize) -> Result<RunReport> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;

    let mut report = RunReport::default();
    let mut tasks = Vec::new();
    for (sweep_index, &value) in config.sweep_values.iter().enumerate() {
        let (n, d, p_obs) = config.point(value);
        let spec = ScenarioSpec::new(config.scenario, n, d, p_obs, TruthMode::AllPlusOne);
        if let Err(e) = build(&spec) {
            report.failures.push(PointFailure {
                sweep_value: value,
                estimator: None,
                message: e.to_string(),
            });
            continue;
        }
        for trial in 0..config.trials {
            tasks.push((sweep_index, value, spec, trial));
        }
    }

    let results: Vec<(Vec<TrialResult>, Vec<PointFailure>)> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(sweep_index, value, mut spec, trial)| {
                let seed = trial_seed(config.base_seed, sweep_index, trial);
                if !config.truth_all_plus_one {
                    spec.truth_mode = TruthMode::Random(seed);
                }
                let mut rows = Vec::new();
                let mut failures = Vec::new();
                let inst = match build(&spec) {
                    Ok(inst) => inst,
                    Err(e) => {
                        failures.push(PointFailure {
                            sweep_value: value,
                            estimator: None,
                            message: e.to_string(),
                        });
                        return (rows, failures);
                    }
                };
                let y = sample_responses(&inst, seed);
                for &kind in &config.estimators {
                    let start = Instant::now();
                    let outcome = run_estimator(kind, &inst, &y, seed).and_then(|o| {
                        let q = qstar_loss(inst.q(), &o.answers, inst.truth())?.value();
                        let h = hamming(&o.answers, inst.truth())?.value();
                        Ok((o.k_wan, q, h))
                    });
                    match outcome {
                        Ok((k_wan, qstar_loss, hamming)) => rows.push(TrialResult {
                            scenario: config.scenario,
                            sweep_param: config.sweep_param,
                            sweep_value: value,
                            estimator: kind,
                            trial,
                            seed,
                            qstar_loss,
                            hamming,
                            k_wan,
                            wall_time_seconds: start.elapsed().as_secs_f64(),
                        }),
                        Err(e) => failures.push(PointFailure {
                            sweep_value: value,
                            estimator: Some(kind),
                            message: e.to_string(),
                        }),
                    }
                }
                (rows, failures)
            })
            .collect()
    });

    for (rows, failures) in results {
        report.rows.extend(rows);
        for f in failures {
            if !report.failures.contains(&f) {
                report.failures.push(f);
            }
        }
    }
    let sweep_pos = |v: f64| config.sweep_values.iter().position(|&x| x == v);
    report.rows.sort_by(|a, b| {
        (a.scenario, sweep_pos(a.sweep_value), a.estimator, a.trial).cmp(&(
            b.scenario,
            sweep_pos(b.sweep_value),
            b.estimator,
            b.trial,
        ))
    });
    Ok(report)
}
