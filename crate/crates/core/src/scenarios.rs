//! Ground-truth constructions for the simulation study and the hard
//! instances behind the lower-bound arguments.
//!
//! Tier boundaries are floored. Strict thresholds (`i < t`, `i > t`) compare
//! the 0-based worker index against `⌊t⌋`; non-strict ones (`i ≤ t`) compare
//! the 1-based index. Either way the top tier is the first `⌊t⌋` workers.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{check_pobs, Answers, ProbabilityMatrix, TruthInstance};
use crate::rng::{self, stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ScenarioKind {
    Easy,
    FewSmart,
    Adversarial,
    PermNotInt,
    MinimaxLB,
    SuperSparse,
    GhoshHard,
    ZhangHard,
    MvLowerBound,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 9] = [
        ScenarioKind::Easy,
        ScenarioKind::FewSmart,
        ScenarioKind::Adversarial,
        ScenarioKind::PermNotInt,
        ScenarioKind::MinimaxLB,
        ScenarioKind::SuperSparse,
        ScenarioKind::GhoshHard,
        ScenarioKind::ZhangHard,
        ScenarioKind::MvLowerBound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Easy => "Easy",
            ScenarioKind::FewSmart => "FewSmart",
            ScenarioKind::Adversarial => "Adversarial",
            ScenarioKind::PermNotInt => "PermNotInt",
            ScenarioKind::MinimaxLB => "MinimaxLB",
            ScenarioKind::SuperSparse => "SuperSparse",
            ScenarioKind::GhoshHard => "GhoshHard",
            ScenarioKind::ZhangHard => "ZhangHard",
            ScenarioKind::MvLowerBound => "MvLowerBound",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ScenarioKind::Easy => "q_i = 0.9 for i < n/2, else 0.5",
            ScenarioKind::FewSmart => "q_i = 0.9 for i < sqrt(n), else 0.5",
            ScenarioKind::Adversarial => {
                "q_i = 0.9 for i < n/4 + sqrt(n), 0.1 for i > 3n/4, else 0.5"
            }
            ScenarioKind::PermNotInt => "Q_ij = 0.9 if i < sqrt(n) or j < d/2, else 0.5",
            ScenarioKind::MinimaxLB => "q_i = 0.9 for i <= 5/p_obs, else 0.5",
            ScenarioKind::SuperSparse => "q_i = 0.9 for i <= n/10, else 0.5",
            ScenarioKind::GhoshHard => "q_i = 1 for i <= sqrt(n), else 0.5",
            ScenarioKind::ZhangHard => "q_i = 1 for i <= sqrt(n) ln d, else 0.5",
            ScenarioKind::MvLowerBound => {
                "q_i = 1 for the first sqrt(n / (2 p_obs)) workers, else 0.5; truth all -1"
            }
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown scenario `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TruthMode {
    AllPlusOne,
    Random(u64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    pub n: usize,
    pub d: usize,
    pub p_obs: f64,
    pub truth_mode: TruthMode,
}

impl ScenarioSpec {
    pub fn new(kind: ScenarioKind, n: usize, d: usize, p_obs: f64, truth_mode: TruthMode) -> Self {
        Self {
            kind,
            n,
            d,
            p_obs,
            truth_mode,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.d == 0 {
            return Err(Error::Dimension(format!(
                "scenario needs positive dimensions, got {}x{}",
                self.n, self.d
            )));
        }
        check_pobs(self.p_obs)
    }
}

fn floor_count(t: f64, n: usize) -> usize {
    if t <= 0.0 {
        0
    } else {
        (t.floor() as usize).min(n)
    }
}

fn tiered(n: usize, top: usize, high: f64) -> Vec<f64> {
    (0..n).map(|i| if i < top { high } else { 0.5 }).collect()
}

fn nonempty(kind: ScenarioKind, top: usize) -> Result<usize> {
    if top == 0 {
        Err(Error::Scenario(format!(
            "{kind}: high-ability tier is empty"
        )))
    } else {
        Ok(top)
    }
}

/// Builds the probability matrix and ground truth for `spec`.
pub fn build(spec: &ScenarioSpec) -> Result<TruthInstance> {
    spec.validate()?;
    let ScenarioSpec {
        kind, n, d, p_obs, ..
    } = *spec;
    let nf = n as f64;
    let root_n = nf.sqrt();

    let q = match kind {
        ScenarioKind::Easy => {
            let top = nonempty(kind, floor_count(nf / 2.0, n))?;
            ProbabilityMatrix::from_abilities(&tiered(n, top, 0.9), d)?
        }
        ScenarioKind::FewSmart => {
            let top = nonempty(kind, floor_count(root_n, n))?;
            ProbabilityMatrix::from_abilities(&tiered(n, top, 0.9), d)?
        }
        ScenarioKind::Adversarial => {
            let top = nonempty(kind, floor_count(nf / 4.0 + root_n, n))?;
            let bad_after = (3.0 * nf / 4.0).floor() as usize;
            let abilities: Vec<f64> = (0..n)
                .map(|i| {
                    if i < top {
                        0.9
                    } else if i > bad_after {
                        0.1
                    } else {
                        0.5
                    }
                })
                .collect();
            ProbabilityMatrix::from_abilities_adversarial(&abilities, d)?
        }
        ScenarioKind::PermNotInt => {
            let top_rows = nonempty(kind, floor_count(root_n, n))?;
            let top_cols = floor_count(d as f64 / 2.0, d);
            ProbabilityMatrix::from_fn(n, d, |i, j| {
                if i < top_rows || j < top_cols {
                    0.9
                } else {
                    0.5
                }
            })?
        }
        ScenarioKind::MinimaxLB => {
            let top = nonempty(kind, floor_count(5.0 / p_obs, n))?;
            ProbabilityMatrix::from_abilities(&tiered(n, top, 0.9), d)?
        }
        ScenarioKind::SuperSparse => {
            let top = nonempty(kind, floor_count(nf / 10.0, n))?;
            ProbabilityMatrix::from_abilities(&tiered(n, top, 0.9), d)?
        }
        ScenarioKind::GhoshHard => {
            let top = nonempty(kind, floor_count(root_n, n))?;
            ProbabilityMatrix::from_abilities(&tiered(n, top, 1.0), d)?
        }
        ScenarioKind::ZhangHard => {
            let top = nonempty(kind, floor_count(root_n * (d as f64).ln(), n))?;
            ProbabilityMatrix::from_abilities(&tiered(n, top, 1.0), d)?
        }
        ScenarioKind::MvLowerBound => {
            let top = nonempty(kind, floor_count((nf / (2.0 * p_obs)).sqrt(), n))?;
            ProbabilityMatrix::from_abilities(&tiered(n, top, 1.0), d)?
        }
    };

    let truth = match (kind, spec.truth_mode) {
        (ScenarioKind::MvLowerBound, _) => Answers::all(-1, d)?,
        (_, TruthMode::AllPlusOne) => Answers::all(1, d)?,
        (_, TruthMode::Random(seed)) => {
            let mut g = rng::generator(seed, stream::TRUTH);
            Answers::new(
                (0..d)
                    .map(|_| if g.gen::<bool>() { 1 } else { -1 })
                    .collect(),
            )?
        }
    };
    TruthInstance::new(q, truth, p_obs)
}

/// Size of the high-ability tier (rows of `0.9` or `1`) of a DS scenario.
pub fn top_tier(q: &ProbabilityMatrix) -> usize {
    q.row_means().iter().take_while(|&&w| w > 0.5).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{classify_matrix, DEFAULT_CLASS_TOL};

    fn spec(kind: ScenarioKind, n: usize, d: usize, p: f64) -> ScenarioSpec {
        ScenarioSpec::new(kind, n, d, p, TruthMode::Random(1))
    }

    #[test]
    fn easy_small() {
        let inst = build(&spec(ScenarioKind::Easy, 4, 3, 1.0)).unwrap();
        for j in 0..3 {
            let col: Vec<f64> = (0..4).map(|i| inst.q().get(i, j)).collect();
            assert_eq!(col, vec![0.9, 0.9, 0.5, 0.5]);
        }
    }

    #[test]
    fn minimax_tier_scales_with_pobs() {
        let inst = build(&spec(ScenarioKind::MinimaxLB, 100, 5, 0.5)).unwrap();
        assert_eq!(top_tier(inst.q()), 10);
    }

    #[test]
    fn adversarial_tiers() {
        let inst = build(&spec(ScenarioKind::Adversarial, 1000, 2, 1.0)).unwrap();
        let w = inst.q().row_means();
        assert_eq!(w.iter().filter(|&&v| v == 0.9).count(), 281);
        assert_eq!(w.iter().filter(|&&v| v == 0.1).count(), 249);
        assert!(inst.q().allows_adversarial());
    }

    #[test]
    fn perm_not_int_classification() {
        let inst = build(&spec(ScenarioKind::PermNotInt, 4, 4, 1.0)).unwrap();
        let r = classify_matrix(inst.q(), DEFAULT_CLASS_TOL).unwrap();
        assert!(r.in_perm && !r.in_int && !r.in_ds);
    }

    #[test]
    fn mv_lower_bound_truth_is_negative() {
        let inst = build(&spec(ScenarioKind::MvLowerBound, 400, 10, 1.0)).unwrap();
        assert!(inst.truth().iter().all(|&x| x == -1));
        assert_eq!(top_tier(inst.q()), 14);
    }

    #[test]
    fn empty_tier_rejected() {
        assert!(matches!(
            build(&spec(ScenarioKind::SuperSparse, 9, 4, 1.0)),
            Err(Error::Scenario(_))
        ));
        assert!(build(&spec(ScenarioKind::Easy, 0, 4, 1.0)).is_err());
        assert!(build(&spec(ScenarioKind::Easy, 4, 4, 0.0)).is_err());
    }

    #[test]
    fn names_round_trip() {
        for k in ScenarioKind::ALL {
            assert_eq!(k.name().parse::<ScenarioKind>().unwrap(), k);
        }
        assert!("nope".parse::<ScenarioKind>().is_err());
    }

    #[test]
    fn deterministic() {
        let s = spec(ScenarioKind::FewSmart, 50, 20, 0.7);
        assert_eq!(build(&s).unwrap(), build(&s).unwrap());
    }
}
