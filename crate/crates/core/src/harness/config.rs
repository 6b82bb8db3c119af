use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scenarios::ScenarioKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EstimatorKind {
    Mv,
    WanOracle,
    ObiWan,
    LsReference,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 4] = [
        EstimatorKind::Mv,
        EstimatorKind::WanOracle,
        EstimatorKind::ObiWan,
        EstimatorKind::LsReference,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EstimatorKind::Mv => "mv",
            EstimatorKind::WanOracle => "wan_oracle",
            EstimatorKind::ObiWan => "obi_wan",
            EstimatorKind::LsReference => "ls_reference",
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        EstimatorKind::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown estimator `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SweepParam {
    N,
    D,
    PObs,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::N => "n",
            SweepParam::D => "d",
            SweepParam::PObs => "p_obs",
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "n" => Ok(SweepParam::N),
            "d" => Ok(SweepParam::D),
            "p_obs" => Ok(SweepParam::PObs),
            _ => Err(Error::InvalidParameter(format!(
                "unknown sweep parameter `{s}`"
            ))),
        }
    }
}

/// Question count: fixed, or tied to the worker count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DSize {
    Fixed(usize),
    SameAsN,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: ScenarioKind,
    pub n: usize,
    pub d: DSize,
    pub p_obs: f64,
    /// Truth vectors are all `+1` instead of drawn per trial.
    pub truth_all_plus_one: bool,
    pub sweep_param: SweepParam,
    pub sweep_values: Vec<f64>,
    pub estimators: Vec<EstimatorKind>,
    pub trials: usize,
    pub base_seed: u64,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Parses the `key = value` format. `#` starts a comment; lists are
    /// comma-separated.
    ///
    /// ```text
    /// scenario      = FewSmart
    /// n             = 1000
    /// d             = n
    /// p_obs         = 1.0
    /// truth         = random        # or all_plus_one
    /// sweep_param   = n
    /// sweep_values  = 100, 200, 400
    /// estimators    = mv, obi_wan
    /// trials        = 20
    /// base_seed     = 7
    /// output        = results.csv
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut scenario = None;
        let mut n = None;
        let mut d = DSize::SameAsN;
        let mut p_obs = 1.0;
        let mut truth_all_plus_one = false;
        let mut sweep_param = None;
        let mut sweep_values = None;
        let mut estimators = None;
        let mut trials = 20;
        let mut base_seed = 0;
        let mut output = None;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |message: String| Error::Config {
                line: line_no,
                message,
            };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |v: &str| -> Result<f64> {
                v.parse::<f64>()
                    .map_err(|_| err(format!("`{key}`: `{v}` is not a number")))
            };
            let int = |v: &str| -> Result<usize> {
                v.parse::<usize>()
                    .map_err(|_| err(format!("`{key}`: `{v}` is not a nonnegative integer")))
            };
            match key {
                "scenario" => {
                    scenario = Some(value.parse().map_err(|e: Error| err(e.to_string()))?)
                }
                "n" => n = Some(int(value)?),
                "d" => {
                    d = if value == "n" {
                        DSize::SameAsN
                    } else {
                        DSize::Fixed(int(value)?)
                    }
                }
                "p_obs" => p_obs = num(value)?,
                "truth" => {
                    truth_all_plus_one = match value {
                        "random" => false,
                        "all_plus_one" => true,
                        _ => return Err(err(format!("unknown truth mode `{value}`"))),
                    }
                }
                "sweep_param" => {
                    sweep_param = Some(value.parse().map_err(|e: Error| err(e.to_string()))?)
                }
                "sweep_values" => {
                    sweep_values = Some(split_list(value).map(num).collect::<Result<Vec<_>>>()?)
                }
                "estimators" => {
                    estimators = Some(
                        split_list(value)
                            .map(|s| s.parse().map_err(|e: Error| err(e.to_string())))
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
                "trials" => trials = int(value)?,
                "base_seed" => {
                    base_seed = value
                        .parse()
                        .map_err(|_| err(format!("`base_seed`: `{value}` is not a u64")))?
                }
                "output" => output = Some(PathBuf::from(value)),
                _ => return Err(err(format!("unknown key `{key}`"))),
            }
        }

        let missing = |what: &str| Error::Config {
            line: 0,
            message: format!("missing required key `{what}`"),
        };
        let scenario = scenario.ok_or_else(|| missing("scenario"))?;
        let estimators: Vec<EstimatorKind> = estimators.ok_or_else(|| missing("estimators"))?;
        let sweep_param = sweep_param.unwrap_or(SweepParam::N);
        let n = match (n, sweep_param) {
            (Some(n), _) => n,
            (None, SweepParam::N) => 0,
            (None, _) => return Err(missing("n")),
        };
        let sweep_values = match sweep_values {
            Some(v) => v,
            None => vec![match sweep_param {
                SweepParam::N => n as f64,
                SweepParam::D => match d {
                    DSize::Fixed(d) => d as f64,
                    DSize::SameAsN => n as f64,
                },
                SweepParam::PObs => p_obs,
            }],
        };
        let config = Self {
            scenario,
            n,
            d,
            p_obs,
            truth_all_plus_one,
            sweep_param,
            sweep_values,
            estimators,
            trials,
            base_seed,
            output,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| {
            Err(Error::Config {
                line: 0,
                message: m,
            })
        };
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.estimators.is_empty() {
            return bad("no estimators selected".into());
        }
        if self.sweep_values.is_empty() {
            return bad("sweep_values is empty".into());
        }
        if self.sweep_param == SweepParam::D && self.d == DSize::SameAsN {
            return bad("sweeping d requires an explicit `d`".into());
        }
        for &v in &self.sweep_values {
            let integral = v.fract() == 0.0 && v >= 1.0;
            if self.sweep_param != SweepParam::PObs && !integral {
                return bad(format!(
                    "{} sweep value {v} is not a positive integer",
                    self.sweep_param
                ));
            }
        }
        Ok(())
    }

    /// `(n, d, p_obs)` at a sweep value.
    pub fn point(&self, value: f64) -> (usize, usize, f64) {
        let (mut n, mut p) = (self.n, self.p_obs);
        let mut d_fixed = match self.d {
            DSize::Fixed(d) => Some(d),
            DSize::SameAsN => None,
        };
        match self.sweep_param {
            SweepParam::N => n = value as usize,
            SweepParam::D => d_fixed = Some(value as usize),
            SweepParam::PObs => p = value,
        }
        (n, d_fixed.unwrap_or(n), p)
    }
}

fn split_list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_config() {
        let c = ExperimentConfig::parse(
            "# few smart\nscenario = FewSmart\nn = 1000\nd = n\np_obs = 1\n\
             sweep_param = n\nsweep_values = 100, 200\nestimators = mv, obi_wan\n\
             trials = 3\nbase_seed = 9\noutput = out.csv\n",
        )
        .unwrap();
        assert_eq!(c.scenario, ScenarioKind::FewSmart);
        assert_eq!(c.sweep_values, vec![100.0, 200.0]);
        assert_eq!(c.estimators, vec![EstimatorKind::Mv, EstimatorKind::ObiWan]);
        assert_eq!(c.point(200.0), (200, 200, 1.0));
        assert_eq!(c.output.as_deref(), Some(Path::new("out.csv")));
    }

    #[test]
    fn pobs_sweep_points() {
        let c = ExperimentConfig::parse(
            "scenario = MinimaxLB\nn = 1000\nd = 800\nsweep_param = p_obs\n\
             sweep_values = 0.2, 0.4\nestimators = mv\n",
        )
        .unwrap();
        assert_eq!(c.point(0.4), (1000, 800, 0.4));
        assert_eq!(c.trials, 20);
    }

    #[test]
    fn rejects_bad_lines() {
        let e = ExperimentConfig::parse("scenario = Easy\nbogus = 1\nestimators = mv\n");
        assert!(matches!(e, Err(Error::Config { line: 2, .. })));
        assert!(ExperimentConfig::parse("scenario = Easy\nn = 10\nestimators = magic\n").is_err());
        assert!(
            ExperimentConfig::parse("scenario = Easy\nn = 10\nestimators = mv\ntrials = 0\n")
                .is_err()
        );
        assert!(ExperimentConfig::parse("n = 10\nestimators = mv\n").is_err());
        assert!(
            ExperimentConfig::parse("scenario = Easy\nsweep_values = 1.5\nestimators = mv\n")
                .is_err()
        );
    }
}
