use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::config::Config;
use crate::allocator::{solve, solve_cloud_only, solve_edge_only, AllocationPlan};
use crate::error::{Error, Result};
use crate::oracle::exhaustive_search;
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Total bandwidth, Hz.
    Bandwidth,
    FramesPerSecond,
    SeUp,
    SeDown,
    /// Index into the config's model configurations.
    ModelConfig,
}

impl SweepAxis {
    pub const ALL: [SweepAxis; 5] = [
        SweepAxis::Bandwidth,
        SweepAxis::FramesPerSecond,
        SweepAxis::SeUp,
        SweepAxis::SeDown,
        SweepAxis::ModelConfig,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Bandwidth => "bandwidth",
            SweepAxis::FramesPerSecond => "frames_per_second",
            SweepAxis::SeUp => "se_up",
            SweepAxis::SeDown => "se_down",
            SweepAxis::ModelConfig => "model_config",
        }
    }

    /// Copy of `config`'s scenario with this axis set to `value`.
    pub fn apply(self, config: &Config, value: f64) -> Result<Scenario> {
        let mut s = config.scenario.clone();
        match self {
            SweepAxis::Bandwidth => s.bandwidth = value,
            SweepAxis::FramesPerSecond => s.n_frames = value,
            SweepAxis::SeUp => s.se_up = value,
            SweepAxis::SeDown => s.se_down = value,
            SweepAxis::ModelConfig => {
                let n = config.model_configs.len();
                if value.fract() != 0.0 || value < 0.0 || value as usize >= n {
                    return Err(Error::field(
                        "model_config",
                        format!("{value} is not an index below {n}"),
                    ));
                }
                let m = &config.model_configs[value as usize];
                s.cloud_model = m.cloud_model.clone();
                s.edge_model = m.edge_model.clone();
            }
        }
        s.validate()?;
        Ok(s)
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepAxis::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = SweepAxis::ALL.iter().map(|a| a.name()).collect();
                Error::invalid(format!(
                    "unknown axis `{s}`; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

/// Quantities a sweep can report; the CSV always carries all of them, the
/// plot draws the mAP ones that are selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Output {
    MapJoint,
    MapCloudOnly,
    MapEdgeOnly,
    MapOracle,
    Beta,
    BUp,
    BDown,
    MUpdate,
    RateFeature,
    RateData,
    AvgBits,
}

impl Output {
    pub const ALL: [Output; 11] = [
        Output::MapJoint,
        Output::MapCloudOnly,
        Output::MapEdgeOnly,
        Output::MapOracle,
        Output::Beta,
        Output::BUp,
        Output::BDown,
        Output::MUpdate,
        Output::RateFeature,
        Output::RateData,
        Output::AvgBits,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Output::MapJoint => "map_joint",
            Output::MapCloudOnly => "map_cloud_only",
            Output::MapEdgeOnly => "map_edge_only",
            Output::MapOracle => "map_oracle",
            Output::Beta => "beta",
            Output::BUp => "b_up",
            Output::BDown => "b_down",
            Output::MUpdate => "m_update",
            Output::RateFeature => "rate_feature",
            Output::RateData => "rate_data",
            Output::AvgBits => "avg_bits",
        }
    }

    /// Value of this output in `record`, `None` when it was not computed.
    pub fn value(self, record: &RunRecord) -> Option<f64> {
        let out = record.outcome.as_ref().ok()?;
        let j = &out.joint;
        Some(match self {
            Output::MapJoint => j.map_joint,
            Output::MapCloudOnly => out.cloud_only.as_ref()?.map_joint,
            Output::MapEdgeOnly => out.edge_only.map_joint,
            Output::MapOracle => out.oracle.as_ref()?.map_joint,
            Output::Beta => j.beta,
            Output::BUp => j.b_up,
            Output::BDown => j.b_down,
            Output::MUpdate => j.m_update,
            Output::RateFeature => j.rates.feature,
            Output::RateData => j.rates.data,
            Output::AvgBits => j.quant.avg_bits(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub outputs: Vec<Output>,
}

impl SweepSpec {
    /// Sweep reporting every output. Values must be non-empty and, for the
    /// physical axes, strictly monotone.
    pub fn new(axis: SweepAxis, values: Vec<f64>) -> Result<Self> {
        let spec = Self {
            axis,
            values,
            outputs: Output::ALL.to_vec(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::field("values", "needs at least one value"));
        }
        if let Some(v) = self.values.iter().find(|v| !v.is_finite()) {
            return Err(Error::field("values", format!("{v} is not finite")));
        }
        if self.axis != SweepAxis::ModelConfig {
            let up = self.values.windows(2).all(|w| w[1] > w[0]);
            let down = self.values.windows(2).all(|w| w[1] < w[0]);
            if !(up || down) {
                return Err(Error::field("values", "must be strictly monotone"));
            }
        }
        Ok(())
    }
}

/// Plans computed at one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub joint: AllocationPlan,
    /// `None` when the feature stream alone does not fit the band.
    pub cloud_only: Option<AllocationPlan>,
    pub edge_only: AllocationPlan,
    pub oracle: Option<AllocationPlan>,
}

#[derive(Debug, Clone)]
pub struct RunRecord {
    pub axis: SweepAxis,
    pub axis_value: f64,
    pub scenario: Scenario,
    /// The failure message when this point could not be planned.
    pub outcome: std::result::Result<RunOutcome, String>,
    pub wall_time: Duration,
}

fn run_point(config: &Config, axis: SweepAxis, value: f64, with_oracle: bool) -> RunRecord {
    let start = Instant::now();
    let mut scenario = config.scenario.clone();
    let outcome = (|| -> Result<RunOutcome> {
        scenario = axis.apply(config, value)?;
        let oracle = if with_oracle {
            let mut grid = config.oracle.clone();
            grid.bit_levels = std::iter::once(0.0)
                .chain(scenario.ladder.levels().iter().copied())
                .collect();
            Some(exhaustive_search(&scenario, &grid)?)
        } else {
            None
        };
        Ok(RunOutcome {
            joint: solve(&scenario, &config.solver),
            cloud_only: solve_cloud_only(&scenario).ok(),
            edge_only: solve_edge_only(&scenario),
            oracle,
        })
    })()
    .map_err(|e| e.to_string());
    RunRecord {
        axis,
        axis_value: value,
        scenario,
        outcome,
        wall_time: start.elapsed(),
    }
}

/// One record per value, in the order given. Points run concurrently; a
/// failing point is recorded and the rest still run.
pub fn run_sweep(config: &Config, spec: &SweepSpec, with_oracle: bool) -> Result<Vec<RunRecord>> {
    spec.validate()?;
    Ok(spec
        .values
        .par_iter()
        .map(|&v| run_point(config, spec.axis, v, with_oracle))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_names_round_trip() {
        for a in SweepAxis::ALL {
            assert_eq!(a.name().parse::<SweepAxis>().unwrap(), a);
        }
        assert!("bandwith".parse::<SweepAxis>().is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(SweepSpec::new(SweepAxis::Bandwidth, vec![]).is_err());
        assert!(SweepSpec::new(SweepAxis::Bandwidth, vec![1.0, 1.0]).is_err());
        assert!(SweepSpec::new(SweepAxis::Bandwidth, vec![1.0, 3.0, 2.0]).is_err());
        assert!(SweepSpec::new(SweepAxis::Bandwidth, vec![3.0, 2.0]).is_ok());
        assert!(SweepSpec::new(SweepAxis::ModelConfig, vec![1.0, 0.0, 1.0]).is_ok());
    }

    #[test]
    fn single_value_gives_one_record() {
        let spec = SweepSpec::new(SweepAxis::Bandwidth, vec![5e6]).unwrap();
        let records = run_sweep(&Config::default(), &spec, false).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].scenario.bandwidth, 5e6);
        assert!(Output::MapOracle.value(&records[0]).is_none());
        assert!(Output::MapJoint.value(&records[0]).is_some());
    }

    #[test]
    fn failing_point_is_recorded_and_sweep_continues() {
        let spec = SweepSpec::new(SweepAxis::SeUp, vec![-1.0, 2.55]).unwrap();
        let records = run_sweep(&Config::default(), &spec, false).unwrap();
        assert!(records[0].outcome.as_ref().unwrap_err().contains("se_up"));
        assert!(records[1].outcome.is_ok());
    }

    #[test]
    fn model_config_index_is_checked() {
        let spec = SweepSpec::new(SweepAxis::ModelConfig, vec![0.0]).unwrap();
        let records = run_sweep(&Config::default(), &spec, false).unwrap();
        assert!(records[0].outcome.is_err());
    }

    #[test]
    fn bandwidth_sweep_is_ordered_and_sandwiched() {
        let values = vec![1e6, 2e6, 5e6, 10e6, 20e6, 40e6];
        let spec = SweepSpec::new(SweepAxis::Bandwidth, values.clone()).unwrap();
        let records = run_sweep(&Config::default(), &spec, false).unwrap();
        let mut last = f64::NEG_INFINITY;
        for (r, v) in records.iter().zip(&values) {
            assert_eq!(r.axis_value, *v);
            let joint = Output::MapJoint.value(r).unwrap();
            assert!(joint >= last);
            last = joint;
            assert!(Output::MapEdgeOnly.value(r).unwrap() <= joint + 1e-9);
            if let Some(c) = Output::MapCloudOnly.value(r) {
                assert!(c <= joint + 1e-9);
            }
        }
    }
}
