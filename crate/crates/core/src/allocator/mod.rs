//! Joint choice of the cloud share β and the uplink/downlink bandwidth split.
//!
//! The model-update rate is not searched: `h` is non-decreasing, so the best
//! update for a given downlink is the largest one it carries. That leaves a
//! two-dimensional problem in `(β, b_up)`, solved by a grid over `b_up` with a
//! bracketed golden-section search over β at each grid point.

mod stationarity;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pr_metrics::{joint_map_lower_bound, FusionWeights};
use crate::quantization::{solve_data_stream, QuantizationPlan};
use crate::scenario::Scenario;

pub use stationarity::{theorem7_residual, Stationarity, StationarityResidual};

/// Relative tolerance used when checking plan constraints.
const SLACK_RTOL: f64 = 1e-12;

/// Rates of the three streams, bit/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreamRates {
    pub feature: f64,
    pub data: f64,
    pub model: f64,
}

/// Unused capacity of each constraint; all non-negative for a valid plan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slack {
    /// `B − b_up − b_down`, Hz.
    pub bandwidth: f64,
    /// `b_up·S_u − R_F − R_D`, bit/s.
    pub uplink: f64,
    /// `b_down·S_d − M`, bit/s.
    pub downlink: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AllocationPlan {
    pub beta: f64,
    pub quant: QuantizationPlan,
    pub b_up: f64,
    pub b_down: f64,
    pub m_update: f64,
    pub map_joint: f64,
    pub map_cloud: f64,
    pub map_edge: f64,
    pub rates: StreamRates,
    pub slack: Slack,
}

impl AllocationPlan {
    /// Checks bandwidth, rate and update-range constraints against `scenario`.
    pub fn check(&self, scenario: &Scenario) -> Result<()> {
        let fail = |what: &str| Err(Error::invalid(format!("plan violates {what}")));
        let s = &self.slack;
        if s.bandwidth < -scenario.bandwidth * SLACK_RTOL {
            return fail("the bandwidth total");
        }
        if s.uplink < -(self.b_up * scenario.se_up) * SLACK_RTOL {
            return fail("the uplink capacity");
        }
        if s.downlink < -(self.b_down * scenario.se_down) * SLACK_RTOL {
            return fail("the downlink capacity");
        }
        let m = self.m_update;
        if m != 0.0 && !(scenario.m_min() <= m && m <= scenario.m_max()) {
            return fail("the model-update range");
        }
        if !(0.0..=1.0).contains(&self.beta) || self.quant.rho > self.beta + SLACK_RTOL {
            return fail("the task split");
        }
        Ok(())
    }
}

/// Largest admissible update rate over `b_down` Hz; 0 below `m_min`.
pub fn edge_update_from_downlink(b_down: f64, scenario: &Scenario) -> f64 {
    let capacity = b_down * scenario.se_down;
    if capacity >= scenario.m_min() {
        capacity.min(scenario.m_max())
    } else {
        0.0
    }
}

/// Builds the full plan for `(beta, b_up)`, the rest of the band going down.
pub fn evaluate(scenario: &Scenario, beta: f64, b_up: f64) -> Result<AllocationPlan> {
    let weights = FusionWeights::new(beta)?;
    if !(0.0..=scenario.bandwidth).contains(&b_up) {
        return Err(Error::field(
            "b_up",
            format!("{b_up} is outside [0, {}]", scenario.bandwidth),
        ));
    }
    let b_down = scenario.bandwidth - b_up;
    let m_update = edge_update_from_downlink(b_down, scenario);
    let quant = solve_data_stream(scenario, b_up, beta)?;
    Ok(assemble(scenario, weights, b_up, m_update, quant))
}

/// Plan for a fixed decision; `b_down` takes the rest of the band.
pub(crate) fn assemble(
    scenario: &Scenario,
    weights: FusionWeights,
    b_up: f64,
    m_update: f64,
    quant: QuantizationPlan,
) -> AllocationPlan {
    let beta = weights.beta();
    let b_down = scenario.bandwidth - b_up;
    let map_edge = scenario.edge_model.eval(m_update);
    let map_cloud = quant.map_cloud;
    let rates = StreamRates {
        feature: scenario.feature_rate(beta),
        data: quant.rate_data,
        model: m_update,
    };
    AllocationPlan {
        beta,
        b_up,
        b_down,
        m_update,
        map_joint: joint_map_lower_bound(map_cloud, map_edge, weights),
        map_cloud,
        map_edge,
        slack: Slack {
            bandwidth: scenario.bandwidth - b_up - b_down,
            uplink: b_up * scenario.se_up - rates.feature - rates.data,
            downlink: b_down * scenario.se_down - m_update,
        },
        rates,
        quant,
    }
}

/// Joint mAP at `(beta, b_up)`. A β above the uplink cap is evaluated at the
/// cap; an out-of-range `b_up` is clamped to `[0, B]`.
pub fn objective(scenario: &Scenario, beta: f64, b_up: f64) -> f64 {
    let b_up = b_up.clamp(0.0, scenario.bandwidth);
    let beta = beta.clamp(0.0, scenario.beta_cap(b_up));
    evaluate(scenario, beta, b_up)
        .map(|p| p.map_joint)
        .unwrap_or(f64::NEG_INFINITY)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    /// Evenly spaced `b_up` values on `[0, B]`.
    pub b_up_points: usize,
    /// Coarse β samples on `[0, cap]` that bracket the golden-section search.
    pub beta_scan_points: usize,
    /// Golden-section stopping width on β.
    pub beta_tol: f64,
    /// Local passes around the incumbent, each halving the `b_up` step.
    pub refine_passes: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            b_up_points: 201,
            beta_scan_points: 33,
            beta_tol: 1e-4,
            refine_passes: 2,
        }
    }
}

impl SolverSettings {
    pub fn validate(&self) -> Result<()> {
        if self.b_up_points < 2 {
            return Err(Error::field("b_up_points", "must be at least 2"));
        }
        if self.beta_scan_points < 2 {
            return Err(Error::field("beta_scan_points", "must be at least 2"));
        }
        if !(self.beta_tol > 0.0) {
            return Err(Error::field("beta_tol", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    value: f64,
    beta: f64,
    b_up: f64,
}

impl Candidate {
    /// Higher mAP wins; ties go to smaller β, then smaller `b_up`.
    fn better_than(&self, other: &Candidate) -> bool {
        if self.value != other.value {
            return self.value > other.value;
        }
        if self.beta != other.beta {
            return self.beta < other.beta;
        }
        self.b_up < other.b_up
    }
}

fn pick(a: Candidate, b: Candidate) -> Candidate {
    if b.better_than(&a) {
        b
    } else {
        a
    }
}

/// Best β for one `b_up`: a coarse scan, then golden-section search in the
/// bracket around the best scan point. Every evaluated point competes.
fn best_beta(scenario: &Scenario, b_up: f64, settings: &SolverSettings) -> Candidate {
    let cap = scenario.beta_cap(b_up);
    let eval = |beta: f64| Candidate {
        value: objective(scenario, beta, b_up),
        beta,
        b_up,
    };
    let mut best = eval(0.0);
    if cap <= 0.0 {
        return best;
    }
    let n = settings.beta_scan_points;
    let scan: Vec<f64> = (0..n)
        .map(|i| {
            if i + 1 == n {
                cap
            } else {
                cap * i as f64 / (n - 1) as f64
            }
        })
        .collect();
    let mut best_idx = 0;
    for (i, &beta) in scan.iter().enumerate().skip(1) {
        let c = eval(beta);
        if c.better_than(&best) {
            best = c;
            best_idx = i;
        }
    }

    let mut lo = scan[best_idx.saturating_sub(1)];
    let mut hi = scan[(best_idx + 1).min(n - 1)];
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut c1 = eval(x1);
    let mut c2 = eval(x2);
    while hi - lo > settings.beta_tol {
        best = pick(pick(best, c1), c2);
        if c1.value >= c2.value {
            hi = x2;
            x2 = x1;
            c2 = c1;
            x1 = hi - ratio * (hi - lo);
            c1 = eval(x1);
        } else {
            lo = x1;
            x1 = x2;
            c1 = c2;
            x2 = lo + ratio * (hi - lo);
            c2 = eval(x2);
        }
    }
    pick(pick(best, c1), c2)
}

fn best_over(scenario: &Scenario, b_ups: &[f64], settings: &SolverSettings) -> Candidate {
    let found: Vec<Candidate> = b_ups
        .par_iter()
        .map(|&b_up| best_beta(scenario, b_up, settings))
        .collect();
    found
        .into_iter()
        .reduce(pick)
        .expect("at least one b_up candidate")
}

/// Maximizes the joint mAP over `(β, b_up, b_down, M)`.
///
/// The grid always contains `b_up = 0` (edge only) and `b_up = B` with β at
/// its cap (cloud only when feasible), so the result is never worse than
/// either baseline. Deterministic for fixed inputs.
pub fn solve(scenario: &Scenario, settings: &SolverSettings) -> AllocationPlan {
    let bandwidth = scenario.bandwidth;
    let n = settings.b_up_points.max(2);
    let grid: Vec<f64> = (0..n)
        .map(|i| {
            if i + 1 == n {
                bandwidth
            } else {
                bandwidth * i as f64 / (n - 1) as f64
            }
        })
        .collect();
    let mut best = best_over(scenario, &grid, settings);

    let mut step = bandwidth / (n - 1) as f64;
    for _ in 0..settings.refine_passes {
        step /= 2.0;
        let local: Vec<f64> = [-2.0, -1.0, 1.0, 2.0]
            .iter()
            .map(|k| best.b_up + k * step)
            .filter(|b| (0.0..=bandwidth).contains(b))
            .collect();
        if !local.is_empty() {
            best = pick(best, best_over(scenario, &local, settings));
        }
    }
    let beta = best.beta.min(scenario.beta_cap(best.b_up));
    evaluate(scenario, beta, best.b_up).expect("search only visits feasible points")
}

/// Every frame to the cloud over the whole band; no model update.
pub fn solve_cloud_only(scenario: &Scenario) -> Result<AllocationPlan> {
    evaluate(scenario, 1.0, scenario.bandwidth)
}

/// Every frame on the edge; the whole band carries the model update.
pub fn solve_edge_only(scenario: &Scenario) -> AllocationPlan {
    evaluate(scenario, 0.0, 0.0).expect("edge-only plan is always feasible")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn downlink_update_anchor() {
        let s = Scenario::default();
        assert_eq!(edge_update_from_downlink(1.45e6, &s), 7.25e6);
        assert_eq!(edge_update_from_downlink(0.0, &s), 0.0);
        assert_eq!(edge_update_from_downlink(40e3, &s), 0.0);
        assert_eq!(edge_update_from_downlink(10e6, &s), 23e6);
    }

    #[test]
    fn update_rate_is_monotone_in_downlink() {
        let s = Scenario::default();
        let mut last = 0.0;
        for i in 0..=1000 {
            let m = edge_update_from_downlink(i as f64 * 1e4, &s);
            assert!(m >= last);
            last = m;
        }
    }

    #[test]
    fn objective_short_circuits_at_the_ends() {
        let s = Scenario::default();
        let edge = s
            .edge_model
            .eval(edge_update_from_downlink(s.bandwidth - 3e6, &s));
        assert_eq!(objective(&s, 0.0, 3e6), edge);
        let cloud = solve_data_stream(&s, s.bandwidth, 1.0).unwrap().map_cloud;
        assert_eq!(objective(&s, 1.0, s.bandwidth), cloud);
    }

    #[test]
    fn table_row_composition() {
        let s = Scenario::default();
        let plan = evaluate(&s, 0.385, 8.55e6).unwrap();
        assert!((plan.b_down - 1.45e6).abs() < 1e-6);
        let l = plan.map_cloud;
        let m = plan.map_edge;
        let expected = l * m / ((1.0 - 0.385) * l + 0.385 * m);
        assert!((plan.map_joint - expected).abs() < 1e-15);
        assert!((plan.quant.bits_relaxed.unwrap() - 0.5662).abs() < 5e-4);
        plan.check(&s).unwrap();
    }

    #[test]
    fn beta_above_cap_is_capped_in_objective() {
        let s = Scenario::default();
        let b_up = 1000.0;
        let cap = s.beta_cap(b_up);
        assert_eq!(objective(&s, 0.9, b_up), objective(&s, cap, b_up));
        assert!(matches!(
            evaluate(&s, 0.9, b_up),
            Err(Error::InfeasibleBeta { .. })
        ));
    }

    #[test]
    fn baselines() {
        let s = Scenario::default();
        let edge = solve_edge_only(&s);
        assert_eq!(edge.m_update, 23e6);
        assert_eq!(edge.map_joint, s.edge_model.map_max());

        let mut tiny = s.clone();
        tiny.bandwidth = 0.0;
        assert_eq!(
            solve_edge_only(&tiny).map_joint,
            s.edge_model.map_baseline()
        );

        let cloud = solve_cloud_only(&s).unwrap();
        assert_eq!(
            (cloud.beta, cloud.b_up, cloud.m_update),
            (1.0, s.bandwidth, 0.0)
        );

        let mut starved = s.clone();
        starved.bandwidth = 0.9 * s.feature_bits * s.n_frames / s.se_up;
        assert!(matches!(
            solve_cloud_only(&starved),
            Err(Error::InfeasibleBeta { .. })
        ));

        let mut wide = s.clone();
        wide.bandwidth = 1e12;
        let cloud = solve_cloud_only(&wide).unwrap();
        assert!(
            (cloud.map_cloud - wide.cloud_model.eval(wide.ladder.max()).unwrap()).abs() < 1e-15
        );
    }

    #[test]
    fn solve_dominates_and_is_valid() {
        for b in [0.0, 1e3, 1e6, 5e6, 10e6, 40e6] {
            let mut s = Scenario::default();
            s.bandwidth = b;
            let plan = solve(&s, &SolverSettings::default());
            plan.check(&s).unwrap();
            let edge = solve_edge_only(&s).map_joint;
            assert!(plan.map_joint >= edge - 1e-9);
            if let Ok(cloud) = solve_cloud_only(&s) {
                assert!(plan.map_joint >= cloud.map_joint - 1e-9);
            }
        }
    }

    #[test]
    fn vanishing_band_keeps_frames_on_edge() {
        let mut s = Scenario::default();
        s.bandwidth = 1e3;
        let plan = solve(&s, &SolverSettings::default());
        assert!(plan.beta < 0.05);
        s.bandwidth = 0.0;
        let plan = solve(&s, &SolverSettings::default());
        assert_eq!((plan.beta, plan.m_update), (0.0, 0.0));
    }

    #[test]
    fn wide_band_sends_everything_to_cloud() {
        let mut s = Scenario::default();
        s.bandwidth = 80e6;
        let plan = solve(&s, &SolverSettings::default());
        assert!(plan.beta > 0.99, "beta = {}", plan.beta);
    }

    #[test]
    fn solve_is_deterministic() {
        let s = Scenario::default();
        let a = solve(&s, &SolverSettings::default());
        let b = solve(&s, &SolverSettings::default());
        assert_eq!(a, b);
    }
}
