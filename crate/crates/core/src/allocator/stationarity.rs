//! First-order optimality diagnostic for interior plans.
//!
//! With `M = b_down·S_d` and the relaxed depth `b̂ = (b_up·S_u − F̄βN)/(xβN)`,
//! setting the partial derivatives of the joint bound to zero gives
//!
//! * in β: `g'(b̂)·(b̂ + F̄/x)·mAP_S = mAP_L·(mAP_L − mAP_S)`
//! * in `b_up`: `S_u·mAP_S²·g'(b̂)/(x·N) = S_d·(1 − β)·mAP_L²·h'(M)`
//!
//! Each residual is the difference of the two sides over the larger one. The
//! closed-form relation between `mAP_L` and `mAP_S` obtained by eliminating
//! β is also reported as written, though it mixes bits per frame with bits
//! per pixel and is often undefined at realistic magnitudes.

use super::AllocationPlan;
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationarityResidual {
    /// Normalized residual of the β condition.
    pub split: f64,
    /// Normalized residual of the bandwidth condition.
    pub bandwidth: f64,
    /// `mAP_L/mAP_S` minus the closed-form right-hand side; `None` when the
    /// square roots are undefined.
    pub verbatim: Option<f64>,
}

impl StationarityResidual {
    /// The larger-magnitude of the two normalized residuals, signed.
    pub fn value(&self) -> f64 {
        if self.split.abs() >= self.bandwidth.abs() {
            self.split
        } else {
            self.bandwidth
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stationarity {
    /// The plan sits on a boundary where the interior conditions do not apply.
    NotApplicable(String),
    Interior(StationarityResidual),
}

impl Stationarity {
    pub fn residual(&self) -> Option<f64> {
        match self {
            Stationarity::Interior(r) => Some(r.value()),
            Stationarity::NotApplicable(_) => None,
        }
    }
}

fn normalized(lhs: f64, rhs: f64) -> f64 {
    let scale = lhs.abs().max(rhs.abs());
    if scale == 0.0 {
        0.0
    } else {
        (lhs - rhs) / scale
    }
}

/// Stationarity residuals of `plan`, using the continuous relaxation of its
/// residual-data depth.
pub fn theorem7_residual(scenario: &Scenario, plan: &AllocationPlan) -> Stationarity {
    let na = |why: &str| Stationarity::NotApplicable(why.to_string());
    if !(plan.beta > 0.0 && plan.beta < 1.0) {
        return na("cloud share is at a boundary");
    }
    if !(plan.b_up > 0.0 && plan.b_up < scenario.bandwidth) {
        return na("bandwidth split is at a boundary");
    }
    let m = plan.m_update;
    if !(m > scenario.m_min() && m < scenario.m_max()) {
        return na("model-update rate is at a boundary");
    }
    if !scenario.frame_models.is_empty() {
        return na("per-frame responses have no shared derivative");
    }
    let Some(b) = plan.quant.bits_relaxed else {
        return na("no relaxed residual depth");
    };
    if !(b > 0.0 && b < scenario.ladder.max()) {
        return na("residual depth is at a boundary");
    }

    let g = &scenario.cloud_model;
    let l = g.at(b);
    let s = scenario.edge_model.eval(m);
    let dg = g.derivative(b).expect("b is positive");
    let dh = scenario.edge_model.derivative(m);
    let (n, x, f) = (scenario.n_frames, scenario.pixels, scenario.feature_bits);

    let split = normalized(dg * (b + f / x) * s, l * (l - s));
    let bandwidth = normalized(
        scenario.se_up * s * s * dg / (x * n),
        scenario.se_down * (1.0 - plan.beta) * l * l * dh,
    );

    let verbatim = (|| {
        if l == s || dh <= 0.0 {
            return None;
        }
        let first = n * (f + b) * l / (l - s) - s / dh * scenario.se_up / scenario.se_down;
        let second = dg / (plan.beta * n);
        if first < 0.0 || second < 0.0 {
            return None;
        }
        Some(l / s - first.sqrt() * second.sqrt())
    })();

    Stationarity::Interior(StationarityResidual {
        split,
        bandwidth,
        verbatim,
    })
}
