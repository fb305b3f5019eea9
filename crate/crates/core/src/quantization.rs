//! Residual-data planning: which cloud frames carry quantized residual data,
//! and at how many bits per pixel, under the uplink budget.

use crate::error::{Error, Result};
use crate::response::CloudResponseModel;
use crate::scenario::Scenario;

/// Relative slack when comparing a discrete mix against its budget; absorbs
/// rounding in `x·Σ level·count` only.
const BUDGET_RTOL: f64 = 1e-12;

/// Allowed bits-per-pixel levels Ω. Level 0 (no residual data) is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizationLadder {
    levels: Vec<f64>,
}

impl Default for QuantizationLadder {
    fn default() -> Self {
        Self {
            levels: vec![0.125, 0.25, 0.5, 1.0],
        }
    }
}

impl QuantizationLadder {
    pub fn new(levels: Vec<f64>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::field("ladder", "needs at least one level"));
        }
        if let Some(bad) = levels.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
            return Err(Error::field(
                "ladder",
                format!("levels must be positive, got {bad}"),
            ));
        }
        if levels.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::field("ladder", "levels must be strictly increasing"));
        }
        Ok(Self { levels })
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn max(&self) -> f64 {
        *self.levels.last().expect("ladder is non-empty")
    }

    /// Levels including the implicit 0.
    fn with_zero(&self) -> impl Iterator<Item = f64> + '_ {
        std::iter::once(0.0).chain(self.levels.iter().copied())
    }

    /// Neighbours `(lower, upper)` in Ω∪{0} with `lower <= b < upper`, or
    /// `None` when `b` is at or above the top level.
    fn bracket(&self, b: f64) -> Option<(f64, f64)> {
        if b >= self.max() {
            return None;
        }
        let upper = self.levels.partition_point(|&l| l <= b);
        let lower = if upper == 0 {
            0.0
        } else {
            self.levels[upper - 1]
        };
        Some((lower, self.levels[upper]))
    }
}

/// `frames` per second sent with `bits_per_pixel` of residual data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelCount {
    pub bits_per_pixel: f64,
    pub frames: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantizationPlan {
    /// Fraction of all captured frames carrying residual data.
    pub rho: f64,
    /// Non-zero levels only, ascending; frame counts are per second.
    pub mix: Vec<LevelCount>,
    /// Residual-data rate, bit/s.
    pub rate_data: f64,
    /// Frame-averaged cloud mAP, frames without residual data at `g(0)`.
    pub map_cloud: f64,
    /// Frames per second analysed by the cloud (`β·N`).
    pub cloud_frames: f64,
    /// Relaxed uniform depth before discretization, when that path was used.
    pub bits_relaxed: Option<f64>,
}

impl QuantizationPlan {
    fn feature_only(model: &CloudResponseModel, cloud_frames: f64) -> Self {
        Self {
            rho: 0.0,
            mix: Vec::new(),
            rate_data: 0.0,
            map_cloud: model.at(0.0),
            cloud_frames,
            bits_relaxed: None,
        }
    }

    /// Mean bits per pixel over the cloud frames (zero-bit frames included).
    pub fn avg_bits(&self) -> f64 {
        if self.cloud_frames <= 0.0 {
            return 0.0;
        }
        self.mix
            .iter()
            .map(|l| l.bits_per_pixel * l.frames)
            .sum::<f64>()
            / self.cloud_frames
    }
}

/// Uplink rate left for residual data once the feature stream is paid for.
pub fn residual_budget(
    b_up: f64,
    se_up: f64,
    beta: f64,
    n_frames: f64,
    feature_bits: f64,
) -> Result<f64> {
    for (name, v) in [
        ("b_up", b_up),
        ("se_up", se_up),
        ("beta", beta),
        ("n_frames", n_frames),
        ("feature_bits", feature_bits),
    ] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::field(name, format!("must be non-negative, got {v}")));
        }
    }
    let capacity = b_up * se_up;
    let required = feature_bits * beta * n_frames;
    let budget = capacity - required;
    if budget < 0.0 {
        // β exactly at the uplink cap can land a rounding error below zero.
        if budget >= -capacity * BUDGET_RTOL {
            return Ok(0.0);
        }
        return Err(Error::InfeasibleBeta { required, capacity });
    }
    Ok(budget)
}

/// Uniform bits per pixel that spends `budget` exactly over `β·N` frames.
pub fn equal_bits_relaxed(budget: f64, beta: f64, n_frames: f64, pixels: f64) -> Result<f64> {
    if !(budget >= 0.0) {
        return Err(Error::field(
            "budget",
            format!("must be non-negative, got {budget}"),
        ));
    }
    let frames = beta * n_frames;
    if !(frames > 0.0) {
        return Err(Error::UndefinedSplit);
    }
    Ok(budget / (pixels * frames))
}

/// Rounds a relaxed depth onto the ladder by splitting `frames` between the
/// two neighbouring levels, never exceeding `budget`.
pub fn discretize(
    b_opt: f64,
    ladder: &QuantizationLadder,
    frames: f64,
    pixels: f64,
    budget: f64,
) -> Vec<LevelCount> {
    let mut mix = Vec::with_capacity(2);
    let mut push = |bits_per_pixel: f64, frames: f64| {
        if bits_per_pixel > 0.0 && frames > 0.0 {
            mix.push(LevelCount {
                bits_per_pixel,
                frames,
            });
        }
    };
    let Some((lower, upper)) = ladder.bracket(b_opt) else {
        push(ladder.max(), frames);
        return mix;
    };
    if b_opt == lower {
        push(lower, frames);
        return mix;
    }
    let mut n_up = (frames * (b_opt - lower) / (upper - lower))
        .round()
        .min(frames);
    let rate = |n_up: f64| pixels * (n_up * upper + (frames - n_up) * lower);
    if n_up > 0.0 && rate(n_up) > budget * (1.0 + BUDGET_RTOL) {
        n_up = (n_up - 1.0).max(0.0);
    }
    push(lower, frames - n_up);
    push(upper, n_up);
    mix
}

/// Frame-averaged mAP of `mix` over `total_frames`, frames absent from the
/// mix counted at `g(0)`.
pub fn frame_average_map(model: &CloudResponseModel, mix: &[LevelCount], total_frames: f64) -> f64 {
    if total_frames <= 0.0 {
        return model.at(0.0);
    }
    let carried: f64 = mix.iter().map(|l| l.frames).sum();
    let sum: f64 = mix
        .iter()
        .map(|l| l.frames * model.at(l.bits_per_pixel))
        .sum::<f64>()
        + (total_frames - carried).max(0.0) * model.at(0.0);
    sum / total_frames
}

/// Marginal-gain allocation over one unit frame per model.
pub fn greedy_heuristic(
    per_frame_models: &[CloudResponseModel],
    budget: f64,
    ladder: &QuantizationLadder,
    pixels: f64,
) -> QuantizationPlan {
    let frames: Vec<(&CloudResponseModel, f64)> =
        per_frame_models.iter().map(|m| (m, 1.0)).collect();
    let mut plan = greedy_weighted(&frames, budget, ladder, pixels);
    let n = per_frame_models.len() as f64;
    if n > 0.0 {
        plan.rho /= n;
    }
    plan
}

/// Greedy core over weighted frames; `rho` is returned as the carried frame
/// weight, not yet normalised.
fn greedy_weighted(
    frames: &[(&CloudResponseModel, f64)],
    budget: f64,
    ladder: &QuantizationLadder,
    pixels: f64,
) -> QuantizationPlan {
    let levels: Vec<f64> = ladder.with_zero().collect();
    let mut step = vec![0usize; frames.len()];
    let mut remaining = budget.max(0.0);
    loop {
        let mut best: Option<(usize, f64, f64)> = None;
        for (i, &(model, weight)) in frames.iter().enumerate() {
            let at = step[i];
            if at + 1 >= levels.len() || weight <= 0.0 {
                continue;
            }
            let (from, to) = (levels[at], levels[at + 1]);
            let cost = weight * pixels * (to - from);
            if cost > remaining * (1.0 + BUDGET_RTOL) {
                continue;
            }
            let efficiency = (model.at(to) - model.at(from)) / (to - from);
            if best.is_none_or(|(_, e, _)| efficiency > e) {
                best = Some((i, efficiency, cost));
            }
        }
        let Some((i, _, cost)) = best else { break };
        step[i] += 1;
        remaining = (remaining - cost).max(0.0);
    }

    let total: f64 = frames.iter().map(|f| f.1).sum();
    let mut mix: Vec<LevelCount> = Vec::new();
    for &level in &levels[1..] {
        let count: f64 = frames
            .iter()
            .zip(&step)
            .filter(|(_, &s)| levels[s] == level)
            .map(|(f, _)| f.1)
            .sum();
        if count > 0.0 {
            mix.push(LevelCount {
                bits_per_pixel: level,
                frames: count,
            });
        }
    }
    let map_sum: f64 = frames
        .iter()
        .zip(&step)
        .map(|(&(model, w), &s)| w * model.at(levels[s]))
        .sum();
    QuantizationPlan {
        rho: mix.iter().map(|l| l.frames).sum(),
        rate_data: pixels * mix.iter().map(|l| l.bits_per_pixel * l.frames).sum::<f64>(),
        map_cloud: if total > 0.0 {
            map_sum / total
        } else {
            frames.first().map_or(0.0, |f| f.0.at(0.0))
        },
        mix,
        cloud_frames: total,
        bits_relaxed: None,
    }
}

/// Best residual-data plan for cloud share `beta` on `b_up` Hz of uplink.
///
/// With a single shared response the relaxed uniform depth is rounded onto
/// the ladder; with per-frame responses the greedy heuristic is used, models
/// cycled over the cloud frames (the last one fractional).
pub fn solve_data_stream(scenario: &Scenario, b_up: f64, beta: f64) -> Result<QuantizationPlan> {
    let budget = residual_budget(
        b_up,
        scenario.se_up,
        beta,
        scenario.n_frames,
        scenario.feature_bits,
    )?;
    let cloud_frames = beta * scenario.n_frames;
    if cloud_frames <= 0.0 {
        return Ok(QuantizationPlan::feature_only(&scenario.cloud_model, 0.0));
    }

    if !scenario.frame_models.is_empty() {
        let whole = cloud_frames.floor() as usize;
        let frac = cloud_frames - whole as f64;
        let models = &scenario.frame_models;
        let mut frames: Vec<(&CloudResponseModel, f64)> = (0..whole)
            .map(|i| (&models[i % models.len()], 1.0))
            .collect();
        if frac > 0.0 {
            frames.push((&models[whole % models.len()], frac));
        }
        let mut plan = greedy_weighted(&frames, budget, &scenario.ladder, scenario.pixels);
        plan.rho /= scenario.n_frames;
        return Ok(plan);
    }

    let b_opt = equal_bits_relaxed(budget, beta, scenario.n_frames, scenario.pixels)?;
    let mix = discretize(
        b_opt,
        &scenario.ladder,
        cloud_frames,
        scenario.pixels,
        budget,
    );
    let carried: f64 = mix.iter().map(|l| l.frames).sum();
    Ok(QuantizationPlan {
        rho: carried / scenario.n_frames,
        rate_data: scenario.pixels * mix.iter().map(|l| l.bits_per_pixel * l.frames).sum::<f64>(),
        map_cloud: frame_average_map(&scenario.cloud_model, &mix, cloud_frames),
        mix,
        cloud_frames,
        bits_relaxed: Some(b_opt),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ladder(levels: &[f64]) -> QuantizationLadder {
        QuantizationLadder::new(levels.to_vec()).unwrap()
    }

    #[test]
    fn budget_after_feature_stream() {
        let b = residual_budget(8.55e6, 2.55, 0.385, 10.0, 860.0).unwrap();
        assert!((b - 21.799189e6).abs() < 1e-3);
        assert_eq!(
            residual_budget(1e6, 2.55, 0.0, 10.0, 860.0).unwrap(),
            2.55e6
        );
        assert!(matches!(
            residual_budget(0.0, 2.55, 0.5, 10.0, 860.0),
            Err(Error::InfeasibleBeta { .. })
        ));
    }

    #[test]
    fn relaxed_depth_anchors() {
        let b = equal_bits_relaxed(21.799189e6, 0.385, 10.0, 1e7).unwrap();
        assert!((b - 0.566_213).abs() < 1e-6);
        assert_eq!(equal_bits_relaxed(0.0, 0.5, 10.0, 1e7).unwrap(), 0.0);
        let budget = residual_budget(10e6, 2.55, 1.0, 5.0, 860.0).unwrap();
        assert!((budget - 25.4957e6).abs() < 1e-3);
        let b = equal_bits_relaxed(budget, 1.0, 5.0, 1e7).unwrap();
        assert!((b - 0.509_914).abs() < 1e-6);
        assert!((b - 0.514).abs() < 0.005);
        assert!(matches!(
            equal_bits_relaxed(1.0, 0.0, 10.0, 1e7),
            Err(Error::UndefinedSplit)
        ));
    }

    #[test]
    fn discretize_splits_between_neighbours() {
        let l = ladder(&[0.5, 1.0]);
        let mix = discretize(0.6, &l, 10.0, 1.0, 6.0);
        assert_eq!(
            mix,
            vec![
                LevelCount {
                    bits_per_pixel: 0.5,
                    frames: 8.0
                },
                LevelCount {
                    bits_per_pixel: 1.0,
                    frames: 2.0
                },
            ]
        );
    }

    #[test]
    fn discretize_degenerate_cases() {
        let l = QuantizationLadder::default();
        assert_eq!(
            discretize(0.25, &l, 4.0, 1.0, 1.0),
            vec![LevelCount {
                bits_per_pixel: 0.25,
                frames: 4.0
            }]
        );
        assert!(discretize(0.0, &l, 4.0, 1.0, 0.0).is_empty());
        assert_eq!(
            discretize(3.0, &l, 2.0, 1.0, 6.0),
            vec![LevelCount {
                bits_per_pixel: 1.0,
                frames: 2.0
            }]
        );
    }

    #[test]
    fn rounding_up_past_budget_steps_back() {
        // 0.56621 over 3.85 frames rounds to one frame at 1.0, which overshoots.
        let l = QuantizationLadder::default();
        let budget = 21.799189e6;
        let mix = discretize(0.566_213, &l, 3.85, 1e7, budget);
        assert_eq!(mix.len(), 1);
        assert_eq!(mix[0].bits_per_pixel, 0.5);
        assert!((mix[0].frames - 3.85).abs() < 1e-12);
    }

    #[test]
    fn default_scenario_reproduces_table_depth() {
        let s = Scenario::default();
        let plan = solve_data_stream(&s, 8.55e6, 0.385).unwrap();
        assert!((plan.bits_relaxed.unwrap() - 0.5662).abs() < 5e-4);
        assert!(plan.rate_data + s.feature_rate(0.385) <= 8.55e6 * s.se_up);
        assert!((plan.rho * s.n_frames - 3.85).abs() < 1e-12);
    }

    #[test]
    fn zero_beta_is_feature_only() {
        let s = Scenario::default();
        let plan = solve_data_stream(&s, 1e6, 0.0).unwrap();
        assert_eq!(plan.rho, 0.0);
        assert!(plan.mix.is_empty());
        assert_eq!(plan.map_cloud, 0.70);
    }

    #[test]
    fn budget_below_one_minimal_frame_sends_nothing() {
        let s = Scenario::default();
        let beta = 0.1;
        let b_up = (s.feature_rate(beta) + 0.9 * s.pixels * 0.125) / s.se_up;
        let plan = solve_data_stream(&s, b_up, beta).unwrap();
        assert!(plan.mix.is_empty());
        assert_eq!(plan.rate_data, 0.0);
        assert_eq!(plan.map_cloud, s.cloud_model.map_feature_only());
    }

    #[test]
    fn infeasible_beta_propagates() {
        let s = Scenario::default();
        assert!(matches!(
            solve_data_stream(&s, 100.0, 0.5),
            Err(Error::InfeasibleBeta { .. })
        ));
    }

    #[test]
    fn greedy_prefers_larger_marginal_gain() {
        let strong = CloudResponseModel::exponential(0.5, 0.95, 4.0).unwrap();
        let weak = CloudResponseModel::exponential(0.5, 0.6, 4.0).unwrap();
        let l = ladder(&[1.0]);
        let plan = greedy_heuristic(&[weak.clone(), strong.clone()], 1.0, &l, 1.0);
        assert_eq!(
            plan.mix,
            vec![LevelCount {
                bits_per_pixel: 1.0,
                frames: 1.0
            }]
        );
        assert!((plan.map_cloud - (weak.at(0.0) + strong.at(1.0)) / 2.0).abs() < 1e-15);
        assert_eq!(plan.rho, 0.5);
    }

    #[test]
    fn greedy_ties_go_to_lowest_index() {
        let m = CloudResponseModel::exponential(0.5, 0.9, 2.0).unwrap();
        let other = CloudResponseModel::exponential(0.6, 1.0, 2.0).unwrap();
        let l = ladder(&[1.0]);
        let plan = greedy_weighted(&[(&m, 1.0), (&other, 1.0)], 1.0, &l, 1.0);
        assert_eq!(plan.map_cloud, (m.at(1.0) + other.at(0.0)) / 2.0);
    }

    #[test]
    fn greedy_zero_budget_sends_nothing() {
        let m = CloudResponseModel::exponential(0.5, 0.9, 2.0).unwrap();
        let plan = greedy_heuristic(
            &[m.clone(), m.clone()],
            0.0,
            &QuantizationLadder::default(),
            1e7,
        );
        assert!(plan.mix.is_empty());
        assert_eq!(plan.rate_data, 0.0);
        assert_eq!(plan.map_cloud, 0.5);
    }

    #[test]
    fn heterogeneous_frames_use_greedy_path() {
        let mut s = Scenario::default();
        s.frame_models = vec![
            CloudResponseModel::exponential(0.6, 0.95, 3.0).unwrap(),
            CloudResponseModel::exponential(0.7, 0.8, 3.0).unwrap(),
        ];
        let plan = solve_data_stream(&s, 8.55e6, 0.385).unwrap();
        assert!(plan.bits_relaxed.is_none());
        assert!((plan.cloud_frames - 3.85).abs() < 1e-12);
        assert!(plan.rate_data + s.feature_rate(0.385) <= 8.55e6 * s.se_up * (1.0 + 1e-12));
        assert!(plan.rho <= 0.385 + 1e-12);
    }

    fn concave_model() -> impl Strategy<Value = CloudResponseModel> {
        (0.0..0.8f64, 0.01..0.2f64, 0.2..8.0f64)
            .prop_map(|(a, span, k)| CloudResponseModel::exponential(a, a + span, k).unwrap())
    }

    proptest! {
        #[test]
        fn spreading_bits_beats_concentrating(model in concave_model(), rho in 0.01..0.99f64, level in 0usize..4) {
            let b = QuantizationLadder::default().levels()[level];
            let concentrated = rho * model.at(b) + (1.0 - rho) * model.at(0.0);
            let spread = model.at(rho * b);
            prop_assert!(spread >= concentrated - 1e-15);
        }

        #[test]
        fn discretized_mix_is_close_and_within_budget(
            b_opt in 0.0..1.2f64,
            frames in 0.5..20.0f64,
        ) {
            let l = QuantizationLadder::default();
            let pixels = 1e7;
            let budget = b_opt * pixels * frames;
            let mix = discretize(b_opt, &l, frames, pixels, budget);
            let bits: f64 = mix.iter().map(|m| m.bits_per_pixel * m.frames).sum();
            let counted: f64 = mix.iter().map(|m| m.frames).sum();
            prop_assert!(counted <= frames + 1e-12);
            if b_opt < l.max() {
                prop_assert!(pixels * bits <= budget * (1.0 + 1e-12));
                let (lo, hi) = l.bracket(b_opt).unwrap();
                prop_assert!((bits / frames - b_opt).abs() <= (hi - lo) / frames + 1e-12);
            }
        }

        #[test]
        fn greedy_monotone_in_budget(model in concave_model(), n in 1usize..6, b1 in 0.0..6.0f64, extra in 0.0..3.0f64) {
            let models = vec![model; n];
            let l = QuantizationLadder::default();
            let lo = greedy_heuristic(&models, b1, &l, 1.0);
            let hi = greedy_heuristic(&models, b1 + extra, &l, 1.0);
            prop_assert!(hi.map_cloud >= lo.map_cloud - 1e-12);
            prop_assert!(hi.rate_data <= (b1 + extra) * (1.0 + 1e-12));
        }

        #[test]
        fn greedy_matches_rounded_relaxed_plan(model in concave_model(), n in 1usize..8, b_opt in 0.0..1.0f64) {
            let l = QuantizationLadder::default();
            let frames = n as f64;
            let budget = b_opt * frames;
            let greedy = greedy_heuristic(&vec![model.clone(); n], budget, &l, 1.0);
            let mix = discretize(b_opt, &l, frames, 1.0, budget);
            let rounded = frame_average_map(&model, &mix, frames);
            // One ladder step on one frame, averaged.
            let (lo, hi) = l.bracket(b_opt).unwrap_or((l.max(), l.max()));
            let step = (model.at(hi) - model.at(lo)).max(model.at(l.levels()[0]) - model.at(0.0));
            prop_assert!((greedy.map_cloud - rounded).abs() <= step + 1e-12);
        }
    }
}
