//! Exhaustive search over a discretized decision space, used to check the
//! solver.
//!
//! Every cloud frame carries the same depth `b̂ ∈ Ω ∪ {0}`, and the update
//! rate `M` ranges over `{0}` plus an even grid on `[m_min, m_max]`; the
//! downlink always takes the rest of the band. Per-frame response models are
//! ignored: the shared cloud model is used throughout.

use rayon::prelude::*;

use crate::allocator::{assemble, AllocationPlan};
use crate::error::{Error, Result};
use crate::pr_metrics::{joint_map_lower_bound, FusionWeights};
use crate::quantization::{LevelCount, QuantizationPlan};
use crate::scenario::Scenario;

/// Refuse grids with more combinations than this.
pub const MAX_COMBINATIONS: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleGrid {
    /// Evenly spaced β values on `[0, 1]`.
    pub beta_steps: usize,
    /// Evenly spaced `b_up` values on `[0, B]`.
    pub b_up_steps: usize,
    /// Evenly spaced update rates on `[m_min, m_max]`, plus `M = 0`.
    pub m_steps: usize,
    /// Uniform residual depths tried, bits per pixel.
    pub bit_levels: Vec<f64>,
}

impl OracleGrid {
    /// 201 × 201 × 51 grid with depths `Ω ∪ {0}`.
    pub fn for_scenario(scenario: &Scenario) -> Self {
        let mut bit_levels = vec![0.0];
        bit_levels.extend_from_slice(scenario.ladder.levels());
        Self {
            beta_steps: 201,
            b_up_steps: 201,
            m_steps: 51,
            bit_levels,
        }
    }

    /// Number of `(β, b_up, M, b̂)` combinations, infeasible ones included.
    pub fn combinations(&self) -> u128 {
        self.beta_steps as u128
            * self.b_up_steps as u128
            * (self.m_steps as u128 + 1)
            * self.bit_levels.len() as u128
    }

    pub fn validate(&self) -> Result<()> {
        for (name, n) in [
            ("beta_steps", self.beta_steps),
            ("b_up_steps", self.b_up_steps),
            ("m_steps", self.m_steps),
        ] {
            if n < 2 {
                return Err(Error::field(name, format!("must be at least 2, got {n}")));
            }
        }
        if self.bit_levels.is_empty() {
            return Err(Error::field("bit_levels", "needs at least one level"));
        }
        if let Some(bad) = self
            .bit_levels
            .iter()
            .find(|b| !(**b >= 0.0 && b.is_finite()))
        {
            return Err(Error::field(
                "bit_levels",
                format!("must be non-negative, got {bad}"),
            ));
        }
        let count = self.combinations();
        if count > MAX_COMBINATIONS {
            return Err(Error::GridTooLarge {
                count,
                limit: MAX_COMBINATIONS,
            });
        }
        Ok(())
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
struct Point {
    value: f64,
    beta: usize,
    b_up: usize,
    m: usize,
    bits: usize,
}

impl Point {
    /// Same order as the solver, then smaller `M`, then smaller `b̂`. Grid
    /// indices are monotone in their values, so indices compare directly.
    fn better_than(&self, o: &Point) -> bool {
        if self.value != o.value {
            return self.value > o.value;
        }
        (self.beta, self.b_up, self.m, self.bits) < (o.beta, o.b_up, o.m, o.bits)
    }
}

/// Best feasible grid point.
pub fn exhaustive_search(scenario: &Scenario, grid: &OracleGrid) -> Result<AllocationPlan> {
    grid.validate()?;
    let betas = linspace(0.0, 1.0, grid.beta_steps);
    let b_ups = linspace(0.0, scenario.bandwidth, grid.b_up_steps);
    let mut updates = vec![0.0];
    updates.extend(linspace(scenario.m_min(), scenario.m_max(), grid.m_steps));
    let mut levels = grid.bit_levels.clone();
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    let g: Vec<f64> = levels.iter().map(|&b| scenario.cloud_model.at(b)).collect();
    let h: Vec<f64> = updates
        .iter()
        .map(|&m| scenario.edge_model.eval(m))
        .collect();
    let (n, x) = (scenario.n_frames, scenario.pixels);

    let best = (0..betas.len())
        .into_par_iter()
        .map(|bi| {
            let beta = betas[bi];
            let weights = FusionWeights::new(beta).expect("grid β is in [0, 1]");
            let mut best: Option<Point> = None;
            for (ui, &b_up) in b_ups.iter().enumerate() {
                let b_down = scenario.bandwidth - b_up;
                let downlink = b_down * scenario.se_down;
                let uplink = b_up * scenario.se_up;
                for (mi, &m) in updates.iter().enumerate() {
                    if m > downlink {
                        continue;
                    }
                    for (li, &bits) in levels.iter().enumerate() {
                        if beta == 0.0 && bits > 0.0 {
                            continue;
                        }
                        let rate = scenario.feature_rate(beta) + x * bits * beta * n;
                        if rate > uplink {
                            continue;
                        }
                        let p = Point {
                            value: joint_map_lower_bound(g[li], h[mi], weights),
                            beta: bi,
                            b_up: ui,
                            m: mi,
                            bits: li,
                        };
                        if best.is_none_or(|b| p.better_than(&b)) {
                            best = Some(p);
                        }
                    }
                }
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .reduce(|a, b| if b.better_than(&a) { b } else { a })
        .ok_or_else(|| Error::invalid("oracle grid has no feasible point"))?;

    let beta = betas[best.beta];
    let bits = levels[best.bits];
    let cloud_frames = beta * n;
    let carries = bits > 0.0 && cloud_frames > 0.0;
    let quant = QuantizationPlan {
        rho: if carries { beta } else { 0.0 },
        mix: if carries {
            vec![LevelCount {
                bits_per_pixel: bits,
                frames: cloud_frames,
            }]
        } else {
            Vec::new()
        },
        rate_data: x * bits * cloud_frames,
        map_cloud: g[best.bits],
        cloud_frames,
        bits_relaxed: None,
    };
    Ok(assemble(
        scenario,
        FusionWeights::new(beta)?,
        b_ups[best.b_up],
        updates[best.m],
        quant,
    ))
}
