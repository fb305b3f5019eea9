//! Residual-data planning for one (β, uplink) choice: relaxed depth, ladder
//! rounding, and the greedy per-frame fallback.

use edgecloud::{
    discretize, equal_bits_relaxed, greedy_heuristic, residual_budget, solve_data_stream,
    CloudResponseModel, QuantizationLadder, Scenario,
};

fn main() -> edgecloud::Result<()> {
    let s = Scenario::default();
    let (b_up, beta) = (8.55e6, 0.385);
    let budget = residual_budget(b_up, s.se_up, beta, s.n_frames, s.feature_bits)?;
    let b_opt = equal_bits_relaxed(budget, beta, s.n_frames, s.pixels)?;
    println!(
        "budget {:.6e} bit/s, relaxed depth {b_opt:.5} bit/px",
        budget
    );

    let plan = solve_data_stream(&s, b_up, beta)?;
    println!(
        "rounded: rho {:.4}, R_D {:.4e} bit/s, avg {:.4} bit/px, mAP_L {:.5}",
        plan.rho,
        plan.rate_data,
        plan.avg_bits(),
        plan.map_cloud
    );
    for l in &plan.mix {
        println!(
            "  {:.3} bit/px on {:.3} frame/s",
            l.bits_per_pixel, l.frames
        );
    }

    let ladder = QuantizationLadder::new(vec![0.5, 1.0])?;
    let mix = discretize(0.6, &ladder, 10.0, 1.0, 6.0);
    println!("0.6 bit/px over 10 frames on {{0.5, 1}}: {mix:?}");

    let frames = vec![
        CloudResponseModel::exponential(0.60, 0.95, 3.0)?,
        CloudResponseModel::exponential(0.75, 0.85, 3.0)?,
        CloudResponseModel::exponential(0.68, 0.93, 1.5)?,
    ];
    for budget_bits in [0.0, 0.5e7, 1e7, 2e7, 3e7] {
        let g = greedy_heuristic(&frames, budget_bits, &QuantizationLadder::default(), 1e7);
        println!(
            "greedy budget {:.1e}: mAP {:.4}, spent {:.2e}, mix {:?}",
            budget_bits,
            g.map_cloud,
            g.rate_data,
            g.mix
                .iter()
                .map(|l| (l.bits_per_pixel, l.frames))
                .collect::<Vec<_>>()
        );
    }
    Ok(())
}
