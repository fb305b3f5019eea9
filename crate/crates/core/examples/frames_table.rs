//! Allocation at several frame rates: how the cloud share, band split,
//! update rate and residual depth respond as the frame load grows.

use edgecloud::{solve, Scenario, SolverSettings};

fn main() {
    println!(
        "{:>4} {:>7} {:>9} {:>9} {:>10} {:>9} {:>11} {:>7}",
        "N", "beta", "B_u MHz", "B_d MHz", "M Mbit/s", "avg b/px", "relaxed b/px", "mAP"
    );
    for n in [5.0, 10.0, 15.0, 20.0] {
        let s = Scenario {
            n_frames: n,
            ..Scenario::default()
        };
        let p = solve(&s, &SolverSettings::default());
        let relaxed = p
            .quant
            .bits_relaxed
            .map_or("-".into(), |b| format!("{b:.4}"));
        println!(
            "{n:>4} {:>7.4} {:>9.3} {:>9.3} {:>10.3} {:>9.4} {:>11} {:>7.4}",
            p.beta,
            p.b_up / 1e6,
            p.b_down / 1e6,
            p.m_update / 1e6,
            p.quant.avg_bits(),
            relaxed,
            p.map_joint
        );
    }
}
