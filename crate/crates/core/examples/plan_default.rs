//! Joint plan for the default link against both single-model baselines.

use edgecloud::{
    solve, solve_cloud_only, solve_edge_only, theorem7_residual, Scenario, SolverSettings,
};

fn main() -> edgecloud::Result<()> {
    let s = Scenario::default();
    let joint = solve(&s, &SolverSettings::default());
    joint.check(&s)?;
    let cloud = solve_cloud_only(&s)?;
    let edge = solve_edge_only(&s);

    println!(
        "{:<10} {:>7} {:>7} {:>9} {:>9} {:>10} {:>7}",
        "plan", "mAP", "beta", "B_u MHz", "B_d MHz", "M Mbit/s", "b/px"
    );
    for (name, p) in [("joint", &joint), ("cloud", &cloud), ("edge", &edge)] {
        println!(
            "{name:<10} {:>7.4} {:>7.4} {:>9.3} {:>9.3} {:>10.3} {:>7.4}",
            p.map_joint,
            p.beta,
            p.b_up / 1e6,
            p.b_down / 1e6,
            p.m_update / 1e6,
            p.quant.avg_bits()
        );
    }
    println!(
        "slack: band {:.3e} Hz, uplink {:.3e} bit/s, downlink {:.3e} bit/s",
        joint.slack.bandwidth, joint.slack.uplink, joint.slack.downlink
    );
    println!("stationarity: {:?}", theorem7_residual(&s, &joint));
    Ok(())
}
