//! Fuse a cloud and an edge PR curve and compare the exact joint mAP with the
//! closed-form bound.

use edgecloud::{delta_gap, joint_map_exact, joint_map_lower_bound, FusionWeights, PrCurve};

fn main() -> edgecloud::Result<()> {
    let cloud = PrCurve::parse(
        "# recall precision, one row per IoU threshold
         0.55 0.97
         0.70 0.93
         0.82 0.88
         0.90 0.80",
    )?;
    let edge = PrCurve::parse(
        "0.50 0.92
         0.63 0.88
         0.74 0.82
         0.81 0.75",
    )?;
    println!("mAP cloud {:.4}, edge {:.4}", cloud.map(), edge.map());
    for k in 1..=cloud.len() {
        println!("  k={k}: delta = {:+.4}", delta_gap(&cloud, &edge, k)?);
    }
    println!(
        "{:>5} {:>8} {:>8} {:>9}",
        "beta", "exact", "bound", "exact-bd"
    );
    for i in 0..=10 {
        let w = FusionWeights::new(i as f64 / 10.0)?;
        let exact = joint_map_exact(&cloud, &edge, w)?;
        let bound = joint_map_lower_bound(cloud.map(), edge.map(), w);
        println!(
            "{:>5.1} {exact:>8.4} {bound:>8.4} {:>+9.5}",
            w.beta(),
            exact - bound
        );
    }
    Ok(())
}
