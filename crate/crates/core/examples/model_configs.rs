//! Cloud share and mAP for four edge/cloud model pairings at a few
//! bandwidths, read from `configs/model_configs.toml`.

use edgecloud::experiment::{load_config, run_sweep, SweepAxis, SweepSpec};

fn main() -> edgecloud::Result<()> {
    let mut config = load_config(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../configs/model_configs.toml"
    ))?;
    let indices: Vec<f64> = (0..config.model_configs.len()).map(|i| i as f64).collect();
    println!("{:>5}  {:<26} {:>7} {:>7}", "MHz", "models", "beta", "mAP");
    for mhz in [5.0, 10.0, 20.0] {
        config.scenario.bandwidth = mhz * 1e6;
        let spec = SweepSpec::new(SweepAxis::ModelConfig, indices.clone())?;
        for r in run_sweep(&config, &spec, false)? {
            let name = &config.model_configs[r.axis_value as usize].name;
            let o = r.outcome.map_err(edgecloud::Error::InvalidInput)?;
            println!(
                "{mhz:>5}  {name:<26} {:>7.4} {:>7.4}",
                o.joint.beta, o.joint.map_joint
            );
        }
    }
    Ok(())
}
