//! mAP and allocation versus total bandwidth, with the exhaustive search
//! alongside. Writes `bandwidth.csv` (and `bandwidth.svg` with the `plot`
//! feature) into the directory given as the first argument, or the system
//! temp directory.

use std::path::PathBuf;

use edgecloud::experiment::{emit_csv, load_config, run_sweep, SweepAxis, SweepSpec};

fn main() -> edgecloud::Result<()> {
    let out_dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    let config = load_config(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../configs/quick_oracle.toml"
    ))?;
    let mhz = [1.0, 2.0, 3.0, 5.0, 8.0, 10.0, 15.0, 20.0, 40.0, 80.0];
    let spec = SweepSpec::new(SweepAxis::Bandwidth, mhz.iter().map(|m| m * 1e6).collect())?;
    let records = run_sweep(&config, &spec, true)?;

    println!(
        "{:>6} {:>7} {:>7} {:>7} {:>7} {:>7} {:>10} {:>10}",
        "MHz", "joint", "cloud", "edge", "oracle", "beta", "data Mb/s", "M Mb/s"
    );
    for r in &records {
        let o = r
            .outcome
            .as_ref()
            .map_err(|e| edgecloud::Error::InvalidInput(e.clone()))?;
        let cloud = o
            .cloud_only
            .as_ref()
            .map_or("-".into(), |p| format!("{:.4}", p.map_joint));
        let oracle = o.oracle.as_ref().map_or(f64::NAN, |p| p.map_joint);
        println!(
            "{:>6} {:>7.4} {:>7} {:>7.4} {:>7.4} {:>7.4} {:>10.3} {:>10.3}",
            r.axis_value / 1e6,
            o.joint.map_joint,
            cloud,
            o.edge_only.map_joint,
            oracle,
            o.joint.beta,
            o.joint.rates.data / 1e6,
            o.joint.m_update / 1e6,
        );
    }

    let csv = out_dir.join("bandwidth.csv");
    emit_csv(&records, &csv)?;
    println!("wrote {}", csv.display());
    #[cfg(feature = "plot")]
    {
        use edgecloud::experiment::{emit_plot, Output};
        let svg = out_dir.join("bandwidth.svg");
        emit_plot(
            &records,
            &[
                Output::MapJoint,
                Output::MapCloudOnly,
                Output::MapEdgeOnly,
                Output::MapOracle,
            ],
            &svg,
        )?;
        println!("wrote {}", svg.display());
    }
    Ok(())
}
