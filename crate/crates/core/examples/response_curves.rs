//! Tabulate the cloud response g(bits per pixel) and the edge response
//! h(update rate), in closed form and from breakpoint tables.

use edgecloud::{Breakpoints, CloudResponseModel, EdgeResponseModel};

fn main() -> edgecloud::Result<()> {
    let g = CloudResponseModel::exponential(0.70, 0.92, 3.0)?;
    let g_table = CloudResponseModel::table(Breakpoints::new(vec![
        (0.0, 0.70),
        (0.25, 0.80),
        (0.5, 0.86),
        (1.0, 0.90),
        (2.0, 0.92),
    ])?)?;
    println!("{:>6} {:>8} {:>8} {:>8}", "b/px", "g", "g'", "g table");
    for b in [0.0, 0.125, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0] {
        println!(
            "{b:>6.3} {:>8.4} {:>8.4} {:>8.4}",
            g.eval(b)?,
            g.derivative(b)?,
            g_table.eval(b)?
        );
    }

    let h = EdgeResponseModel::exponential(0.75, 0.85, 230e3, 23e6, 3.0)?;
    println!("\n{:>10} {:>8} {:>10}", "M Mbit/s", "h", "h' per Mb");
    for m in [0.0, 0.1e6, 0.23e6, 1e6, 5e6, 10e6, 23e6, 40e6] {
        println!(
            "{:>10.2} {:>8.4} {:>10.5}",
            m / 1e6,
            h.eval(m),
            h.derivative(m) * 1e6
        );
    }
    Ok(())
}
