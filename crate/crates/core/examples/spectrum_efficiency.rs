//! Joint mAP over a grid of uplink and downlink spectral efficiencies.

use edgecloud::{solve, Scenario, SolverSettings};

fn main() {
    let downs = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0];
    print!("{:>6}", "S_u\\S_d");
    for d in downs {
        print!(" {d:>7}");
    }
    println!();
    for up in [2.55, 5.0, 10.0, 12.0] {
        print!("{up:>7}");
        for down in downs {
            let s = Scenario {
                se_up: up,
                se_down: down,
                ..Scenario::default()
            };
            print!(" {:>7.4}", solve(&s, &SolverSettings::default()).map_joint);
        }
        println!();
    }
}
