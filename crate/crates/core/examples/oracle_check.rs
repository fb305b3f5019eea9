//! Solver against exhaustive search across bandwidths.

use std::time::Instant;

use edgecloud::{exhaustive_search, solve, OracleGrid, Scenario, SolverSettings};

fn main() -> edgecloud::Result<()> {
    println!(
        "{:>6} {:>9} {:>9} {:>10} {:>9} {:>9}",
        "B MHz", "solver", "oracle", "diff", "t_solve", "t_oracle"
    );
    for mhz in [1.0, 2.0, 5.0, 10.0, 20.0, 40.0] {
        let s = Scenario {
            bandwidth: mhz * 1e6,
            ..Scenario::default()
        };
        let t = Instant::now();
        let plan = solve(&s, &SolverSettings::default());
        let t_solve = t.elapsed();
        let grid = OracleGrid::for_scenario(&s);
        let t = Instant::now();
        let best = exhaustive_search(&s, &grid)?;
        let t_oracle = t.elapsed();
        println!(
            "{mhz:>6} {:>9.6} {:>9.6} {:>+10.2e} {:>8.1?} {:>8.1?}",
            plan.map_joint,
            best.map_joint,
            plan.map_joint - best.map_joint,
            t_solve,
            t_oracle
        );
    }
    Ok(())
}
