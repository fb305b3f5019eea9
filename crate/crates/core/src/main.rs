use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use edgecloud::experiment::{self, Config, SweepAxis, SweepSpec};
use edgecloud::{
    exhaustive_search, solve, solve_cloud_only, solve_edge_only, theorem7_residual, AllocationPlan,
    Error, Stationarity,
};

#[derive(Parser)]
#[command(
    name = "edgecloud",
    version,
    about = "Plan UAV edge-cloud inference over a shared link"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the plan for one scenario.
    Plan {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Solve)]
        mode: Mode,
    },
    /// Sweep one parameter and write a CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// bandwidth, frames_per_second, se_up, se_down or model_config.
        #[arg(long)]
        axis: SweepAxis,
        /// Comma-separated axis values.
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        values: Vec<f64>,
        /// Also run the exhaustive oracle at every point.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        out: PathBuf,
        /// SVG chart of the mAP columns.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Check a config file and print the resulting scenario.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Solve,
    CloudOnly,
    EdgeOnly,
    Oracle,
}

fn print_plan(plan: &AllocationPlan) {
    println!("beta               {:.6}", plan.beta);
    println!("b_up_hz            {:.6e}", plan.b_up);
    println!("b_down_hz          {:.6e}", plan.b_down);
    println!("m_update_bps       {:.6e}", plan.m_update);
    println!("map_joint          {:.6}", plan.map_joint);
    println!("map_cloud          {:.6}", plan.map_cloud);
    println!("map_edge           {:.6}", plan.map_edge);
    println!("rate_feature_bps   {:.6e}", plan.rates.feature);
    println!("rate_data_bps      {:.6e}", plan.rates.data);
    println!("avg_bits_per_pixel {:.6}", plan.quant.avg_bits());
    if let Some(b) = plan.quant.bits_relaxed {
        println!("relaxed_bits       {b:.6}");
    }
    for level in &plan.quant.mix {
        println!(
            "  {:>8.4} bit/px x {:.4} frame/s",
            level.bits_per_pixel, level.frames
        );
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Plan { config, mode } => {
            let cfg = experiment::load_config(&config)?;
            let s = &cfg.scenario;
            let plan = match mode {
                Mode::Solve => solve(s, &cfg.solver),
                Mode::CloudOnly => solve_cloud_only(s)?,
                Mode::EdgeOnly => solve_edge_only(s),
                Mode::Oracle => {
                    eprintln!("oracle grid: {} combinations", cfg.oracle.combinations());
                    exhaustive_search(s, &cfg.oracle)?
                }
            };
            print_plan(&plan);
            match theorem7_residual(s, &plan) {
                Stationarity::Interior(r) => println!("stationarity       {:+.3e}", r.value()),
                Stationarity::NotApplicable(why) => println!("stationarity       n/a ({why})"),
            }
            Ok(true)
        }
        Command::Sweep {
            config,
            axis,
            values,
            oracle,
            out,
            plot,
        } => {
            let cfg: Config = experiment::load_config(&config)?;
            let spec = SweepSpec::new(axis, values)?;
            let records = experiment::run_sweep(&cfg, &spec, oracle)?;
            experiment::emit_csv(&records, &out)?;
            if let Some(path) = plot {
                emit_plot(&records, &spec, &path)?;
            }
            let mut ok = true;
            for r in &records {
                if let Err(msg) = &r.outcome {
                    eprintln!("error: {}={}: {msg}", r.axis, r.axis_value);
                    ok = false;
                }
            }
            Ok(ok)
        }
        Command::Validate { config } => {
            let cfg = experiment::load_config(&config)?;
            let s = &cfg.scenario;
            println!(
                "ok: N={} x={} F={} B={} S_u={} S_d={} M=[{}, {}] ladder={:?} model_configs={}",
                s.n_frames,
                s.pixels,
                s.feature_bits,
                s.bandwidth,
                s.se_up,
                s.se_down,
                s.m_min(),
                s.m_max(),
                s.ladder.levels(),
                cfg.model_configs.len()
            );
            Ok(true)
        }
    }
}

#[cfg(feature = "plot")]
fn emit_plot(
    records: &[experiment::RunRecord],
    spec: &SweepSpec,
    path: &std::path::Path,
) -> Result<(), Error> {
    experiment::emit_plot(records, &spec.outputs, path)
}

#[cfg(not(feature = "plot"))]
fn emit_plot(_: &[experiment::RunRecord], _: &SweepSpec, _: &std::path::Path) -> Result<(), Error> {
    Err(Error::Plot("built without the `plot` feature".into()))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
