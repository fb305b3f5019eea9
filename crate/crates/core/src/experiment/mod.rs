//! Config-driven sweeps over one scenario parameter, with CSV and optional
//! SVG output.

pub mod config;
pub mod output;
#[cfg(feature = "plot")]
pub mod plot;
pub mod sweep;

pub use config::{load_config, load_scenario, parse_config, Config, ModelConfig};
pub use output::{emit_csv, format_sig6, read_csv, write_csv, CsvRow, CSV_HEADER};
#[cfg(feature = "plot")]
pub use plot::emit_plot;
pub use sweep::{run_sweep, Output, RunOutcome, RunRecord, SweepAxis, SweepSpec};
