//! Configuration documents, sweeps and the check suite that back the
//! command-line tool. Everything that touches the file system lives here.

mod check;
mod config;
mod simulate;
mod sweep;

pub use check::{cmd_check, cmd_scaling_test, run_checks, CheckReport, Fault};
pub use config::{parse_config, parse_config_str, ExperimentConfig, GridSpec, OutputSpec};
pub use simulate::{cmd_simulate, initial_state, simulate, RunSummary, Simulation, SimulationReport};
pub use sweep::{
    cmd_sweep, parse_sweep, parse_sweep_str, run_sweep, write_sweep_csv, CellOutcome, Exponent, SweepAxis,
    SweepMode, SweepSpec, CLASSIFY_COLUMNS, DEFAULT_MAX_CELLS, SIMULATE_COLUMNS,
};
