//! Time integration: integrating-factor IMEX steppers, a Picard stepper on
//! the mild form, and the adaptive driver.

mod config;
mod duhamel;
mod imex;
mod rhs;
mod run;
mod step;

pub use config::{Scheme, SolverConfig, TermMask};
pub use duhamel::{picard_step, step_duhamel, PicardOutcome, PicardStatus};
pub use imex::step_imex;
pub use rhs::{rhs, rhs_with, transport_speed};
pub use run::{run, stable_dt, step, RunResult, RunVerdict, TraceRow, TRACE_HEADER};
pub use step::{RunState, NEGATIVITY_BUDGET};
