//! Numerical checks of the model's quantitative statements: scaling of the
//! `L^β` norm and of solutions, the interpolation inequality, the `L^β`
//! a priori bound on the balance line, and consistency residuals.

mod bounds;
mod interpolation;
mod record;
mod scaling;

pub use bounds::{lbeta_bound, lbeta_bound_check, lbeta_bound_constant, pde_residual, LbetaBound, PdeResidual, LBETA_SLACK};
pub use interpolation::{
    calibrate_constant, interpolation_check, interpolation_exponents, probe_family, required_constant,
    valid_index_set, Calibration, InterpolationCheck, InterpolationExponents, InterpolationNorms,
    CALIBRATION_HEADROOM, PROBE_C0, PROBE_WIDTHS,
};
pub use record::CheckRecord;
pub use scaling::{scaling_rescale, scaling_solution_test, ScalingReport, ScalingSpec, MIN_CELLS_PER_WIDTH};
