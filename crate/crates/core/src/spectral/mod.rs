//! Periodic grid fields, spectral transforms, the Newtonian potential and
//! quadrature norms on `[−L/2, L/2)³`.

mod field;
mod grid;
pub mod io;
mod potential;
mod profile;

pub use field::{clamped_pow, Field, Spectrum};
pub use grid::Grid;
pub use potential::{
    derivative_spectrum, dirichlet_energy, divergence, divergence_spectrum, gaussian_free_potential,
    gaussian_free_potential_slope, gradient, gradient_from_spectrum, laplacian, newtonian_potential,
    potential_spectrum, KernelConstants,
};
pub use profile::{
    perturb, potential_discrepancy, sample_profile, GaussianBump, Perturbation, ProfileSpec,
};

/// `(∫ |u|^k)^{1/k}`; see [`Field::lk_norm`].
pub fn lk_norm(u: &Field, k: f64) -> crate::Result<f64> {
    u.lk_norm(k)
}

pub fn linf_norm(u: &Field) -> f64 {
    u.linf_norm()
}

/// `∫ max(u, 0)^β`.
pub fn nonlocal_mass(u: &Field, beta: f64) -> f64 {
    u.nonlocal_mass(beta)
}
