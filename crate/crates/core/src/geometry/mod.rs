//! Separatrix surface, flux sign, periodic orbits of `{X = 0}`, and the sign
//! certificates of the classification argument.

pub mod certificates;
pub mod cycles;
pub mod surface;

pub use certificates::{proof_certificates, CertificateReport, Claim, ExpectedSign, Verdict};
pub use cycles::{cycle_eval, cycle_z_range, first_integral, k_max};
pub use surface::{
    flux_by_dot_product, flux_coefficients, is_elliptic, rescaled_flux, rescaled_flux_by_dot_product,
    surface_eval, surface_eval_paraboloid, surface_eval_shifted, surface_flux, surface_gap_rate, surface_normal,
    SeparatrixSurface,
};
