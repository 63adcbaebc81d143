//! Phase-space toolkit for separate-variable blow-up profiles of
//! `u_t = Δu^m + |x|^σ u^m`, `u = (T − t)^{−1/(m−1)} f(|x|)`.
//!
//! Layers, bottom-up:
//! - [`model`]: parameters and closed-form constants;
//! - [`vectorfields`]: the quadratic systems in every chart, critical points,
//!   normal form at P3, invariant-manifold Taylor approximations;
//! - [`integrate`]: adaptive RK5(4) with dense output and events;
//! - [`geometry`]: separatrix surface, flux sign, cycles and sign certificates;
//! - [`shooting`]: seeds, fate classification, bisection and sweeps;
//! - [`profiles`]: reconstruction of `f(ξ)`, local expansions, the direct
//!   ξ-ODE oracle and the oscillation test.

pub mod error;
pub mod fmt;
pub mod geometry;
pub mod integrate;
pub mod model;
pub mod par;
pub mod profiles;
pub mod shooting;
pub mod vectorfields;

pub use error::{Error, Result};
pub use model::{validate_params, ModelParams};
