//! Seeding orbits on invariant manifolds, classifying their fates, and the
//! three-sets bisections over σ and over the shooting label.

pub mod classify;
pub mod orbit;
pub mod seed;
pub mod sweep;

pub use classify::{
    classify_fate, classify_fate_with, classify_state, profile_class, ClassifyOptions, Crossing, Fate,
    FateReport, ProfileClass,
};
pub use orbit::{main_orbit, MAIN_ENTRY_NORM};
pub use seed::{seed, Origin, SeedSpec, DEFAULT_EPSILON};
pub use sweep::{bisect_transition, sweep, FateChange, Parameter, Probe, Shooting, Sweep, SweepPoint, TransitionBracket};
