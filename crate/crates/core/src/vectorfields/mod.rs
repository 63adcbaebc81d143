//! Vector fields of every chart, spectra and critical points, the P3 normal
//! form, and Taylor approximations of the P0/P1 invariant manifolds.

pub mod charts;
pub mod critical;
pub mod manifold;
pub mod normal_form;
pub mod spectrum;

pub use charts::{
    eval_field, from_main, jacobian, main_field, time_rescale, to_main, Branch, ChartId, Mat3,
    Vec3, ALL_CHARTS,
};
pub use critical::{
    all_critical_points, finite_critical_points, infinity_critical_points, CriticalPoint,
    P3Role, PointId, Tag,
};
pub use manifold::{manifold_approx, ManifoldApprox, ManifoldBase};
pub use normal_form::{normal_form_p3, GhTables, NormalFormP3};
pub use spectrum::Dims;
