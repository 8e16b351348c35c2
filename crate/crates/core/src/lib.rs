//! The secant root-finding method viewed as a planar map
//! `S(x, y) = (y, y - p(y)(x - y) / (p(x) - p(y)))` for real polynomials
//! with multiple roots.
//!
//! * [`poly`]: polynomials, validated roots and the divided-difference forms.
//! * [`secmap`]: the secant step, orbits and their classification.
//! * [`focal`]: focal points, probe curves and landing maps through them.
//! * [`basin`]: parallel basin rendering, images and the parity experiment.
//! * [`cli`]: the `secant-dyn` command line front end.

pub mod basin;
pub mod cli;
pub mod extrapolate;
pub mod focal;
pub mod poly;
mod roots;
pub mod secmap;

pub use basin::{parity_experiment, render_basin, BasinGrid, ParityReport, Window};
pub use focal::{
    curvature_to_landing, focal_points, g_d, landing_to_curvature, mixed_focal_landing, numeric_curve_limit,
    CurveSpec, FocalKind, FocalPoint, LandingMap,
};
pub use poly::{Factor, PolyError, Polynomial, RootSpec};
pub use secmap::{
    fixed_points, iterate_orbit, secant_step, Classification, OrbitLimits, OrbitResult, PlanePoint,
};
