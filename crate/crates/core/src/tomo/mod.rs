//! Parallel-beam CT test problems and the reconstruction model built on them.

mod model;
mod noise;
mod phantom;
mod projector;

pub use crate::metrics::{relative_error, snr_db, snr_log10};
pub use model::{build_ct_problem, Constraint, CtModelSpec, Method, TvKind, WEIGHT_SUM_TOL};
pub use noise::{add_noise, NoiseModel, DEFAULT_GAUSSIAN_RELATIVE, DEFAULT_IMPULSE_FRACTION};
pub use phantom::{render_ellipses, shepp_logan, Ellipse, MODIFIED_SHEPP_LOGAN};
pub use projector::{
    default_rays, paralleltomo, parse_angles, sincos_deg, system_matrix, trace_ray, Geometry,
    TomoProblem,
};
