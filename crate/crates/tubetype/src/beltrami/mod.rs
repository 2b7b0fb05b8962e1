//! Grid Laplace-Beltrami operators for the three fundamental forms, with
//! masked stencils and residual checks against closed-form identities.

pub mod checks;
pub mod operator;
pub mod stencil;

pub use checks::{
    anchor_exact_crosscheck, gauss_map_eigen_check, mean_normal_check, mean_to_gauss_field,
    position_harmonic_check, position_identity_check, tube_coordinate_crosscheck,
};
pub use operator::{
    gradient, gradient_via, iterate_on_grid, iterate_vector_on_grid, laplace_beltrami,
    laplace_beltrami_vec, normal_fields, position_fields, BeltramiError, MetricChoice, MetricField,
    PushForward, MAX_NUMERIC_ITERATES,
};
pub use stencil::{d2_du, d2_dv, d_du, d_dudv, d_dv, Field, GridShape};
