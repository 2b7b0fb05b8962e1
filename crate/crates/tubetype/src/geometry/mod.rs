//! Concrete surface geometry: Frenet curves, parametrized surfaces,
//! fundamental forms, and sampled grids.

pub mod curve;
pub mod forms;
pub mod grid;
pub mod surface;

pub use curve::{AnalyticCurve, CurveError, CurveSpec, FrenetFrame};
pub use forms::{
    anchor_form_regression, fundamental_forms, tube_closed_forms, tube_form_regression,
    FormComponents,
};
pub use grid::{GridAxis, SurfaceGrid};
pub use surface::{ImmersionSpec, SurfaceError, SurfaceJet, SurfaceSpec};
