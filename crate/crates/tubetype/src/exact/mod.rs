//! Exact symbolic layer: rational coefficients, curvature/torsion jets,
//! trig-polynomial numerators and the localized tube ring, plus moving-frame
//! vectors. Everything in here is arbitrary-precision; floats only appear
//! at the evaluation boundary.

pub mod frame;
pub mod jet;
pub mod poly;
pub mod trig;
pub mod tube;

pub use frame::FrameVec;
pub use jet::{
    eval_jet_poly, jet_derivative, kappa, radius, rat, rat_frac, rat_to_f64, tau, JetMono, JetPoly,
    JetValues, JetVar,
};
pub use poly::{Mono, Poly, PolyVar};
pub use trig::{CosPoly, TrigPoly};
pub use tube::{beta_numerator, delta_numerator, LeadingTerm, TubeExpr};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("no leading term")]
    NoLeadingTerm,
}
