//! Laplace-Beltrami calculus on tubes and classical surfaces, in two lanes:
//! an exact symbolic engine for iterated operators with respect to the third
//! fundamental form, and a numeric grid engine for identity checks and
//! finite-type classification.
//!
//! Layout:
//! - [`exact`]: rational jet polynomials, the tube expression ring, frame vectors
//! - [`tubecalc`]: the third-form operator on tubes and anchor rings, iterate
//!   tables and infinite-type certificates
//! - [`geometry`]: spine curves, surface grids, fundamental forms
//! - [`beltrami`]: grid Laplace-Beltrami operators and identity checks
//! - [`chentype`]: least-squares finite-type fits and classification verdicts
//! - [`report`]: serializable check results shared by the library and the CLI

pub mod beltrami;
pub mod chentype;
pub mod exact;
pub mod geometry;
pub mod par;
pub mod report;
pub mod tubecalc;

pub use par::EvalMode;
