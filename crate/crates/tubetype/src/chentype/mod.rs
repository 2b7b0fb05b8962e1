//! Finite-type analysis over sampled operator iterates: eigen and minimal
//! relation fits, rank-growth profiling, and classification verdicts backed
//! by exact certificates where the surface family admits one.

pub mod classify;
pub mod fit;
pub mod rank;

pub use classify::{classify, classify_grid, ClassifyConfig, TypeVerdict, Verdict};
pub use fit::{
    eigen_fit, matrix_fit, minimal_relation, ChenTypeError, EigenFit, IterateMatrix, MatrixFit,
    RelationFit,
};
pub use rank::{rank_profile, RankProfile};
