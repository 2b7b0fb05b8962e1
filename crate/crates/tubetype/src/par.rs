//! Parallel/sequential dispatch for the data-parallel kernels.
//!
//! Grid evaluation and per-sample operator application are embarrassingly
//! parallel, so they funnel through [`map_indexed`]. With the `parallel`
//! feature disabled (or `EvalMode::Sequential` requested) everything runs
//! on one thread; results are identical either way since the kernels are
//! pure per-index functions.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum EvalMode {
    Sequential,
    #[default]
    Parallel,
}

impl EvalMode {
    pub fn from_flag(parallel: bool) -> Self {
        if parallel {
            EvalMode::Parallel
        } else {
            EvalMode::Sequential
        }
    }
}

pub fn map_indexed<T, F>(mode: EvalMode, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match mode {
        EvalMode::Sequential => (0..n).map(f).collect(),
        EvalMode::Parallel => {
            #[cfg(feature = "parallel")]
            {
                (0..n).into_par_iter().map(f).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                (0..n).map(f).collect()
            }
        }
    }
}
