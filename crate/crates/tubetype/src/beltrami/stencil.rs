//! Fourth-order central differences on masked grid fields.
//!
//! Every derivative consumes the five-point footprint `i-2 .. i+2` along one
//! axis. Periodic axes wrap; non-periodic axes lose two boundary layers per
//! pass, and interior invalid samples erode their neighborhood the same way.
//! The kernels are written in difference-from-center form so a constant field
//! differentiates to exactly zero, not to rounding dust.

use crate::geometry::SurfaceGrid;
use crate::par::{map_indexed, EvalMode};

/// Scalar samples over a grid together with a validity mask. Values at
/// invalid samples are zero and must not be read.
#[derive(Clone, Debug)]
pub struct Field {
    pub values: Vec<f64>,
    pub mask: Vec<bool>,
}

impl Field {
    pub fn new(values: Vec<f64>, mask: Vec<bool>) -> Self {
        assert_eq!(values.len(), mask.len());
        Field { values, mask }
    }

    pub fn from_values(values: Vec<f64>) -> Self {
        let mask = vec![true; values.len()];
        Field { values, mask }
    }

    pub fn constant(n: usize, value: f64) -> Self {
        Field {
            values: vec![value; n],
            mask: vec![true; n],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn count_valid(&self) -> usize {
        self.mask.iter().filter(|m| **m).count()
    }

    /// Largest magnitude over the valid samples.
    pub fn sup(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.mask)
            .filter(|(_, m)| **m)
            .map(|(v, _)| v.abs())
            .fold(0.0, f64::max)
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Field {
        let values = self
            .values
            .iter()
            .zip(&self.mask)
            .map(|(v, m)| if *m { f(*v) } else { 0.0 })
            .collect();
        Field {
            values,
            mask: self.mask.clone(),
        }
    }

    /// Pointwise combination; the result is valid where both inputs are.
    pub fn zip_with<F: Fn(f64, f64) -> f64>(&self, other: &Field, f: F) -> Field {
        assert_eq!(self.len(), other.len());
        let mut values = Vec::with_capacity(self.len());
        let mut mask = Vec::with_capacity(self.len());
        for i in 0..self.len() {
            let ok = self.mask[i] && other.mask[i];
            mask.push(ok);
            values.push(if ok {
                f(self.values[i], other.values[i])
            } else {
                0.0
            });
        }
        Field { values, mask }
    }
}

/// Axis layout shared by all stencil passes: sizes, steps, periodicity.
#[derive(Clone, Copy, Debug)]
pub struct GridShape {
    pub nu: usize,
    pub nv: usize,
    pub hu: f64,
    pub hv: f64,
    pub periodic_u: bool,
    pub periodic_v: bool,
}

impl GridShape {
    pub fn of(grid: &SurfaceGrid) -> Self {
        GridShape {
            nu: grid.axis_u.n,
            nv: grid.axis_v.n,
            hu: grid.axis_u.step(),
            hv: grid.axis_v.step(),
            periodic_u: grid.axis_u.periodic,
            periodic_v: grid.axis_v.periodic,
        }
    }

    pub fn total(&self) -> usize {
        self.nu * self.nv
    }
}

fn offset(i: usize, d: i64, n: usize, periodic: bool) -> Option<usize> {
    let j = i as i64 + d;
    if periodic {
        Some(j.rem_euclid(n as i64) as usize)
    } else if (0..n as i64).contains(&j) {
        Some(j as usize)
    } else {
        None
    }
}

#[derive(Clone, Copy)]
enum Axis {
    U,
    V,
}

/// Gathers the five samples along one axis and combines them; any missing or
/// invalid sample invalidates the output point.
fn axis_pass<C>(shape: GridShape, mode: EvalMode, f: &Field, axis: Axis, combine: C) -> Field
where
    C: Fn([f64; 5]) -> f64 + Sync + Send,
{
    assert_eq!(f.len(), shape.total());
    let nv = shape.nv;
    let out: Vec<(f64, bool)> = map_indexed(mode, shape.total(), |idx| {
        if !f.mask[idx] {
            return (0.0, false);
        }
        let iu = idx / nv;
        let iv = idx % nv;
        let mut window = [0.0; 5];
        for (k, slot) in window.iter_mut().enumerate() {
            let d = k as i64 - 2;
            let j = match axis {
                Axis::U => match offset(iu, d, shape.nu, shape.periodic_u) {
                    Some(ju) => ju * nv + iv,
                    None => return (0.0, false),
                },
                Axis::V => match offset(iv, d, shape.nv, shape.periodic_v) {
                    Some(jv) => iu * nv + jv,
                    None => return (0.0, false),
                },
            };
            if !f.mask[j] {
                return (0.0, false);
            }
            *slot = f.values[j];
        }
        (combine(window), true)
    });
    let mut values = Vec::with_capacity(out.len());
    let mut mask = Vec::with_capacity(out.len());
    for (v, m) in out {
        values.push(v);
        mask.push(m);
    }
    Field { values, mask }
}

fn first_derivative(window: [f64; 5], h: f64) -> f64 {
    let [m2, m1, _, p1, p2] = window;
    (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * h)
}

fn second_derivative(window: [f64; 5], h: f64) -> f64 {
    let [m2, m1, c, p1, p2] = window;
    (16.0 * ((p1 - c) + (m1 - c)) - ((p2 - c) + (m2 - c))) / (12.0 * h * h)
}

pub fn d_du(shape: GridShape, mode: EvalMode, f: &Field) -> Field {
    axis_pass(shape, mode, f, Axis::U, move |w| {
        first_derivative(w, shape.hu)
    })
}

pub fn d_dv(shape: GridShape, mode: EvalMode, f: &Field) -> Field {
    axis_pass(shape, mode, f, Axis::V, move |w| {
        first_derivative(w, shape.hv)
    })
}

pub fn d2_du(shape: GridShape, mode: EvalMode, f: &Field) -> Field {
    axis_pass(shape, mode, f, Axis::U, move |w| {
        second_derivative(w, shape.hu)
    })
}

pub fn d2_dv(shape: GridShape, mode: EvalMode, f: &Field) -> Field {
    axis_pass(shape, mode, f, Axis::V, move |w| {
        second_derivative(w, shape.hv)
    })
}

pub fn d_dudv(shape: GridShape, mode: EvalMode, f: &Field) -> Field {
    let fu = d_du(shape, mode, f);
    d_dv(shape, mode, &fu)
}
