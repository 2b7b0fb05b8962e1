//! The Laplace-Beltrami operator of a chosen fundamental form, in flux form,
//! on masked grid fields.
//!
//! For metric g the operator is the negative divergence of the g-gradient:
//!
//! ```text
//! L f = -(1/sqrt(det)) [ d_u( (g22 f_u - g12 f_v)/sqrt(det) )
//!                      + d_v( (g11 f_v - g12 f_u)/sqrt(det) ) ]
//! ```
//!
//! The sign makes the position vector of a sphere an eigenfunction with
//! eigenvalue +2 under the third-form metric, and a constant maps to exactly
//! zero. Numeric iteration is capped; deep powers belong to the exact engine.

use super::stencil::{d_du, d_dv, Field, GridShape};
use crate::geometry::{SurfaceError, SurfaceGrid};
use crate::par::{map_indexed, EvalMode};
use thiserror::Error;

/// How many successive numeric applications are trusted. Each application
/// spends two stencil passes, so accuracy degrades as O(h^(4-2k)).
pub const MAX_NUMERIC_ITERATES: usize = 3;

#[derive(Debug, Error)]
pub enum BeltramiError {
    #[error(
        "numeric iteration is limited to {max} applications ({requested} requested); \
         use the exact engine for higher powers"
    )]
    IterateCap { requested: usize, max: usize },
    #[error("no valid samples remain after stencil trimming")]
    EmptyMask,
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// Which fundamental form supplies the metric.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricChoice {
    First,
    Second,
    Third,
}

impl MetricChoice {
    pub fn label(&self) -> &'static str {
        match self {
            MetricChoice::First => "I",
            MetricChoice::Second => "II",
            MetricChoice::Third => "III",
        }
    }
}

/// Metric components cached per sample, with a mask excluding samples where
/// the chosen form is not a usable Riemannian metric.
#[derive(Clone, Debug)]
pub struct MetricField {
    pub choice: MetricChoice,
    pub g11: Vec<f64>,
    pub g12: Vec<f64>,
    pub g22: Vec<f64>,
    pub det: Vec<f64>,
    pub sqrt_det: Vec<f64>,
    pub mask: Vec<bool>,
    /// Samples where the second form was negative definite and its sign was
    /// flipped to obtain the definite representative.
    pub negated_samples: usize,
}

impl MetricField {
    pub fn from_grid(grid: &SurfaceGrid, choice: MetricChoice) -> Self {
        let n = grid.len();
        let mut g11 = Vec::with_capacity(n);
        let mut g12 = Vec::with_capacity(n);
        let mut g22 = Vec::with_capacity(n);
        let mut det = Vec::with_capacity(n);
        let mut sqrt_det = Vec::with_capacity(n);
        let mut mask = Vec::with_capacity(n);
        let mut negated_samples = 0;
        for idx in 0..n {
            let f = &grid.forms[idx];
            let (mut a, mut b, mut c, mut ok) = match choice {
                MetricChoice::First => (f.i[0], f.i[1], f.i[2], true),
                MetricChoice::Second => {
                    // II is a metric only where it is definite, i.e. K > 0.
                    let definite = f.gauss > 0.0;
                    (f.ii[0], f.ii[1], f.ii[2], definite)
                }
                MetricChoice::Third => (f.iii[0], f.iii[1], f.iii[2], true),
            };
            if choice == MetricChoice::Second && ok && a < 0.0 {
                a = -a;
                b = -b;
                c = -c;
                negated_samples += 1;
            }
            let d = a * c - b * b;
            let scale = a.abs().max(c.abs()).max(f64::MIN_POSITIVE);
            ok = ok && grid.valid[idx] && d.is_finite() && d > 1e-14 * scale * scale;
            g11.push(a);
            g12.push(b);
            g22.push(c);
            det.push(d);
            sqrt_det.push(if ok { d.sqrt() } else { 0.0 });
            mask.push(ok);
        }
        MetricField {
            choice,
            g11,
            g12,
            g22,
            det,
            sqrt_det,
            mask,
            negated_samples,
        }
    }

    pub fn count_valid(&self) -> usize {
        self.mask.iter().filter(|m| **m).count()
    }
}

/// One application of the operator to a scalar field.
pub fn laplace_beltrami(
    shape: GridShape,
    metric: &MetricField,
    f: &Field,
    mode: EvalMode,
) -> Field {
    let fu = d_du(shape, mode, f);
    let fv = d_dv(shape, mode, f);
    let total = shape.total();
    let flux = |a: &Field, b: &Field, ga: &[f64], gb: &[f64]| {
        let mut values = Vec::with_capacity(total);
        let mut mask = Vec::with_capacity(total);
        for i in 0..total {
            let ok = a.mask[i] && b.mask[i] && metric.mask[i];
            mask.push(ok);
            values.push(if ok {
                (ga[i] * a.values[i] - gb[i] * b.values[i]) / metric.sqrt_det[i]
            } else {
                0.0
            });
        }
        Field::new(values, mask)
    };
    let p = flux(&fu, &fv, &metric.g22, &metric.g12);
    let q = flux(&fv, &fu, &metric.g11, &metric.g12);
    let pu = d_du(shape, mode, &p);
    let qv = d_dv(shape, mode, &q);
    let mut values = Vec::with_capacity(total);
    let mut mask = Vec::with_capacity(total);
    for i in 0..total {
        let ok = pu.mask[i] && qv.mask[i] && metric.mask[i];
        mask.push(ok);
        values.push(if ok {
            -(pu.values[i] + qv.values[i]) / metric.sqrt_det[i]
        } else {
            0.0
        });
    }
    Field::new(values, mask)
}

/// Componentwise application to an E3-valued field.
pub fn laplace_beltrami_vec(
    shape: GridShape,
    metric: &MetricField,
    f: &[Field; 3],
    mode: EvalMode,
) -> [Field; 3] {
    [
        laplace_beltrami(shape, metric, &f[0], mode),
        laplace_beltrami(shape, metric, &f[1], mode),
        laplace_beltrami(shape, metric, &f[2], mode),
    ]
}

/// Which immersion realizes the abstract gradient in E3: the surface itself
/// (coordinate tangents x_u, x_v) or its Gauss map (n_u, n_v).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PushForward {
    Position,
    GaussMap,
}

/// g-gradient pushed forward by the surface immersion:
/// `grad f = sum_ij g^{ij} (d_j f) x_i`.
pub fn gradient(grid: &SurfaceGrid, metric: &MetricField, f: &Field, mode: EvalMode) -> [Field; 3] {
    gradient_via(grid, metric, f, PushForward::Position, mode)
}

/// g-gradient realized through a chosen basis of the tangent plane. The
/// Gauss-map variant feeds identity checks where the third-form gradient
/// appears as a combination of n_u, n_v.
pub fn gradient_via(
    grid: &SurfaceGrid,
    metric: &MetricField,
    f: &Field,
    push: PushForward,
    mode: EvalMode,
) -> [Field; 3] {
    let shape = GridShape::of(grid);
    let fu = d_du(shape, mode, f);
    let fv = d_dv(shape, mode, f);
    let component = |k: usize| {
        let out: Vec<(f64, bool)> = map_indexed(mode, grid.len(), |i| {
            let ok = fu.mask[i] && fv.mask[i] && metric.mask[i];
            if !ok {
                return (0.0, false);
            }
            let jet = &grid.jets[i];
            let (e1, e2) = match push {
                PushForward::Position => (jet.xu, jet.xv),
                PushForward::GaussMap => (jet.nu, jet.nv),
            };
            let cu = (metric.g22[i] * fu.values[i] - metric.g12[i] * fv.values[i]) / metric.det[i];
            let cv = (metric.g11[i] * fv.values[i] - metric.g12[i] * fu.values[i]) / metric.det[i];
            (cu * e1[k] + cv * e2[k], true)
        });
        let mut values = Vec::with_capacity(out.len());
        let mut mask = Vec::with_capacity(out.len());
        for (v, m) in out {
            values.push(v);
            mask.push(m);
        }
        Field::new(values, mask)
    };
    [component(0), component(1), component(2)]
}

/// Successive applications `[L f, L^2 f, ..., L^m f]`, failing beyond the
/// numeric trust cap or when trimming exhausts the mask.
pub fn iterate_on_grid(
    shape: GridShape,
    metric: &MetricField,
    f: &Field,
    m: usize,
    mode: EvalMode,
) -> Result<Vec<Field>, BeltramiError> {
    if m > MAX_NUMERIC_ITERATES {
        return Err(BeltramiError::IterateCap {
            requested: m,
            max: MAX_NUMERIC_ITERATES,
        });
    }
    let mut out: Vec<Field> = Vec::with_capacity(m);
    for k in 0..m {
        let prev = if k == 0 { f } else { &out[k - 1] };
        let next = laplace_beltrami(shape, metric, prev, mode);
        if next.count_valid() == 0 {
            return Err(BeltramiError::EmptyMask);
        }
        out.push(next);
    }
    Ok(out)
}

/// Vector counterpart of [`iterate_on_grid`].
pub fn iterate_vector_on_grid(
    shape: GridShape,
    metric: &MetricField,
    f: &[Field; 3],
    m: usize,
    mode: EvalMode,
) -> Result<Vec<[Field; 3]>, BeltramiError> {
    if m > MAX_NUMERIC_ITERATES {
        return Err(BeltramiError::IterateCap {
            requested: m,
            max: MAX_NUMERIC_ITERATES,
        });
    }
    let mut out: Vec<[Field; 3]> = Vec::with_capacity(m);
    for k in 0..m {
        let prev = if k == 0 { f } else { &out[k - 1] };
        let next = laplace_beltrami_vec(shape, metric, prev, mode);
        if next.iter().any(|c| c.count_valid() == 0) {
            return Err(BeltramiError::EmptyMask);
        }
        out.push(next);
    }
    Ok(out)
}

/// The grid's position coordinates as three masked fields.
pub fn position_fields(grid: &SurfaceGrid) -> [Field; 3] {
    [0, 1, 2].map(|k| Field::new(grid.position_component(k), grid.valid.clone()))
}

/// The grid's Gauss-map coordinates as three masked fields.
pub fn normal_fields(grid: &SurfaceGrid) -> [Field; 3] {
    [0, 1, 2].map(|k| Field::new(grid.normal_component(k), grid.valid.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SurfaceSpec;

    fn unit_sphere_grid(n: usize) -> SurfaceGrid {
        let spec = SurfaceSpec::Sphere {
            radius: 1.0,
            center: [0.0; 3],
        };
        SurfaceGrid::build(&spec, n, n, 0.2, EvalMode::Sequential).unwrap()
    }

    #[test]
    fn sphere_height_is_an_eigenfunction_of_the_third_form() {
        let grid = unit_sphere_grid(128);
        let shape = GridShape::of(&grid);
        let metric = MetricField::from_grid(&grid, MetricChoice::Third);
        let f = Field::new(grid.position_component(2), grid.valid.clone());
        let lf = laplace_beltrami(shape, &metric, &f, EvalMode::Sequential);
        let residual = lf.zip_with(&f, |a, b| a - 2.0 * b);
        assert!(residual.count_valid() > 1000);
        assert!(residual.sup() < 1e-6, "sup {}", residual.sup());
    }

    #[test]
    fn first_form_eigenvalue_scales_with_radius() {
        for radius in [0.5, 2.0] {
            let spec = SurfaceSpec::Sphere {
                radius,
                center: [0.0; 3],
            };
            let grid = SurfaceGrid::build(&spec, 96, 96, 0.2, EvalMode::Sequential).unwrap();
            let shape = GridShape::of(&grid);
            let metric = MetricField::from_grid(&grid, MetricChoice::First);
            let f = Field::new(grid.position_component(2), grid.valid.clone());
            let lf = laplace_beltrami(shape, &metric, &f, EvalMode::Sequential);
            let lambda = 2.0 / (radius * radius);
            let residual = lf.zip_with(&f, |a, b| a - lambda * b);
            // The height field itself scales with the radius.
            assert!(
                residual.sup() < 1e-6 * lambda * radius,
                "sup {}",
                residual.sup()
            );
        }
    }

    #[test]
    fn constants_are_annihilated_exactly() {
        let grid = unit_sphere_grid(24);
        let shape = GridShape::of(&grid);
        for choice in [
            MetricChoice::First,
            MetricChoice::Second,
            MetricChoice::Third,
        ] {
            let metric = MetricField::from_grid(&grid, choice);
            let f = Field::constant(grid.len(), 3.25);
            let lf = laplace_beltrami(shape, &metric, &f, EvalMode::Sequential);
            assert!(lf.count_valid() > 0);
            assert!(lf.values.iter().all(|v| *v == 0.0));
        }
    }

    #[test]
    fn second_form_metric_on_the_sphere_is_the_negated_form() {
        // Outward normal makes II negative definite on a sphere; the metric
        // field flips it and remembers how many samples were involved.
        let grid = unit_sphere_grid(16);
        let metric = MetricField::from_grid(&grid, MetricChoice::Second);
        assert_eq!(metric.negated_samples, grid.len());
        assert!(metric.g11.iter().all(|v| *v > 0.0));
    }

    #[test]
    fn second_form_metric_rejects_negative_curvature() {
        let spec = SurfaceSpec::Catenoid { c: 1.0 };
        let grid = SurfaceGrid::build(&spec, 16, 16, 0.2, EvalMode::Sequential).unwrap();
        let metric = MetricField::from_grid(&grid, MetricChoice::Second);
        assert_eq!(metric.count_valid(), 0);
    }

    #[test]
    fn iteration_cap_points_to_the_exact_engine() {
        let grid = unit_sphere_grid(16);
        let shape = GridShape::of(&grid);
        let metric = MetricField::from_grid(&grid, MetricChoice::Third);
        let f = Field::new(grid.position_component(0), grid.valid.clone());
        let err = iterate_on_grid(shape, &metric, &f, 4, EvalMode::Sequential).unwrap_err();
        assert!(err.to_string().contains("exact engine"));
    }

    #[test]
    fn second_iterate_on_sphere_squares_the_eigenvalue() {
        let grid = unit_sphere_grid(96);
        let shape = GridShape::of(&grid);
        let metric = MetricField::from_grid(&grid, MetricChoice::Third);
        let f = Field::new(grid.position_component(2), grid.valid.clone());
        let iterates = iterate_on_grid(shape, &metric, &f, 2, EvalMode::Sequential).unwrap();
        let residual = iterates[1].zip_with(&f, |a, b| a - 4.0 * b);
        assert!(residual.sup() < 1e-5, "sup {}", residual.sup());
    }

    #[test]
    fn gradient_of_height_on_sphere_projects_e3() {
        let grid = unit_sphere_grid(64);
        let metric = MetricField::from_grid(&grid, MetricChoice::First);
        let f = Field::new(grid.position_component(2), grid.valid.clone());
        let g = gradient(&grid, &metric, &f, EvalMode::Sequential);
        let mut err: f64 = 0.0;
        for i in 0..grid.len() {
            if !(g[0].mask[i] && g[1].mask[i] && g[2].mask[i]) {
                continue;
            }
            let n = grid.jets[i].normal;
            let expected = [-n[2] * n[0], -n[2] * n[1], 1.0 - n[2] * n[2]];
            for k in 0..3 {
                err = err.max((g[k].values[i] - expected[k]).abs());
            }
        }
        assert!(err < 1e-7, "max error {err}");
    }

    #[test]
    fn parallel_apply_matches_sequential() {
        let grid = unit_sphere_grid(32);
        let shape = GridShape::of(&grid);
        let metric = MetricField::from_grid(&grid, MetricChoice::Third);
        let f = Field::new(grid.position_component(1), grid.valid.clone());
        let a = laplace_beltrami(shape, &metric, &f, EvalMode::Sequential);
        let b = laplace_beltrami(shape, &metric, &f, EvalMode::Parallel);
        assert_eq!(a.values, b.values);
        assert_eq!(a.mask, b.mask);
    }
}
