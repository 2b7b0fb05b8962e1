//! Residual checks tying the grid operator to closed-form identities and to
//! the exact engine.
//!
//! Residuals are normalized pointwise by the magnitude of the reference
//! field, floored at the surface's coordinate scale so that identities whose
//! both sides vanish (a minimal surface under the third form, say) are judged
//! in absolute units of the surface size.

use super::operator::{
    gradient_via, iterate_on_grid, laplace_beltrami, laplace_beltrami_vec, normal_fields,
    position_fields, BeltramiError, MetricChoice, MetricField, PushForward,
};
use super::stencil::{d2_du, d2_dv, d_du, d_dudv, d_dv, Field, GridShape};
use crate::geometry::{CurveSpec, SurfaceGrid, SurfaceSpec};
use crate::par::EvalMode;
use crate::report::ResidualReport;
use crate::tubecalc::anchor_iterate_x1;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

struct Stats {
    max_rel: f64,
    mean_rel: f64,
    samples: usize,
}

fn collect<I: Iterator<Item = f64>>(rels: I) -> Result<Stats, BeltramiError> {
    let mut max_rel: f64 = 0.0;
    let mut sum = 0.0;
    let mut samples = 0;
    for r in rels {
        max_rel = max_rel.max(r);
        sum += r;
        samples += 1;
    }
    if samples == 0 {
        return Err(BeltramiError::EmptyMask);
    }
    Ok(Stats {
        max_rel,
        mean_rel: sum / samples as f64,
        samples,
    })
}

/// The function 2H/K as a masked field; defined wherever the third-form
/// metric is.
pub fn mean_to_gauss_field(grid: &SurfaceGrid, metric: &MetricField) -> Field {
    let mut values = Vec::with_capacity(grid.len());
    let mut mask = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let ok = metric.mask[i] && grid.forms[i].gauss != 0.0;
        mask.push(ok);
        values.push(if ok {
            2.0 * grid.forms[i].mean / grid.forms[i].gauss
        } else {
            0.0
        });
    }
    Field::new(values, mask)
}

/// Checks that the Gauss map satisfies `L_III n = 2 n` sample by sample.
pub fn gauss_map_eigen_check(
    grid: &SurfaceGrid,
    tolerance: f64,
    mode: EvalMode,
) -> Result<ResidualReport, BeltramiError> {
    let shape = GridShape::of(grid);
    let metric = MetricField::from_grid(grid, MetricChoice::Third);
    let n = normal_fields(grid);
    let ln = laplace_beltrami_vec(shape, &metric, &n, mode);
    let stats = collect((0..grid.len()).filter_map(|i| {
        if !(ln[0].mask[i] && ln[1].mask[i] && ln[2].mask[i]) {
            return None;
        }
        let r = [0, 1, 2].map(|k| ln[k].values[i] - 2.0 * n[k].values[i]);
        Some(norm3(r) / 2.0)
    }))?;
    Ok(ResidualReport::new(
        "gauss_map_eigenvalue_two",
        grid.spec.to_string(),
        stats.samples,
        stats.max_rel,
        stats.mean_rel,
        tolerance,
    ))
}

/// Checks the third-form position identity
/// `L_III x = grad_III(2H/K) - (2H/K) n`, with the gradient realized through
/// the Gauss map.
pub fn position_identity_check(
    grid: &SurfaceGrid,
    tolerance: f64,
    mode: EvalMode,
) -> Result<ResidualReport, BeltramiError> {
    let shape = GridShape::of(grid);
    let metric = MetricField::from_grid(grid, MetricChoice::Third);
    let x = position_fields(grid);
    let lhs = laplace_beltrami_vec(shape, &metric, &x, mode);
    let f = mean_to_gauss_field(grid, &metric);
    let grad = gradient_via(grid, &metric, &f, PushForward::GaussMap, mode);
    let scale = grid.spec.coordinate_scale();
    let stats = collect((0..grid.len()).filter_map(|i| {
        let ok = (0..3).all(|k| lhs[k].mask[i] && grad[k].mask[i]) && f.mask[i];
        if !ok {
            return None;
        }
        let l = [0, 1, 2].map(|k| lhs[k].values[i]);
        let r = [0, 1, 2].map(|k| grad[k].values[i] - f.values[i] * grid.jets[i].normal[k]);
        let diff = [l[0] - r[0], l[1] - r[1], l[2] - r[2]];
        Some(norm3(diff) / norm3(l).max(scale))
    }))?;
    Ok(ResidualReport::new(
        "third_form_position_identity",
        grid.spec.to_string(),
        stats.samples,
        stats.max_rel,
        stats.mean_rel,
        tolerance,
    ))
}

/// Checks `L_I x = -2 H n` (the mean-curvature normal identity).
pub fn mean_normal_check(
    grid: &SurfaceGrid,
    tolerance: f64,
    mode: EvalMode,
) -> Result<ResidualReport, BeltramiError> {
    let shape = GridShape::of(grid);
    let metric = MetricField::from_grid(grid, MetricChoice::First);
    let x = position_fields(grid);
    let lhs = laplace_beltrami_vec(shape, &metric, &x, mode);
    let scale = grid.spec.coordinate_scale();
    let stats = collect((0..grid.len()).filter_map(|i| {
        if !(0..3).all(|k| lhs[k].mask[i]) {
            return None;
        }
        let target = [0, 1, 2].map(|k| -2.0 * grid.forms[i].mean * grid.jets[i].normal[k]);
        let diff = [0, 1, 2].map(|k| lhs[k].values[i] - target[k]);
        Some(norm3(diff) / norm3(target).max(scale))
    }))?;
    Ok(ResidualReport::new(
        "mean_curvature_normal",
        grid.spec.to_string(),
        stats.samples,
        stats.max_rel,
        stats.mean_rel,
        tolerance,
    ))
}

/// Measures `|L_III x|` against the surface scale; a surface is third-form
/// harmonic when this residual vanishes.
pub fn position_harmonic_check(
    grid: &SurfaceGrid,
    tolerance: f64,
    mode: EvalMode,
) -> Result<ResidualReport, BeltramiError> {
    let shape = GridShape::of(grid);
    let metric = MetricField::from_grid(grid, MetricChoice::Third);
    let x = position_fields(grid);
    let lx = laplace_beltrami_vec(shape, &metric, &x, mode);
    let scale = grid.spec.coordinate_scale();
    let stats = collect((0..grid.len()).filter_map(|i| {
        if !(0..3).all(|k| lx[k].mask[i]) {
            return None;
        }
        Some(norm3([0, 1, 2].map(|k| lx[k].values[i])) / scale)
    }))?;
    Ok(ResidualReport::new(
        "third_form_position_harmonic",
        grid.spec.to_string(),
        stats.samples,
        stats.max_rel,
        stats.mean_rel,
        tolerance,
    ))
}

fn sample_indices(
    common: Vec<usize>,
    samples: usize,
    seed: u64,
) -> Result<Vec<usize>, BeltramiError> {
    if common.is_empty() {
        return Err(BeltramiError::EmptyMask);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(common
        .choose_multiple(&mut rng, samples.min(common.len()))
        .copied()
        .collect())
}

/// Applies the tube coordinate operator
/// `(1/(kc)^2) [ -f_tt + 2 tau f_tphi - (tau^2 + k^2 c^2) f_phiphi + (beta/(kc)) f_t + (tau' + k^2 c s - tau beta/(kc)) f_phi ]`
/// (with `c = cos phi`, `s = sin phi`, `beta = k' c + k tau s`) via stencils
/// and compares it with the intrinsic flux-form operator at randomly chosen
/// admissible samples.
#[allow(clippy::too_many_arguments)]
pub fn tube_coordinate_crosscheck<F>(
    curve: &CurveSpec,
    radius: f64,
    nu: usize,
    nv: usize,
    exclusion: f64,
    label: &str,
    f: F,
    samples: usize,
    seed: u64,
    tolerance: f64,
    mode: EvalMode,
) -> Result<ResidualReport, BeltramiError>
where
    F: Fn(f64, f64, &crate::geometry::SurfaceJet) -> f64 + Sync + Send,
{
    let spec = SurfaceSpec::Tube {
        curve: curve.clone(),
        radius,
    };
    let grid = SurfaceGrid::build(&spec, nu, nv, exclusion, mode)?;
    let shape = GridShape::of(&grid);
    let metric = MetricField::from_grid(&grid, MetricChoice::Third);
    let field = Field::new(grid.scalar_field(mode, &f), grid.valid.clone());

    let intrinsic = laplace_beltrami(shape, &metric, &field, mode);

    let ft = d_du(shape, mode, &field);
    let fphi = d_dv(shape, mode, &field);
    let ftt = d2_du(shape, mode, &field);
    let fphiphi = d2_dv(shape, mode, &field);
    let ftphi = d_dudv(shape, mode, &field);

    let mut coordinate = vec![0.0; grid.len()];
    let mut coord_mask = vec![false; grid.len()];
    for i in 0..grid.len() {
        let ok = ft.mask[i]
            && fphi.mask[i]
            && ftt.mask[i]
            && fphiphi.mask[i]
            && ftphi.mask[i]
            && grid.valid[i];
        if !ok {
            continue;
        }
        let (t, phi) = grid.uv(i);
        let jets = curve.jet_values(t, radius, 2);
        let (k, kp) = (jets.kappa[0], jets.kappa[1]);
        let (tau, taup) = (jets.tau[0], jets.tau[1]);
        let (c, s) = (phi.cos(), phi.sin());
        let kc = k * c;
        let beta = kp * c + k * tau * s;
        let value = (-ftt.values[i] + 2.0 * tau * ftphi.values[i]
            - (tau * tau + kc * kc) * fphiphi.values[i]
            + (beta / kc) * ft.values[i]
            + (taup + k * k * c * s - tau * beta / kc) * fphi.values[i])
            / (kc * kc);
        coordinate[i] = value;
        coord_mask[i] = true;
    }

    let common: Vec<usize> = (0..grid.len())
        .filter(|&i| intrinsic.mask[i] && coord_mask[i])
        .collect();
    let chosen = sample_indices(common, samples, seed)?;
    let scale = chosen
        .iter()
        .map(|&i| intrinsic.values[i].abs().max(field.values[i].abs()))
        .fold(f64::MIN_POSITIVE, f64::max);
    let stats = collect(
        chosen
            .iter()
            .map(|&i| (intrinsic.values[i] - coordinate[i]).abs() / scale),
    )?;
    Ok(ResidualReport::new(
        "tube_coordinate_vs_intrinsic",
        format!("{spec}, f = {label}"),
        stats.samples,
        stats.max_rel,
        stats.mean_rel,
        tolerance,
    ))
}

/// Compares `m` grid applications on the anchor ring's first coordinate
/// against the exact iterate, at randomly chosen valid samples.
#[allow(clippy::too_many_arguments)]
pub fn anchor_exact_crosscheck(
    a: f64,
    r: f64,
    nu: usize,
    nv: usize,
    exclusion: f64,
    m: u32,
    samples: usize,
    seed: u64,
    tolerance: f64,
    mode: EvalMode,
) -> Result<ResidualReport, BeltramiError> {
    let spec = SurfaceSpec::AnchorRing { a, r };
    let grid = SurfaceGrid::build(&spec, nu, nv, exclusion, mode)?;
    let shape = GridShape::of(&grid);
    let metric = MetricField::from_grid(&grid, MetricChoice::Third);
    let x1 = Field::new(grid.position_component(0), grid.valid.clone());
    let iterates = iterate_on_grid(shape, &metric, &x1, m as usize, mode)?;
    let numeric = iterates.last().expect("m >= 1");
    let (exact, _) = anchor_iterate_x1(m, m).expect("within bound");

    let common: Vec<usize> = (0..grid.len()).filter(|&i| numeric.mask[i]).collect();
    let chosen = sample_indices(common, samples, seed)?;
    let exact_at: Vec<f64> = chosen
        .iter()
        .map(|&i| {
            let (t, phi) = grid.uv(i);
            exact.eval(a, r, t, phi)
        })
        .collect();
    let scale = exact_at
        .iter()
        .map(|v| v.abs())
        .fold(f64::MIN_POSITIVE, f64::max);
    let stats = collect(
        chosen
            .iter()
            .zip(&exact_at)
            .map(|(&i, e)| (numeric.values[i] - e).abs() / scale),
    )?;
    Ok(ResidualReport::new(
        format!("anchor_exact_vs_numeric_m{m}"),
        spec.to_string(),
        stats.samples,
        stats.max_rel,
        stats.mean_rel,
        tolerance,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_satisfies_the_position_identity_tightly() {
        let spec = SurfaceSpec::Sphere {
            radius: 1.0,
            center: [0.3, -0.2, 1.0],
        };
        let grid = SurfaceGrid::build(&spec, 128, 128, 0.2, EvalMode::Sequential).unwrap();
        let report = position_identity_check(&grid, 2e-6, EvalMode::Sequential).unwrap();
        assert!(report.pass, "max_rel {}", report.max_rel);
    }

    #[test]
    fn catenoid_position_is_third_form_harmonic() {
        let spec = SurfaceSpec::Catenoid { c: 1.0 };
        let grid = SurfaceGrid::build(&spec, 128, 128, 0.2, EvalMode::Sequential).unwrap();
        let report = position_harmonic_check(&grid, 5e-6, EvalMode::Sequential).unwrap();
        assert!(report.pass, "max_rel {}", report.max_rel);
        let identity = position_identity_check(&grid, 5e-6, EvalMode::Sequential).unwrap();
        assert!(identity.pass, "max_rel {}", identity.max_rel);
    }

    #[test]
    fn sphere_mean_normal_identity_holds() {
        let spec = SurfaceSpec::Sphere {
            radius: 2.0,
            center: [0.0; 3],
        };
        let grid = SurfaceGrid::build(&spec, 96, 96, 0.2, EvalMode::Sequential).unwrap();
        let report = mean_normal_check(&grid, 1e-6, EvalMode::Sequential).unwrap();
        assert!(report.pass, "max_rel {}", report.max_rel);
    }

    #[test]
    fn anchor_gauss_map_has_eigenvalue_two() {
        let spec = SurfaceSpec::AnchorRing { a: 2.0, r: 1.0 };
        let grid = SurfaceGrid::build(&spec, 256, 64, 0.2, EvalMode::Sequential).unwrap();
        let report = gauss_map_eigen_check(&grid, 1e-5, EvalMode::Sequential).unwrap();
        assert!(report.pass, "max_rel {}", report.max_rel);
    }

    #[test]
    fn anchor_first_iterate_matches_the_exact_engine() {
        let report = anchor_exact_crosscheck(
            2.0,
            1.0,
            256,
            64,
            0.2,
            1,
            100,
            7,
            1e-5,
            EvalMode::Sequential,
        )
        .unwrap();
        assert!(report.pass, "max_rel {}", report.max_rel);
        assert_eq!(report.samples, 100);
    }

    #[test]
    fn circle_tube_routes_agree_on_cos_phi() {
        let report = tube_coordinate_crosscheck(
            &CurveSpec::Circle { radius: 2.0 },
            0.5,
            64,
            512,
            0.2,
            "cos(phi)",
            |_, phi, _| phi.cos(),
            100,
            11,
            1e-6,
            EvalMode::Sequential,
        )
        .unwrap();
        assert!(report.pass, "max_rel {}", report.max_rel);
    }

    #[test]
    fn constant_field_crosscheck_is_exactly_zero() {
        let report = tube_coordinate_crosscheck(
            &CurveSpec::Circle { radius: 2.0 },
            0.5,
            32,
            64,
            0.2,
            "constant",
            |_, _, _| 4.5,
            50,
            3,
            1e-12,
            EvalMode::Sequential,
        )
        .unwrap();
        assert_eq!(report.max_rel, 0.0);
    }
}
