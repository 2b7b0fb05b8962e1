//! Parametric surface catalog. Every builtin carries analytic first and
//! second partials plus the unit normal and its first partials, so form
//! components downstream are exact up to rounding. Generic immersions
//! fall back to five-point stencils.
//!
//! Orientation conventions (fixed here, used by every sign-sensitive
//! check): spheres and anchor rings take the outward normal, tubes take
//! `n = cos(phi) h + sin(phi) b` (pointing away from the spine), the
//! catenoid takes `(cos u, sin u, -sinh(v/c))/cosh(v/c)`. The opposite
//! orientation flips the second form's sign but leaves the third form,
//! the Gauss curvature, and all quotients like `2H/K` paired with the
//! flipped mean curvature consistent.

use super::curve::{add, cross, norm, scale, CurveError, CurveSpec};
use std::fmt;
use std::sync::Arc;

pub type ImmersionFn = Arc<dyn Fn(f64, f64) -> [f64; 3] + Send + Sync>;

#[derive(Clone)]
pub struct ImmersionSpec {
    pub map: ImmersionFn,
    pub domain_u: (f64, f64),
    pub domain_v: (f64, f64),
    pub periodic_u: bool,
    pub periodic_v: bool,
}

impl fmt::Debug for ImmersionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ImmersionSpec")
            .field("domain_u", &self.domain_u)
            .field("domain_v", &self.domain_v)
            .finish()
    }
}

#[derive(Clone, Debug)]
pub enum SurfaceSpec {
    Sphere { radius: f64, center: [f64; 3] },
    Catenoid { c: f64 },
    AnchorRing { a: f64, r: f64 },
    Tube { curve: CurveSpec, radius: f64 },
    Immersion(ImmersionSpec),
}

#[derive(Debug, thiserror::Error)]
pub enum SurfaceError {
    #[error("degenerate metric at (u, v) = ({u}, {v}): EG - F^2 = {det}")]
    DegenerateMetric { u: f64, v: f64, det: f64 },
    #[error("tube radius {r} is not inside (0, {bound}) required by the spine curvature")]
    TubeRadius { r: f64, bound: f64 },
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Position, first and second partials, unit normal, and normal partials
/// at one parameter point.
#[derive(Clone, Copy, Debug)]
pub struct SurfaceJet {
    pub x: [f64; 3],
    pub xu: [f64; 3],
    pub xv: [f64; 3],
    pub xuu: [f64; 3],
    pub xuv: [f64; 3],
    pub xvv: [f64; 3],
    pub normal: [f64; 3],
    pub nu: [f64; 3],
    pub nv: [f64; 3],
}

impl fmt::Display for SurfaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceSpec::Sphere { radius, .. } => write!(f, "sphere(R={radius})"),
            SurfaceSpec::Catenoid { c } => write!(f, "catenoid(c={c})"),
            SurfaceSpec::AnchorRing { a, r } => write!(f, "anchor ring(a={a}, r={r})"),
            SurfaceSpec::Tube { curve, radius } => write!(f, "tube({curve}, r={radius})"),
            SurfaceSpec::Immersion(_) => write!(f, "immersion"),
        }
    }
}

impl SurfaceSpec {
    /// Default parameter box: `(u range, u periodic, v range, v periodic)`.
    /// Non-periodic ranges already exclude singular parameter values
    /// (sphere poles, catenoid ends are finite).
    pub fn default_domain(&self) -> ((f64, f64), bool, (f64, f64), bool) {
        use std::f64::consts::{PI, TAU};
        match self {
            SurfaceSpec::Sphere { .. } => (((0.12 * PI), (0.88 * PI)), false, (0.0, TAU), true),
            SurfaceSpec::Catenoid { c } => ((0.0, TAU), true, (-1.2 * c, 1.2 * c), false),
            SurfaceSpec::AnchorRing { .. } => ((0.0, TAU), true, (0.0, TAU), true),
            SurfaceSpec::Tube { curve, .. } => {
                let (t0, t1) = curve.domain();
                ((t0, t1), curve.periodic(), (0.0, TAU), true)
            }
            SurfaceSpec::Immersion(im) => (im.domain_u, im.periodic_u, im.domain_v, im.periodic_v),
        }
    }

    /// The quantity whose smallness marks the parabolic exclusion zone
    /// (`K -> 0`): `|cos phi|` on tubes, `|cos t|` on the anchor ring,
    /// and `1` where the Gauss curvature never vanishes.
    pub fn exclusion_field(&self, u: f64, v: f64) -> f64 {
        match self {
            SurfaceSpec::AnchorRing { .. } => u.cos().abs(),
            SurfaceSpec::Tube { .. } => v.cos().abs(),
            _ => 1.0,
        }
    }

    /// Scale of the position coordinates, for relative tolerances.
    pub fn coordinate_scale(&self) -> f64 {
        match self {
            SurfaceSpec::Sphere { radius, center } => radius + norm(*center),
            SurfaceSpec::Catenoid { c } => 2.0 * c,
            SurfaceSpec::AnchorRing { a, r } => a + r,
            SurfaceSpec::Tube { curve, radius } => match curve {
                CurveSpec::Circle { radius: a } => a + radius,
                CurveSpec::Helix { radius: a, pitch } => a + pitch.abs() + radius,
                CurveSpec::Analytic(_) => 1.0 + radius,
            },
            SurfaceSpec::Immersion(_) => 1.0,
        }
    }

    pub fn jet(&self, u: f64, v: f64) -> Result<SurfaceJet, SurfaceError> {
        match self {
            SurfaceSpec::Sphere { radius, center } => Ok(sphere_jet(*radius, *center, u, v)),
            SurfaceSpec::Catenoid { c } => Ok(catenoid_jet(*c, u, v)),
            SurfaceSpec::AnchorRing { a, r } => Ok(anchor_jet(*a, *r, u, v)),
            SurfaceSpec::Tube { curve, radius } => tube_jet(curve, *radius, u, v),
            SurfaceSpec::Immersion(im) => Ok(immersion_jet(im, u, v)),
        }
    }

    pub fn position(&self, u: f64, v: f64) -> Result<[f64; 3], SurfaceError> {
        Ok(self.jet(u, v)?.x)
    }
}

fn sphere_jet(radius: f64, center: [f64; 3], u: f64, v: f64) -> SurfaceJet {
    let (su, cu) = u.sin_cos();
    let (sv, cv) = v.sin_cos();
    let n = [su * cv, su * sv, cu];
    let nu = [cu * cv, cu * sv, -su];
    let nv = [-su * sv, su * cv, 0.0];
    SurfaceJet {
        x: add(center, scale(n, radius)),
        xu: scale(nu, radius),
        xv: scale(nv, radius),
        xuu: scale(n, -radius),
        xuv: [-radius * cu * sv, radius * cu * cv, 0.0],
        xvv: [-radius * su * cv, -radius * su * sv, 0.0],
        normal: n,
        nu,
        nv,
    }
}

fn catenoid_jet(c: f64, u: f64, v: f64) -> SurfaceJet {
    let (su, cu) = u.sin_cos();
    let ch = (v / c).cosh();
    let sh = (v / c).sinh();
    // n = (cu, su, -sh)/ch; n_u = (-su, cu, 0)/ch;
    // n_v = ((-sh cu, -sh su, -1) * (1/c)) / ch^2  via quotient rule.
    let n = [cu / ch, su / ch, -sh / ch];
    let nu = [-su / ch, cu / ch, 0.0];
    let nv = [
        -sh * cu / (c * ch * ch),
        -sh * su / (c * ch * ch),
        -1.0 / (c * ch * ch),
    ];
    SurfaceJet {
        x: [c * ch * cu, c * ch * su, v],
        xu: [-c * ch * su, c * ch * cu, 0.0],
        xv: [sh * cu, sh * su, 1.0],
        xuu: [-c * ch * cu, -c * ch * su, 0.0],
        xuv: [-sh * su, sh * cu, 0.0],
        xvv: [ch * cu / c, ch * su / c, 0.0],
        normal: n,
        nu,
        nv,
    }
}

fn anchor_jet(a: f64, r: f64, t: f64, phi: f64) -> SurfaceJet {
    let (st, ct) = t.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let rho = a + r * ct;
    SurfaceJet {
        x: [rho * cp, rho * sp, r * st],
        xu: [-r * st * cp, -r * st * sp, r * ct],
        xv: [-rho * sp, rho * cp, 0.0],
        xuu: [-r * ct * cp, -r * ct * sp, -r * st],
        xuv: [r * st * sp, -r * st * cp, 0.0],
        xvv: [-rho * cp, -rho * sp, 0.0],
        normal: [ct * cp, ct * sp, st],
        nu: [-st * cp, -st * sp, ct],
        nv: [-ct * sp, ct * cp, 0.0],
    }
}

fn tube_jet(curve: &CurveSpec, r: f64, t: f64, phi: f64) -> Result<SurfaceJet, SurfaceError> {
    let (alpha, frame) = curve.closed_form(t)?;
    let kappa = curve.kappa(t);
    let tau = curve.tau(t);
    if !(r > 0.0 && r * kappa < 1.0) {
        return Err(SurfaceError::TubeRadius {
            r,
            bound: 1.0 / kappa,
        });
    }
    let (sp, cp) = phi.sin_cos();
    let delta = 1.0 - r * kappa * cp;
    // The frame rotates along t: t' = k h, h' = -k t + tau b, b' = -tau h.
    // Builtin spines have constant curvature and torsion, so k' = tau' = 0
    // and the products below lose those terms.
    let in_frame = |ct: f64, ch: f64, cb: f64| {
        add(
            scale(frame.t, ct),
            add(scale(frame.h, ch), scale(frame.b, cb)),
        )
    };
    Ok(SurfaceJet {
        x: add(alpha, in_frame(0.0, r * cp, r * sp)),
        xu: in_frame(delta, -r * tau * sp, r * tau * cp),
        xv: in_frame(0.0, -r * sp, r * cp),
        xuu: in_frame(
            r * kappa * tau * sp,
            delta * kappa - r * tau * tau * cp,
            -r * tau * tau * sp,
        ),
        xuv: in_frame(r * kappa * sp, -r * tau * cp, -r * tau * sp),
        xvv: in_frame(0.0, -r * cp, -r * sp),
        normal: in_frame(0.0, cp, sp),
        nu: in_frame(-kappa * cp, -tau * sp, tau * cp),
        nv: in_frame(0.0, -sp, cp),
    })
}

fn immersion_jet(im: &ImmersionSpec, u: f64, v: f64) -> SurfaceJet {
    let hu = (im.domain_u.1 - im.domain_u.0) * 1e-4;
    let hv = (im.domain_v.1 - im.domain_v.0) * 1e-4;
    let f = &im.map;
    let stencil1 = |g: &dyn Fn(f64) -> [f64; 3], h: f64| -> [f64; 3] {
        let (m2, m1, p1, p2) = (g(-2.0 * h), g(-h), g(h), g(2.0 * h));
        let mut out = [0.0; 3];
        for i in 0..3 {
            out[i] = (m2[i] - 8.0 * m1[i] + 8.0 * p1[i] - p2[i]) / (12.0 * h);
        }
        out
    };
    let stencil2 = |g: &dyn Fn(f64) -> [f64; 3], h: f64| -> [f64; 3] {
        let (m2, m1, c0, p1, p2) = (g(-2.0 * h), g(-h), g(0.0), g(h), g(2.0 * h));
        let mut out = [0.0; 3];
        for i in 0..3 {
            out[i] = (-m2[i] + 16.0 * m1[i] - 30.0 * c0[i] + 16.0 * p1[i] - p2[i]) / (12.0 * h * h);
        }
        out
    };
    let xu = stencil1(&|d| f(u + d, v), hu);
    let xv = stencil1(&|d| f(u, v + d), hv);
    let xuu = stencil2(&|d| f(u + d, v), hu);
    let xvv = stencil2(&|d| f(u, v + d), hv);
    let xuv = stencil1(&|d| stencil1(&|e| f(u + d, v + e), hv), hu);
    let unit_normal = |uu: f64, vv: f64| -> [f64; 3] {
        let du = stencil1(&|d| f(uu + d, vv), hu);
        let dv = stencil1(&|d| f(uu, vv + d), hv);
        let c = cross(du, dv);
        scale(c, 1.0 / norm(c))
    };
    let n0 = unit_normal(u, v);
    let nu = stencil1(&|d| unit_normal(u + d, v), hu);
    let nv = stencil1(&|d| unit_normal(u, v + d), hv);
    SurfaceJet {
        x: f(u, v),
        xu,
        xv,
        xuu,
        xuv,
        xvv,
        normal: n0,
        nu,
        nv,
    }
}
