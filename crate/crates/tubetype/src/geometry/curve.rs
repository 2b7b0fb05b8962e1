//! Unit-speed spine curves for tube surfaces: closed-form circles and
//! helices, plus curves given only by curvature and torsion functions,
//! which get their frames by integrating the frame equations.

use crate::exact::JetValues;
use std::fmt;
use std::sync::Arc;

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A curve described by curvature and torsion along arc length. The frame
/// is recovered numerically, so there is no closed-form position.
#[derive(Clone)]
pub struct AnalyticCurve {
    pub kappa: ScalarFn,
    pub tau: ScalarFn,
    pub domain: (f64, f64),
    pub periodic: bool,
}

impl fmt::Debug for AnalyticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticCurve")
            .field("domain", &self.domain)
            .field("periodic", &self.periodic)
            .finish()
    }
}

#[derive(Clone, Debug)]
pub enum CurveSpec {
    /// Plane circle of the given radius, traversed at unit speed.
    Circle {
        radius: f64,
    },
    /// Helix `(R cos th, R sin th, pitch * th)` reparametrized by arc
    /// length; `th = s / sqrt(R^2 + pitch^2)`.
    Helix {
        radius: f64,
        pitch: f64,
    },
    Analytic(AnalyticCurve),
}

#[derive(Debug, thiserror::Error)]
pub enum CurveError {
    #[error("Frenet frame undefined: curvature {kappa} at t = {t} is not positive")]
    FrenetUndefined { kappa: f64, t: f64 },
    #[error("analytic spines have no closed-form frame; integrate and sample instead")]
    NoClosedForm,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrenetFrame {
    pub t: [f64; 3],
    pub h: [f64; 3],
    pub b: [f64; 3],
}

impl FrenetFrame {
    /// Worst deviation from orthonormality across the six pairings.
    pub fn orthonormality_error(&self) -> f64 {
        let vs = [self.t, self.h, self.b];
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in i..3 {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(vs[i], vs[j]) - target).abs());
            }
        }
        worst
    }

    /// Right-handedness: `t x h` should equal `b`.
    pub fn handedness_error(&self) -> f64 {
        let c = cross(self.t, self.h);
        norm(sub(c, self.b))
    }
}

pub fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn add(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn scale(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

impl fmt::Display for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveSpec::Circle { radius } => write!(f, "circle(a={radius})"),
            CurveSpec::Helix { radius, pitch } => write!(f, "helix(R={radius}, p={pitch})"),
            CurveSpec::Analytic(_) => write!(f, "analytic curve"),
        }
    }
}

impl CurveSpec {
    pub fn kappa(&self, t: f64) -> f64 {
        match self {
            CurveSpec::Circle { radius } => 1.0 / radius,
            CurveSpec::Helix { radius, pitch } => radius / (radius * radius + pitch * pitch),
            CurveSpec::Analytic(a) => (a.kappa)(t),
        }
    }

    pub fn tau(&self, t: f64) -> f64 {
        match self {
            CurveSpec::Circle { .. } => 0.0,
            CurveSpec::Helix { radius, pitch } => pitch / (radius * radius + pitch * pitch),
            CurveSpec::Analytic(a) => (a.tau)(t),
        }
    }

    pub fn domain(&self) -> (f64, f64) {
        match self {
            CurveSpec::Circle { radius } => (0.0, std::f64::consts::TAU * radius),
            CurveSpec::Helix { radius, pitch } => {
                let w = (radius * radius + pitch * pitch).sqrt();
                (0.0, 2.0 * std::f64::consts::TAU * w)
            }
            CurveSpec::Analytic(a) => a.domain,
        }
    }

    pub fn periodic(&self) -> bool {
        match self {
            CurveSpec::Circle { .. } => true,
            CurveSpec::Helix { .. } => false,
            CurveSpec::Analytic(a) => a.periodic,
        }
    }

    /// Closed-form point and frame, available for circles and helices.
    pub fn closed_form(&self, s: f64) -> Result<([f64; 3], FrenetFrame), CurveError> {
        match *self {
            CurveSpec::Circle { radius } => {
                let th = s / radius;
                let (sin, cos) = th.sin_cos();
                Ok((
                    [radius * cos, radius * sin, 0.0],
                    FrenetFrame {
                        t: [-sin, cos, 0.0],
                        h: [-cos, -sin, 0.0],
                        b: [0.0, 0.0, 1.0],
                    },
                ))
            }
            CurveSpec::Helix { radius, pitch } => {
                let w = (radius * radius + pitch * pitch).sqrt();
                let th = s / w;
                let (sin, cos) = th.sin_cos();
                Ok((
                    [radius * cos, radius * sin, pitch * th],
                    FrenetFrame {
                        t: [-radius * sin / w, radius * cos / w, pitch / w],
                        h: [-cos, -sin, 0.0],
                        b: [pitch * sin / w, -pitch * cos / w, radius / w],
                    },
                ))
            }
            CurveSpec::Analytic(_) => Err(CurveError::NoClosedForm),
        }
    }

    /// Curvature/torsion jet at a parameter, for evaluating operator
    /// coefficients numerically. Builtins have constant jets; analytic
    /// curves get fourth-order finite-difference derivatives.
    pub fn jet_values(&self, t: f64, r: f64, depth: usize) -> JetValues {
        match self {
            CurveSpec::Circle { .. } | CurveSpec::Helix { .. } => {
                JetValues::constant(self.kappa(t), self.tau(t), r, depth)
            }
            CurveSpec::Analytic(a) => {
                let kappa = fd_jet(&a.kappa, t, depth);
                let tau = fd_jet(&a.tau, t, depth);
                JetValues { kappa, tau, r }
            }
        }
    }
}

/// Value and derivatives of a scalar function by nested fourth-order
/// central differences. Adequate through the third derivative.
fn fd_jet(f: &ScalarFn, t: f64, depth: usize) -> Vec<f64> {
    let h = 1e-3 * (1.0 + t.abs());
    let mut out = Vec::with_capacity(depth);
    let eval = |order: usize, x: f64| -> f64 {
        fn d(f: &ScalarFn, order: usize, x: f64, h: f64) -> f64 {
            if order == 0 {
                return f(x);
            }
            let g = |y: f64| d(f, order - 1, y, h);
            (g(x - 2.0 * h) - 8.0 * g(x - h) + 8.0 * g(x + h) - g(x + 2.0 * h)) / (12.0 * h)
        }
        d(f, order, x, h)
    };
    for order in 0..depth {
        out.push(eval(order, t));
    }
    out
}

fn rk4_step<F: Fn(f64, &[f64; 12]) -> [f64; 12]>(
    f: &F,
    t: f64,
    y: &[f64; 12],
    h: f64,
) -> [f64; 12] {
    let k1 = f(t, y);
    let k2 = f(t + h / 2.0, &advance(y, &k1, h / 2.0));
    let k3 = f(t + h / 2.0, &advance(y, &k2, h / 2.0));
    let k4 = f(t + h, &advance(y, &k3, h));
    let mut out = *y;
    for i in 0..12 {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

fn advance(y: &[f64; 12], k: &[f64; 12], h: f64) -> [f64; 12] {
    let mut out = *y;
    for i in 0..12 {
        out[i] += h * k[i];
    }
    out
}

fn orthonormalize(frame: &mut FrenetFrame) {
    let t = scale(frame.t, 1.0 / norm(frame.t));
    let mut h = sub(frame.h, scale(t, dot(frame.h, t)));
    h = scale(h, 1.0 / norm(h));
    let mut b = sub(frame.b, scale(t, dot(frame.b, t)));
    b = sub(b, scale(h, dot(b, h)));
    b = scale(b, 1.0 / norm(b));
    *frame = FrenetFrame { t, h, b };
}

/// Integrates `alpha' = t`, `t' = k h`, `h' = -k t + tau b`, `b' = -tau h`
/// across the curve's domain with fourth-order steps, re-orthonormalizing
/// the frame after every step. Returns `steps + 1` samples including both
/// ends; starts from the closed form when one exists.
pub fn frenet_integrate(
    spec: &CurveSpec,
    steps: usize,
) -> Result<Vec<([f64; 3], FrenetFrame)>, CurveError> {
    let (t0, t1) = spec.domain();
    let h = (t1 - t0) / steps as f64;
    let (alpha0, frame0) = spec.closed_form(t0).unwrap_or((
        [0.0, 0.0, 0.0],
        FrenetFrame {
            t: [1.0, 0.0, 0.0],
            h: [0.0, 1.0, 0.0],
            b: [0.0, 0.0, 1.0],
        },
    ));
    let deriv = |s: f64, y: &[f64; 12]| -> [f64; 12] {
        let k = spec.kappa(s);
        let ta = spec.tau(s);
        let (t, hn, b) = ([y[3], y[4], y[5]], [y[6], y[7], y[8]], [y[9], y[10], y[11]]);
        let dt = scale(hn, k);
        let dh = add(scale(t, -k), scale(b, ta));
        let db = scale(hn, -ta);
        [
            y[3], y[4], y[5], dt[0], dt[1], dt[2], dh[0], dh[1], dh[2], db[0], db[1], db[2],
        ]
    };
    let mut y = [
        alpha0[0],
        alpha0[1],
        alpha0[2],
        frame0.t[0],
        frame0.t[1],
        frame0.t[2],
        frame0.h[0],
        frame0.h[1],
        frame0.h[2],
        frame0.b[0],
        frame0.b[1],
        frame0.b[2],
    ];
    let mut out = Vec::with_capacity(steps + 1);
    out.push((alpha0, frame0));
    for i in 0..steps {
        let s = t0 + i as f64 * h;
        let kappa_here = spec.kappa(s);
        if kappa_here <= 0.0 {
            return Err(CurveError::FrenetUndefined {
                kappa: kappa_here,
                t: s,
            });
        }
        y = rk4_step(&deriv, s, &y, h);
        let mut frame = FrenetFrame {
            t: [y[3], y[4], y[5]],
            h: [y[6], y[7], y[8]],
            b: [y[9], y[10], y[11]],
        };
        orthonormalize(&mut frame);
        y[3] = frame.t[0];
        y[4] = frame.t[1];
        y[5] = frame.t[2];
        y[6] = frame.h[0];
        y[7] = frame.h[1];
        y[8] = frame.h[2];
        y[9] = frame.b[0];
        y[10] = frame.b[1];
        y[11] = frame.b[2];
        out.push(([y[0], y[1], y[2]], frame));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_returns_to_start() {
        let spec = CurveSpec::Circle { radius: 2.0 };
        let samples = frenet_integrate(&spec, 4000).unwrap();
        let first = samples.first().unwrap().0;
        let last = samples.last().unwrap().0;
        assert!(norm(sub(first, last)) < 1e-8);
    }

    #[test]
    fn helix_integration_matches_closed_form() {
        let spec = CurveSpec::Helix {
            radius: 1.0,
            pitch: 1.0,
        };
        assert!((spec.kappa(0.0) - 0.5).abs() < 1e-15);
        assert!((spec.tau(0.0) - 0.5).abs() < 1e-15);
        let samples = frenet_integrate(&spec, 10_000).unwrap();
        let (t0, t1) = spec.domain();
        let step = (t1 - t0) / 10_000.0;
        let mut worst: f64 = 0.0;
        for (i, (point, frame)) in samples.iter().enumerate() {
            let s = t0 + i as f64 * step;
            let (cp, cf) = spec.closed_form(s).unwrap();
            worst = worst.max(norm(sub(*point, cp)));
            worst = worst.max(norm(sub(frame.t, cf.t)));
            worst = worst.max(norm(sub(frame.h, cf.h)));
            worst = worst.max(norm(sub(frame.b, cf.b)));
        }
        assert!(worst < 1e-8, "max drift {worst}");
    }

    #[test]
    fn varying_curvature_keeps_frames_orthonormal() {
        let spec = CurveSpec::Analytic(AnalyticCurve {
            kappa: Arc::new(|t: f64| 1.0 + 0.3 * t.sin()),
            tau: Arc::new(|_| 0.2),
            domain: (0.0, 12.0),
            periodic: false,
        });
        let samples = frenet_integrate(&spec, 6000).unwrap();
        for (_, frame) in &samples {
            assert!(frame.orthonormality_error() < 1e-10);
            assert!(frame.handedness_error() < 1e-9);
        }
    }

    #[test]
    fn nonpositive_curvature_is_rejected() {
        let spec = CurveSpec::Analytic(AnalyticCurve {
            kappa: Arc::new(|t: f64| 1.0 - t),
            tau: Arc::new(|_| 0.0),
            domain: (0.0, 3.0),
            periodic: false,
        });
        let err = frenet_integrate(&spec, 300).unwrap_err();
        assert!(err.to_string().contains("Frenet frame undefined"));
    }

    #[test]
    fn helix_frames_are_right_handed() {
        let spec = CurveSpec::Helix {
            radius: 1.3,
            pitch: 0.4,
        };
        for i in 0..10 {
            let (_, frame) = spec.closed_form(i as f64 * 0.7).unwrap();
            assert!(frame.orthonormality_error() < 1e-12);
            assert!(frame.handedness_error() < 1e-12);
        }
    }

    #[test]
    fn analytic_jets_match_derivatives() {
        let spec = CurveSpec::Analytic(AnalyticCurve {
            kappa: Arc::new(|t: f64| 1.0 + 0.3 * t.sin()),
            tau: Arc::new(|t: f64| 0.2 * t.cos()),
            domain: (0.0, 6.0),
            periodic: false,
        });
        let jets = spec.jet_values(1.1, 0.25, 4);
        assert!((jets.kappa[0] - (1.0 + 0.3 * 1.1_f64.sin())).abs() < 1e-12);
        assert!((jets.kappa[1] - 0.3 * 1.1_f64.cos()).abs() < 1e-9);
        assert!((jets.kappa[2] + 0.3 * 1.1_f64.sin()).abs() < 1e-6);
        assert!((jets.tau[1] + 0.2 * 1.1_f64.sin()).abs() < 1e-9);
        assert_eq!(jets.r, 0.25);
    }
}
