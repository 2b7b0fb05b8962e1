//! Vectors expressed in the moving frame of a unit-speed spine curve:
//! the curve point `alpha` plus the Frenet triple `(t, h, b)`.
//!
//! Arc-length differentiation folds in the frame equations
//! `alpha' = t`, `t' = k h`, `h' = -k t + tau b`, `b' = -tau h`,
//! so derivatives of frame vectors stay frame vectors.

use super::jet::JetValues;
use super::tube::TubeExpr;
use std::fmt;

#[derive(Clone, PartialEq, Debug)]
pub struct FrameVec {
    pub alpha: TubeExpr,
    pub t: TubeExpr,
    pub h: TubeExpr,
    pub b: TubeExpr,
}

impl FrameVec {
    pub fn zero() -> Self {
        FrameVec {
            alpha: TubeExpr::zero(),
            t: TubeExpr::zero(),
            h: TubeExpr::zero(),
            b: TubeExpr::zero(),
        }
    }

    pub fn new(alpha: TubeExpr, t: TubeExpr, h: TubeExpr, b: TubeExpr) -> Self {
        FrameVec { alpha, t, h, b }
    }

    /// The tube immersion `x = alpha + r cos(phi) h + r sin(phi) b`.
    pub fn tube_position() -> Self {
        FrameVec {
            alpha: TubeExpr::one(),
            t: TubeExpr::zero(),
            h: TubeExpr::radius().mul(&TubeExpr::cos_phi()),
            b: TubeExpr::radius().mul(&TubeExpr::sin_phi()),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        FrameVec {
            alpha: self.alpha.add(&other.alpha),
            t: self.t.add(&other.t),
            h: self.h.add(&other.h),
            b: self.b.add(&other.b),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        FrameVec {
            alpha: self.alpha.sub(&other.alpha),
            t: self.t.sub(&other.t),
            h: self.h.sub(&other.h),
            b: self.b.sub(&other.b),
        }
    }

    pub fn neg(&self) -> Self {
        FrameVec {
            alpha: self.alpha.neg(),
            t: self.t.neg(),
            h: self.h.neg(),
            b: self.b.neg(),
        }
    }

    pub fn scale(&self, s: &TubeExpr) -> Self {
        FrameVec {
            alpha: self.alpha.mul(s),
            t: self.t.mul(s),
            h: self.h.mul(s),
            b: self.b.mul(s),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero() && self.t.is_zero() && self.h.is_zero() && self.b.is_zero()
    }

    /// Arc-length derivative with the frame rotation folded in.
    pub fn dt(&self) -> Self {
        let k = TubeExpr::kappa(0);
        let ta = TubeExpr::tau(0);
        FrameVec {
            alpha: self.alpha.dt(),
            t: self.alpha.add(&self.t.dt()).sub(&k.mul(&self.h)),
            h: self.t.mul(&k).add(&self.h.dt()).sub(&ta.mul(&self.b)),
            b: self.h.mul(&ta).add(&self.b.dt()),
        }
    }

    /// Meridian-angle derivative; the frame does not depend on `phi`.
    pub fn dphi(&self) -> Self {
        FrameVec {
            alpha: self.alpha.dphi(),
            t: self.t.dphi(),
            h: self.h.dphi(),
            b: self.b.dphi(),
        }
    }

    /// Numeric value in ambient coordinates, given the spine point, the
    /// frame vectors, and jet values at the same parameter.
    pub fn eval(
        &self,
        values: &JetValues,
        phi: f64,
        alpha: [f64; 3],
        t: [f64; 3],
        h: [f64; 3],
        b: [f64; 3],
    ) -> [f64; 3] {
        let ca = self.alpha.eval(values, phi);
        let ct = self.t.eval(values, phi);
        let ch = self.h.eval(values, phi);
        let cb = self.b.eval(values, phi);
        [
            ca * alpha[0] + ct * t[0] + ch * h[0] + cb * b[0],
            ca * alpha[1] + ct * t[1] + ch * h[1] + cb * b[1],
            ca * alpha[2] + ct * t[2] + ch * h[2] + cb * b[2],
        ]
    }
}

impl fmt::Display for FrameVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (coeff, name) in [
            (&self.alpha, "alpha"),
            (&self.t, "t"),
            (&self.h, "h"),
            (&self.b, "b"),
        ] {
            if coeff.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[{}] {}", coeff, name)?;
        }
        Ok(())
    }
}
