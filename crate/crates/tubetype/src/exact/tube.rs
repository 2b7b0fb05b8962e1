//! The working ring for tube computations: trig-polynomial numerators over
//! denominators of the form `(k*c)^n * delta^m * r^p`, where `delta =
//! 1 - r*k*cos(phi)` and `c = cos(phi)`.
//!
//! Every constructor and operation canonicalizes, but cancellation is
//! monomial-content only: common powers of `k*c` (jointly), of `r`, and
//! exact polynomial factors of `delta`. Equality is therefore decided by
//! cross-multiplication rather than by comparing stored forms.

use super::jet::{kappa, radius, tau, JetPoly, JetValues, JetVar};
use super::trig::TrigPoly;
use super::ExactError;
use num_rational::BigRational;
use std::fmt;

#[derive(Clone, Debug)]
pub struct TubeExpr {
    num: TrigPoly,
    den_kc: u32,
    den_delta: u32,
    den_r: u32,
}

impl TubeExpr {
    pub fn new(num: TrigPoly, den_kc: u32, den_delta: u32, den_r: u32) -> Self {
        let mut e = TubeExpr {
            num,
            den_kc,
            den_delta,
            den_r,
        };
        e.canonicalize();
        e
    }

    pub fn zero() -> Self {
        TubeExpr {
            num: TrigPoly::zero(),
            den_kc: 0,
            den_delta: 0,
            den_r: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_jet(JetPoly::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_jet(JetPoly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_jet(JetPoly::from_int(n))
    }

    pub fn from_jet(p: JetPoly) -> Self {
        TubeExpr {
            num: TrigPoly::constant(p),
            den_kc: 0,
            den_delta: 0,
            den_r: 0,
        }
    }

    pub fn from_trig(t: TrigPoly) -> Self {
        TubeExpr {
            num: t,
            den_kc: 0,
            den_delta: 0,
            den_r: 0,
        }
    }

    pub fn cos_phi() -> Self {
        Self::from_trig(TrigPoly::cos_phi())
    }

    pub fn sin_phi() -> Self {
        Self::from_trig(TrigPoly::sin_phi())
    }

    pub fn kappa(order: u32) -> Self {
        Self::from_jet(kappa(order))
    }

    pub fn tau(order: u32) -> Self {
        Self::from_jet(tau(order))
    }

    pub fn radius() -> Self {
        Self::from_jet(radius())
    }

    /// `delta = 1 - r k cos(phi)`, the Jacobian factor of the tube map.
    pub fn delta() -> Self {
        Self::from_trig(delta_numerator())
    }

    /// `beta = k' cos(phi) + k tau sin(phi)`.
    pub fn beta() -> Self {
        Self::from_trig(beta_numerator())
    }

    /// `1 / (k cos(phi))^n`.
    pub fn inv_kc(n: u32) -> Self {
        TubeExpr {
            num: TrigPoly::constant(JetPoly::one()),
            den_kc: n,
            den_delta: 0,
            den_r: 0,
        }
    }

    pub fn num(&self) -> &TrigPoly {
        &self.num
    }

    pub fn den_kc(&self) -> u32 {
        self.den_kc
    }

    pub fn den_delta(&self) -> u32 {
        self.den_delta
    }

    pub fn den_r(&self) -> u32 {
        self.den_r
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.den_kc = 0;
            self.den_delta = 0;
            self.den_r = 0;
            return;
        }
        loop {
            let mut changed = false;
            if self.den_kc > 0 {
                let cv = self.num.c_valuation().unwrap_or(0) as u32;
                let kv = self.num.jet_valuation(JetVar::Kappa(0)).unwrap_or(0);
                let cancel = self.den_kc.min(cv).min(kv);
                if cancel > 0 {
                    self.num = self
                        .num
                        .div_c_pow(cancel as usize)
                        .and_then(|n| n.div_jet_pow(JetVar::Kappa(0), cancel))
                        .expect("valuation guarantees divisibility");
                    self.den_kc -= cancel;
                    changed = true;
                }
            }
            if self.den_r > 0 {
                let rv = self.num.jet_valuation(JetVar::R).unwrap_or(0);
                let cancel = self.den_r.min(rv);
                if cancel > 0 {
                    self.num = self
                        .num
                        .div_jet_pow(JetVar::R, cancel)
                        .expect("valuation guarantees divisibility");
                    self.den_r -= cancel;
                    changed = true;
                }
            }
            while self.den_delta > 0 {
                match self.num.div_one_minus_rkc() {
                    Some(q) => {
                        self.num = q;
                        self.den_delta -= 1;
                        changed = true;
                    }
                    None => break,
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// Numerator of the denominator product, fully expanded.
    fn den_as_trig(&self) -> TrigPoly {
        let mut t = TrigPoly::constant(JetPoly::one()).mul_kc_pow(self.den_kc);
        let delta = delta_numerator();
        for _ in 0..self.den_delta {
            t = t.mul(&delta);
        }
        if self.den_r > 0 {
            t = t.mul_jet(&radius().pow(self.den_r));
        }
        t
    }

    pub fn add(&self, other: &Self) -> Self {
        let kc = self.den_kc.max(other.den_kc);
        let dd = self.den_delta.max(other.den_delta);
        let dr = self.den_r.max(other.den_r);
        let lift = |e: &Self| -> TrigPoly {
            let mut t = e.num.mul_kc_pow(kc - e.den_kc);
            let delta = delta_numerator();
            for _ in 0..(dd - e.den_delta) {
                t = t.mul(&delta);
            }
            if dr > e.den_r {
                t = t.mul_jet(&radius().pow(dr - e.den_r));
            }
            t
        };
        TubeExpr::new(lift(self).add(&lift(other)), kc, dd, dr)
    }

    pub fn neg(&self) -> Self {
        TubeExpr {
            num: self.num.neg(),
            den_kc: self.den_kc,
            den_delta: self.den_delta,
            den_r: self.den_r,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        TubeExpr::new(
            self.num.mul(&other.num),
            self.den_kc + other.den_kc,
            self.den_delta + other.den_delta,
            self.den_r + other.den_r,
        )
    }

    pub fn mul_rat(&self, c: &BigRational) -> Self {
        TubeExpr::new(self.num.mul_rat(c), self.den_kc, self.den_delta, self.den_r)
    }

    pub fn mul_int(&self, n: i64) -> Self {
        self.mul_rat(&BigRational::from_integer(n.into()))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = TubeExpr::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Divide by `(k c)^n`.
    pub fn div_kc(&self, n: u32) -> Self {
        TubeExpr::new(
            self.num.clone(),
            self.den_kc + n,
            self.den_delta,
            self.den_r,
        )
    }

    /// Arc-length derivative, with the quotient rule applied to the
    /// denominator factors (`d/dt (k c) = k' c`, `d/dt delta = -r k' c`,
    /// `d/dt r = 0`).
    pub fn dt(&self) -> Self {
        if self.den_kc == 0 && self.den_delta == 0 {
            return TubeExpr::new(self.num.dt(), 0, 0, self.den_r);
        }
        let n = self.den_kc;
        let m = self.den_delta;
        let kc = TrigPoly::cos_phi().mul_jet(&kappa(0));
        let kc_t = TrigPoly::cos_phi().mul_jet(&kappa(1));
        let delta = delta_numerator();
        let delta_t = TrigPoly::cos_phi().mul_jet(&radius().mul(&kappa(1))).neg();
        let mut num = self.num.dt().mul(&kc).mul(&delta);
        if n > 0 {
            num = num.sub(
                &self
                    .num
                    .mul(&kc_t)
                    .mul(&delta)
                    .mul_rat(&BigRational::from_integer((n as i64).into())),
            );
        }
        if m > 0 {
            num = num.sub(
                &self
                    .num
                    .mul(&delta_t)
                    .mul(&kc)
                    .mul_rat(&BigRational::from_integer((m as i64).into())),
            );
        }
        TubeExpr::new(num, n + 1, m + 1, self.den_r)
    }

    /// Meridian-angle derivative (`d/dphi (k c) = -k s`, `d/dphi delta = r k s`).
    pub fn dphi(&self) -> Self {
        if self.den_kc == 0 && self.den_delta == 0 {
            return TubeExpr::new(self.num.dphi(), 0, 0, self.den_r);
        }
        let n = self.den_kc;
        let m = self.den_delta;
        let kc = TrigPoly::cos_phi().mul_jet(&kappa(0));
        let kc_phi = TrigPoly::sin_phi().mul_jet(&kappa(0)).neg();
        let delta = delta_numerator();
        let delta_phi = TrigPoly::sin_phi().mul_jet(&radius().mul(&kappa(0)));
        let mut num = self.num.dphi().mul(&kc).mul(&delta);
        if n > 0 {
            num = num.sub(
                &self
                    .num
                    .mul(&kc_phi)
                    .mul(&delta)
                    .mul_rat(&BigRational::from_integer((n as i64).into())),
            );
        }
        if m > 0 {
            num = num.sub(
                &self
                    .num
                    .mul(&delta_phi)
                    .mul(&kc)
                    .mul_rat(&BigRational::from_integer((m as i64).into())),
            );
        }
        TubeExpr::new(num, n + 1, m + 1, self.den_r)
    }

    /// Top residue under the pole grading in `k*c`: the part of the
    /// numerator not divisible by `k*c`, together with the pole order.
    /// The residue of a nonzero canonical expression is never zero when
    /// the pole order is positive, and equals the numerator when it is 0.
    pub fn leading_term(&self) -> Result<LeadingTerm, ExactError> {
        if self.num.is_zero() {
            return Err(ExactError::NoLeadingTerm);
        }
        let residue = if self.den_kc == 0 {
            self.num.clone()
        } else {
            self.num.residue_mod_kc()
        };
        Ok(LeadingTerm {
            pole_order: self.den_kc,
            residue,
        })
    }

    pub fn eval(&self, values: &JetValues, phi: f64) -> f64 {
        let num = self.num.eval(values, phi);
        let kc = values.lookup(JetVar::Kappa(0)) * phi.cos();
        let delta = 1.0 - values.r * values.lookup(JetVar::Kappa(0)) * phi.cos();
        num / (kc.powi(self.den_kc as i32)
            * delta.powi(self.den_delta as i32)
            * values.r.powi(self.den_r as i32))
    }
}

/// Leading data of a tube expression: pole order in `k*c` and the residue
/// class of the numerator modulo `(k*c)`. The residue is in general a
/// mixed trig polynomial (for instance a power of `beta`), so it is
/// returned whole rather than as a single monomial.
#[derive(Clone, Debug, PartialEq)]
pub struct LeadingTerm {
    pub pole_order: u32,
    pub residue: TrigPoly,
}

impl LeadingTerm {
    /// The residue as a pure jet polynomial when it has no trig factor.
    pub fn as_jet_poly(&self) -> Option<JetPoly> {
        if !self.residue.parts[1].is_zero() {
            return None;
        }
        if self.residue.parts[0].degree() == Some(0) {
            Some(self.residue.parts[0].coeff(0))
        } else {
            None
        }
    }

    /// Sine degree when the residue is homogeneous in `sin(phi)`.
    pub fn sin_degree(&self) -> Option<u8> {
        match (
            self.residue.parts[0].is_zero(),
            self.residue.parts[1].is_zero(),
        ) {
            (false, true) => Some(0),
            (true, false) => Some(1),
            _ => None,
        }
    }
}

pub fn delta_numerator() -> TrigPoly {
    TrigPoly::constant(JetPoly::one()).sub(&TrigPoly::cos_phi().mul_jet(&radius().mul(&kappa(0))))
}

pub fn beta_numerator() -> TrigPoly {
    TrigPoly::cos_phi()
        .mul_jet(&kappa(1))
        .add(&TrigPoly::sin_phi().mul_jet(&kappa(0).mul(&tau(0))))
}

impl PartialEq for TubeExpr {
    fn eq(&self, other: &Self) -> bool {
        // Cross-multiplied comparison; canonical forms may differ when a
        // non-monomial common factor survives cancellation.
        self.num.mul(&other.den_as_trig()) == other.num.mul(&self.den_as_trig())
    }
}

impl Eq for TubeExpr {}

impl fmt::Display for TubeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den_kc == 0 && self.den_delta == 0 && self.den_r == 0 {
            return write!(f, "{}", self.num);
        }
        let mut den = String::new();
        if self.den_kc > 0 {
            den.push_str(&if self.den_kc == 1 {
                "(k*c)".to_string()
            } else {
                format!("(k*c)^{}", self.den_kc)
            });
        }
        if self.den_delta > 0 {
            if !den.is_empty() {
                den.push('*');
            }
            den.push_str(&if self.den_delta == 1 {
                "delta".to_string()
            } else {
                format!("delta^{}", self.den_delta)
            });
        }
        if self.den_r > 0 {
            if !den.is_empty() {
                den.push('*');
            }
            den.push_str(&if self.den_r == 1 {
                "r".to_string()
            } else {
                format!("r^{}", self.den_r)
            });
        }
        write!(f, "({}) / ({})", self.num, den)
    }
}
