//! Jet variables: the spine curvature and torsion together with their
//! arc-length derivatives, plus the tube radius symbol `r`.
//!
//! Derivatives of different orders are independent symbols. Nothing here
//! assumes a relation between, say, `k` and `k'`; substituting a concrete
//! curve happens only at numeric evaluation time.

use super::poly::{rational_to_f64, Mono, Poly, PolyVar};
use num_rational::BigRational;

/// `Kappa(n)` is the n-th arc-length derivative of the curvature,
/// `Tau(n)` of the torsion. `R` is the tube radius (constant along the
/// surface, so both partial derivatives send it to zero).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum JetVar {
    Kappa(u32),
    Tau(u32),
    R,
}

impl JetVar {
    /// Arc-length derivative of the symbol itself.
    fn derivative(self) -> Option<JetVar> {
        match self {
            JetVar::Kappa(n) => Some(JetVar::Kappa(n + 1)),
            JetVar::Tau(n) => Some(JetVar::Tau(n + 1)),
            JetVar::R => None,
        }
    }
}

impl PolyVar for JetVar {
    fn symbol(&self) -> String {
        fn primes(base: &str, n: u32) -> String {
            match n {
                0 => base.to_string(),
                1..=3 => format!("{}{}", base, "'".repeat(n as usize)),
                _ => format!("{}({})", base, n),
            }
        }
        match self {
            JetVar::Kappa(n) => primes("k", *n),
            JetVar::Tau(n) => primes("tau", *n),
            JetVar::R => "r".to_string(),
        }
    }
}

pub type JetPoly = Poly<JetVar>;
pub type JetMono = Mono<JetVar>;

pub fn kappa(order: u32) -> JetPoly {
    JetPoly::var(JetVar::Kappa(order))
}

pub fn tau(order: u32) -> JetPoly {
    JetPoly::var(JetVar::Tau(order))
}

pub fn radius() -> JetPoly {
    JetPoly::var(JetVar::R)
}

/// Arc-length derivative of a jet polynomial, by the Leibniz rule on each
/// monomial. This is the only place the jet chain `k -> k' -> k'' -> ...`
/// is wired in.
pub fn jet_derivative(p: &JetPoly) -> JetPoly {
    let mut out = JetPoly::zero();
    for (mono, coeff) in p.terms() {
        for &(v, e) in mono.factors() {
            let Some(dv) = v.derivative() else { continue };
            let reduced = mono
                .div_var_pow(v, 1)
                .expect("factor present by construction");
            out.add_term(
                reduced.mul(&Mono::var(dv)),
                coeff * BigRational::from_integer(e.into()),
            );
        }
    }
    out
}

/// Numeric values for a jet assignment. Orders past the stored depth are an
/// error: silently returning zero would mask missing data in oracles.
#[derive(Clone, Debug)]
pub struct JetValues {
    pub kappa: Vec<f64>,
    pub tau: Vec<f64>,
    pub r: f64,
}

impl JetValues {
    /// Constant-curvature assignment (all higher jets vanish).
    pub fn constant(kappa0: f64, tau0: f64, r: f64, depth: usize) -> Self {
        let mut kappa = vec![0.0; depth];
        let mut tau = vec![0.0; depth];
        kappa[0] = kappa0;
        tau[0] = tau0;
        JetValues { kappa, tau, r }
    }

    pub fn lookup(&self, v: JetVar) -> f64 {
        match v {
            JetVar::Kappa(n) => *self
                .kappa
                .get(n as usize)
                .unwrap_or_else(|| panic!("curvature jet of order {n} not provided")),
            JetVar::Tau(n) => *self
                .tau
                .get(n as usize)
                .unwrap_or_else(|| panic!("torsion jet of order {n} not provided")),
            JetVar::R => self.r,
        }
    }
}

pub fn eval_jet_poly(p: &JetPoly, values: &JetValues) -> f64 {
    p.eval(&|v| values.lookup(v))
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn rat_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn rat_to_f64(c: &BigRational) -> f64 {
    rational_to_f64(c)
}
