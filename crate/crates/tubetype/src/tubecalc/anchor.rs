//! Exact calculus on the anchor ring in its own angle coordinates: `t` runs
//! around the meridian circle, `phi` around the spine circle.
//!
//! Expressions are finite sums of `p(a, r) * cos^A(t) * sin^B(t) *
//! cos^C(phi) * sin^D(phi)` with integer `A` (poles in `cos t` are the whole
//! point), `B, D` in `{0, 1}` after `sin^2 -> 1 - cos^2` reduction, and
//! polynomial coefficients in the two radii. The third-form operator
//!
//!   `-d^2/dt^2 + (sin t / cos t) d/dt - (1/cos^2 t) d^2/dphi^2`
//!
//! maps the ring to itself, so iterates stay exact.

use super::certificate::{CertificateMode, CertificateStep, InfiniteTypeCertificate};
use crate::exact::poly::{Poly, PolyVar};
use crate::exact::rat;
use crate::report::RatJson;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ArVar {
    A,
    R,
}

impl PolyVar for ArVar {
    fn symbol(&self) -> String {
        match self {
            ArVar::A => "a".into(),
            ArVar::R => "r".into(),
        }
    }
}

pub type ArPoly = Poly<ArVar>;

pub fn spine_radius() -> ArPoly {
    ArPoly::var(ArVar::A)
}

pub fn tube_radius() -> ArPoly {
    ArPoly::var(ArVar::R)
}

/// Exponents of one trigonometric monomial.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct AnchorKey {
    pub cos_t: i32,
    pub sin_t: bool,
    pub cos_phi: u32,
    pub sin_phi: bool,
}

impl AnchorKey {
    pub const ONE: AnchorKey = AnchorKey {
        cos_t: 0,
        sin_t: false,
        cos_phi: 0,
        sin_phi: false,
    };
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct AnchorExpr {
    terms: BTreeMap<AnchorKey, ArPoly>,
}

impl AnchorExpr {
    pub fn zero() -> Self {
        AnchorExpr {
            terms: BTreeMap::new(),
        }
    }

    pub fn term(key: AnchorKey, coeff: ArPoly) -> Self {
        let mut e = AnchorExpr::zero();
        e.add_term(key, coeff);
        e
    }

    /// The first coordinate of the standard embedding,
    /// `x1 = (a + r cos t) cos phi`.
    pub fn x1() -> Self {
        let mut e = AnchorExpr::zero();
        e.add_term(
            AnchorKey {
                cos_t: 0,
                sin_t: false,
                cos_phi: 1,
                sin_phi: false,
            },
            spine_radius(),
        );
        e.add_term(
            AnchorKey {
                cos_t: 1,
                sin_t: false,
                cos_phi: 1,
                sin_phi: false,
            },
            tube_radius(),
        );
        e
    }

    /// `cos(phi) / cos^k(t)`, the recurring basis element.
    pub fn cos_phi_over_cos_t(k: i32) -> Self {
        AnchorExpr::term(
            AnchorKey {
                cos_t: -k,
                sin_t: false,
                cos_phi: 1,
                sin_phi: false,
            },
            ArPoly::one(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&AnchorKey, &ArPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &AnchorKey) -> ArPoly {
        self.terms.get(key).cloned().unwrap_or_else(ArPoly::zero)
    }

    pub fn add_term(&mut self, key: AnchorKey, coeff: ArPoly) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().add(&coeff);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        AnchorExpr {
            terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul_poly(&self, p: &ArPoly) -> Self {
        if p.is_zero() {
            return Self::zero();
        }
        AnchorExpr {
            terms: self.terms.iter().map(|(k, c)| (*k, c.mul(p))).collect(),
        }
    }

    pub fn mul_rat(&self, q: &BigRational) -> Self {
        self.mul_poly(&ArPoly::constant(q.clone()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let c = c1.mul(c2);
                for (key, sign) in mul_keys(*k1, *k2) {
                    let signed = if sign >= 0 { c.clone() } else { c.neg() };
                    out.add_term(key, signed);
                }
            }
        }
        out
    }

    /// Meridian-angle derivative.
    pub fn dt(&self) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            // cos^A factor: -A cos^{A-1} sin (then reduce sin^2 if present).
            if k.cos_t != 0 {
                let factor = rat(-(k.cos_t as i64));
                let base = AnchorKey {
                    cos_t: k.cos_t - 1,
                    ..*k
                };
                if k.sin_t {
                    // sin^2 = 1 - cos^2
                    out.add_term(
                        AnchorKey {
                            sin_t: false,
                            ..base
                        },
                        c.mul_rat(&factor),
                    );
                    out.add_term(
                        AnchorKey {
                            cos_t: base.cos_t + 2,
                            sin_t: false,
                            ..base
                        },
                        c.mul_rat(&-factor),
                    );
                } else {
                    out.add_term(
                        AnchorKey {
                            sin_t: true,
                            ..base
                        },
                        c.mul_rat(&factor),
                    );
                }
            }
            // sin factor: cos
            if k.sin_t {
                out.add_term(
                    AnchorKey {
                        cos_t: k.cos_t + 1,
                        sin_t: false,
                        ..*k
                    },
                    c.clone(),
                );
            }
        }
        out
    }

    /// Spine-angle derivative.
    pub fn dphi(&self) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            if k.cos_phi != 0 {
                let factor = rat(-(k.cos_phi as i64));
                let base = AnchorKey {
                    cos_phi: k.cos_phi - 1,
                    ..*k
                };
                if k.sin_phi {
                    out.add_term(
                        AnchorKey {
                            sin_phi: false,
                            ..base
                        },
                        c.mul_rat(&factor),
                    );
                    out.add_term(
                        AnchorKey {
                            cos_phi: base.cos_phi + 2,
                            sin_phi: false,
                            ..base
                        },
                        c.mul_rat(&-factor),
                    );
                } else {
                    out.add_term(
                        AnchorKey {
                            sin_phi: true,
                            ..base
                        },
                        c.mul_rat(&factor),
                    );
                }
            }
            if k.sin_phi {
                out.add_term(
                    AnchorKey {
                        cos_phi: k.cos_phi + 1,
                        sin_phi: false,
                        ..*k
                    },
                    c.clone(),
                );
            }
        }
        out
    }

    /// Multiply by `sin t / cos t`.
    fn mul_tan_t(&self) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            if k.sin_t {
                // sin^2/cos = (1 - cos^2)/cos
                out.add_term(
                    AnchorKey {
                        cos_t: k.cos_t - 1,
                        sin_t: false,
                        ..*k
                    },
                    c.clone(),
                );
                out.add_term(
                    AnchorKey {
                        cos_t: k.cos_t + 1,
                        sin_t: false,
                        ..*k
                    },
                    c.neg(),
                );
            } else {
                out.add_term(
                    AnchorKey {
                        cos_t: k.cos_t - 1,
                        sin_t: true,
                        ..*k
                    },
                    c.clone(),
                );
            }
        }
        out
    }

    /// Multiply by `cos^k t` (negative `k` divides).
    pub fn shift_cos_t(&self, k: i32) -> Self {
        AnchorExpr {
            terms: self
                .terms
                .iter()
                .map(|(key, c)| {
                    (
                        AnchorKey {
                            cos_t: key.cos_t + k,
                            ..*key
                        },
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    pub fn eval(&self, a: f64, r: f64, t: f64, phi: f64) -> f64 {
        let (ct, st) = (t.cos(), t.sin());
        let (cp, sp) = (phi.cos(), phi.sin());
        let mut acc = 0.0;
        for (k, c) in &self.terms {
            let mut v = c.eval(&|var| match var {
                ArVar::A => a,
                ArVar::R => r,
            });
            v *= ct.powi(k.cos_t);
            if k.sin_t {
                v *= st;
            }
            v *= cp.powi(k.cos_phi as i32);
            if k.sin_phi {
                v *= sp;
            }
            acc += v;
        }
        acc
    }

    /// Largest pole order in `cos t` (0 when no negative powers occur).
    pub fn cos_t_pole(&self) -> i32 {
        self.terms
            .keys()
            .map(|k| (-k.cos_t).max(0))
            .max()
            .unwrap_or(0)
    }
}

fn mul_keys(k1: AnchorKey, k2: AnchorKey) -> Vec<(AnchorKey, i8)> {
    // Expand sin^2 in t and phi independently; at most four result keys.
    let t_parts: Vec<(i32, bool, i8)> = if k1.sin_t && k2.sin_t {
        vec![
            (k1.cos_t + k2.cos_t, false, 1),
            (k1.cos_t + k2.cos_t + 2, false, -1),
        ]
    } else {
        vec![(k1.cos_t + k2.cos_t, k1.sin_t || k2.sin_t, 1)]
    };
    let p_parts: Vec<(u32, bool, i8)> = if k1.sin_phi && k2.sin_phi {
        vec![
            (k1.cos_phi + k2.cos_phi, false, 1),
            (k1.cos_phi + k2.cos_phi + 2, false, -1),
        ]
    } else {
        vec![(k1.cos_phi + k2.cos_phi, k1.sin_phi || k2.sin_phi, 1)]
    };
    let mut out = Vec::with_capacity(t_parts.len() * p_parts.len());
    for &(ct, st, s1) in &t_parts {
        for &(cp, sp, s2) in &p_parts {
            out.push((
                AnchorKey {
                    cos_t: ct,
                    sin_t: st,
                    cos_phi: cp,
                    sin_phi: sp,
                },
                s1 * s2,
            ));
        }
    }
    out
}

/// The third-form Beltrami operator of the anchor ring.
pub fn apply_delta3_anchor(f: &AnchorExpr) -> AnchorExpr {
    let ftt = f.dt().dt();
    let ft = f.dt();
    let fpp = f.dphi().dphi();
    ftt.neg()
        .add(&ft.mul_tan_t())
        .add(&fpp.shift_cos_t(-2).neg())
}

impl fmt::Display for AnchorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let body = c.to_string();
            let mut wrote = false;
            if *k == AnchorKey::ONE {
                write!(f, "{}", body)?;
                continue;
            }
            if body == "1" {
                // unit coefficient: skip
            } else if body == "-1" {
                write!(f, "-")?;
            } else if c.num_terms() > 1 {
                write!(f, "({})", body)?;
                wrote = true;
            } else {
                write!(f, "{}", body)?;
                wrote = true;
            }
            let mut push = |s: String, f: &mut fmt::Formatter<'_>| -> fmt::Result {
                if wrote {
                    write!(f, "*")?;
                }
                wrote = true;
                write!(f, "{}", s)
            };
            if k.cos_t == 1 {
                push("cos_t".into(), f)?;
            } else if k.cos_t != 0 {
                push(format!("cos_t^{}", k.cos_t), f)?;
            }
            if k.sin_t {
                push("sin_t".into(), f)?;
            }
            if k.cos_phi == 1 {
                push("cos_phi".into(), f)?;
            } else if k.cos_phi != 0 {
                push(format!("cos_phi^{}", k.cos_phi), f)?;
            }
            if k.sin_phi {
                push("sin_phi".into(), f)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum AnchorError {
    #[error("iterate order {requested} exceeds the configured bound {bound}")]
    BoundExceeded { requested: u32, bound: u32 },
    #[error("iterate {order} left the expected coefficient lattice: {detail}")]
    ShapeViolation { order: u32, detail: String },
}

/// The standard embedding `((a + r cos t)cos phi, (a + r cos t)sin phi,
/// r sin t)`.
pub fn anchor_position() -> [AnchorExpr; 3] {
    let profile_cos = AnchorExpr::term(
        AnchorKey {
            cos_t: 0,
            sin_t: false,
            cos_phi: 1,
            sin_phi: false,
        },
        spine_radius(),
    )
    .add(&AnchorExpr::term(
        AnchorKey {
            cos_t: 1,
            sin_t: false,
            cos_phi: 1,
            sin_phi: false,
        },
        tube_radius(),
    ));
    let profile_sin = AnchorExpr::term(
        AnchorKey {
            cos_t: 0,
            sin_t: false,
            cos_phi: 0,
            sin_phi: true,
        },
        spine_radius(),
    )
    .add(&AnchorExpr::term(
        AnchorKey {
            cos_t: 1,
            sin_t: false,
            cos_phi: 0,
            sin_phi: true,
        },
        tube_radius(),
    ));
    let height = AnchorExpr::term(
        AnchorKey {
            cos_t: 0,
            sin_t: true,
            cos_phi: 0,
            sin_phi: false,
        },
        tube_radius(),
    );
    [profile_cos, profile_sin, height]
}

/// `[x1, L x1, L^2 x1, ..., L^m x1]` where `L` is the third-form operator.
pub fn anchor_iterates(m: u32, bound: u32) -> Result<Vec<AnchorExpr>, AnchorError> {
    if m > bound {
        return Err(AnchorError::BoundExceeded {
            requested: m,
            bound,
        });
    }
    let mut out = Vec::with_capacity(m as usize + 1);
    out.push(AnchorExpr::x1());
    for _ in 0..m {
        let next = apply_delta3_anchor(out.last().expect("nonempty"));
        out.push(next);
    }
    Ok(out)
}

/// `L^m x1` together with its exact coefficient table.
pub fn anchor_iterate_x1(
    m: u32,
    bound: u32,
) -> Result<(AnchorExpr, CoefficientTable), AnchorError> {
    let iterates = anchor_iterates(m, bound)?;
    let last = iterates.into_iter().last().expect("nonempty");
    let table = coefficient_table(&last, m)?;
    Ok((last, table))
}

/// Coefficients of `L^m x1` over the fixed basis: the spine-radius part is
/// `sum_j d[j] * a * cos(phi)/cos^{2j+2}(t)` and the tube-radius part is
/// `r_coefficient * r * cos(t) cos(phi)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientTable {
    pub m: u32,
    pub d: Vec<BigRational>,
    pub r_coefficient: BigRational,
}

pub fn coefficient_table(iterate: &AnchorExpr, m: u32) -> Result<CoefficientTable, AnchorError> {
    if m == 0 {
        return Err(AnchorError::ShapeViolation {
            order: 0,
            detail: "the zeroth iterate is the position itself".into(),
        });
    }
    let shape_err = |detail: String| AnchorError::ShapeViolation { order: m, detail };
    if iterate.num_terms() != m as usize + 1 {
        return Err(shape_err(format!(
            "expected {} terms, found {}",
            m + 1,
            iterate.num_terms()
        )));
    }
    let mut d = Vec::with_capacity(m as usize);
    for j in 0..m {
        let key = AnchorKey {
            cos_t: -2 * (j as i32 + 1),
            sin_t: false,
            cos_phi: 1,
            sin_phi: false,
        };
        let coeff = iterate.coeff(&key);
        let scalar = coeff
            .div_var_pow(ArVar::A, 1)
            .and_then(|p| p.as_constant())
            .ok_or_else(|| {
                shape_err(format!(
                    "coefficient of cos_phi/cos_t^{} is not a rational multiple of a: {}",
                    2 * (j + 1),
                    coeff
                ))
            })?;
        d.push(scalar);
    }
    let r_key = AnchorKey {
        cos_t: 1,
        sin_t: false,
        cos_phi: 1,
        sin_phi: false,
    };
    let r_coeff = iterate.coeff(&r_key);
    let r_scalar = r_coeff
        .div_var_pow(ArVar::R, 1)
        .and_then(|p| p.as_constant())
        .ok_or_else(|| {
            shape_err(format!(
                "coefficient of cos_t*cos_phi is not a rational multiple of r: {}",
                r_coeff
            ))
        })?;
    Ok(CoefficientTable {
        m,
        d,
        r_coefficient: r_scalar,
    })
}

/// Closed form for the first column, `d_{0,m} = 2^(m-1)`.
pub fn d_first_closed_form(m: u32) -> BigRational {
    let mut v = BigRational::one();
    for _ in 1..m {
        v *= rat(2);
    }
    v
}

/// Closed form for the pivot, `d_{m-1,m} = (-1)^(m-1) (2m-1) prod_{j=1}^m (2j-3)^2`.
pub fn d_last_closed_form(m: u32) -> BigRational {
    let mut v = rat(2 * m as i64 - 1);
    if m.is_multiple_of(2) {
        v = -v;
    }
    for j in 1..=m as i64 {
        let f = 2 * j - 3;
        v *= rat(f * f);
    }
    v
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClosedFormCheck {
    pub m: u32,
    pub d_first: RatJson,
    pub d_last: RatJson,
    pub first_matches: bool,
    pub last_matches: bool,
    pub first_recursion_holds: bool,
    pub last_recursion_holds: bool,
}

/// Compares the extracted coefficient tables against the closed forms and
/// the one-step recursions `d_{0,m+1} = 2 d_{0,m}`,
/// `d_{m,m+1} = -(2m-1)(2m+1) d_{m-1,m}`.
pub fn d_closed_form_check(m_max: u32, bound: u32) -> Result<Vec<ClosedFormCheck>, AnchorError> {
    let iterates = anchor_iterates(m_max, bound)?;
    let tables: Vec<CoefficientTable> = (1..=m_max)
        .map(|m| coefficient_table(&iterates[m as usize], m))
        .collect::<Result<_, _>>()?;
    let mut out = Vec::with_capacity(m_max as usize);
    for m in 1..=m_max {
        let t = &tables[m as usize - 1];
        let first = t.d.first().expect("m >= 1").clone();
        let last = t.d.last().expect("m >= 1").clone();
        let first_recursion_holds = if m > 1 {
            let prev = tables[m as usize - 2].d.first().unwrap().clone();
            first == prev * rat(2)
        } else {
            true
        };
        let last_recursion_holds = if m > 1 {
            let prev = tables[m as usize - 2].d.last().unwrap().clone();
            let k = 2 * (m as i64 - 1);
            last == prev * rat(-(k - 1) * (k + 1))
        } else {
            true
        };
        out.push(ClosedFormCheck {
            m,
            d_first: RatJson::from(&first),
            d_last: RatJson::from(&last),
            first_matches: first == d_first_closed_form(m),
            last_matches: last == d_last_closed_form(m),
            first_recursion_holds,
            last_recursion_holds,
        });
    }
    Ok(out)
}

/// Exact obstruction to a monic relation among the operator iterates of
/// `x1`: each application introduces `cos(phi)/cos^(2m)(t)` with a nonzero
/// pivot, while every earlier iterate (and any constant translation) lives
/// strictly below that pole. A vanishing linear combination with leading
/// coefficient one is therefore impossible at every order up to `m_max`.
/// Equivalently, the iterates are upper-triangular over the basis
/// `{cos_t*cos_phi, cos_phi/cos_t^2, cos_phi/cos_t^4, ...}` with a new
/// nonzero pivot at each step.
pub fn anchor_infinite_type_certificate(
    m_max: u32,
    bound: u32,
) -> Result<InfiniteTypeCertificate, AnchorError> {
    let iterates = anchor_iterates(m_max, bound)?;
    let mut steps = Vec::with_capacity(m_max as usize);
    let mut pass = true;
    for m in 1..=m_max {
        let table = coefficient_table(&iterates[m as usize], m)?;
        let pivot = table.d.last().expect("m >= 1").clone();
        let nonzero = !pivot.is_zero();
        let lead_key = AnchorKey {
            cos_t: -2 * m as i32,
            sin_t: false,
            cos_phi: 1,
            sin_phi: false,
        };
        let separated = iterates[..m as usize]
            .iter()
            .all(|it| it.coeff(&lead_key).is_zero());
        let lower_exponent = iterates[..m as usize]
            .iter()
            .map(|it| it.cos_t_pole() as u32)
            .max()
            .unwrap_or(0);
        pass &= nonzero && separated;
        steps.push(CertificateStep {
            order: m,
            lead_exponent: 2 * m,
            lead_coefficient: RatJson::from(&pivot),
            nonzero,
            lower_exponent,
            separated,
        });
    }
    Ok(InfiniteTypeCertificate {
        mode: CertificateMode::Anchor,
        order: m_max,
        relation: "L^m(x1) + c_1*L^(m-1)(x1) + ... + c_m*x1 = const reduces to \
                   pivot*cos_phi/cos_t^(2m) + F(cos_t)*cos_phi/cos_t^(2m-2) = 0"
            .into(),
        steps,
        pass,
        degenerate_branch: None,
        note: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_frac;

    fn delta(f: &AnchorExpr) -> AnchorExpr {
        apply_delta3_anchor(f)
    }

    #[test]
    fn first_iterate_matches_hand_computation() {
        // L x1 = a cos_phi / cos^2 t + 2 r cos t cos_phi
        let x1 = AnchorExpr::x1();
        let expected = AnchorExpr::cos_phi_over_cos_t(2)
            .mul_poly(&spine_radius())
            .add(&AnchorExpr::term(
                AnchorKey {
                    cos_t: 1,
                    sin_t: false,
                    cos_phi: 1,
                    sin_phi: false,
                },
                tube_radius().mul_rat(&rat(2)),
            ));
        assert_eq!(delta(&x1), expected);
        assert_eq!(
            delta(&x1).to_string(),
            "a*cos_t^-2*cos_phi + 2*r*cos_t*cos_phi"
        );
    }

    #[test]
    fn second_and_third_iterates() {
        let (_, t2) = anchor_iterate_x1(2, 12).unwrap();
        assert_eq!(t2.d, vec![rat(2), rat(-3)]);
        assert_eq!(t2.r_coefficient, rat(4));
        let (expr3, t3) = anchor_iterate_x1(3, 12).unwrap();
        assert_eq!(t3.d, vec![rat(4), rat(-42), rat(45)]);
        assert_eq!(t3.r_coefficient, rat(8));
        assert_eq!(expr3.cos_t_pole(), 6);
    }

    #[test]
    fn eigen_relation_on_basis_elements() {
        // L (cos_phi / cos^k t) = (k^2 - k) cos_phi/cos^k t - (k^2-1) cos_phi/cos^{k+2} t
        for k in 1..=8i64 {
            let b = AnchorExpr::cos_phi_over_cos_t(k as i32);
            let expected = b
                .mul_rat(&rat(k * k - k))
                .add(&AnchorExpr::cos_phi_over_cos_t(k as i32 + 2).mul_rat(&rat(-(k * k - 1))));
            assert_eq!(delta(&b), expected, "basis relation fails at k = {k}");
        }
    }

    #[test]
    fn pole_one_is_annihilated() {
        let b = AnchorExpr::cos_phi_over_cos_t(1);
        assert!(delta(&b).is_zero());
    }

    #[test]
    fn cos_t_cos_phi_is_an_eigenfunction() {
        let e = AnchorExpr::term(
            AnchorKey {
                cos_t: 1,
                sin_t: false,
                cos_phi: 1,
                sin_phi: false,
            },
            ArPoly::one(),
        );
        assert_eq!(delta(&e), e.mul_rat(&rat(2)));
    }

    #[test]
    fn closed_forms_match_engine() {
        let checks = d_closed_form_check(6, 12).unwrap();
        for c in &checks {
            assert!(
                c.first_matches && c.last_matches,
                "closed form fails at m = {}",
                c.m
            );
            assert!(c.first_recursion_holds && c.last_recursion_holds);
        }
        // Spot-check the exact pivot values.
        assert_eq!(d_last_closed_form(1), rat(1));
        assert_eq!(d_last_closed_form(2), rat(-3));
        assert_eq!(d_last_closed_form(3), rat(45));
        assert_eq!(d_last_closed_form(4), rat(-1575));
    }

    #[test]
    fn certificate_is_triangular_with_nonzero_pivots() {
        let cert = anchor_infinite_type_certificate(5, 12).unwrap();
        assert!(cert.pass);
        for (i, s) in cert.steps.iter().enumerate() {
            assert_eq!(s.order, i as u32 + 1);
            assert!(s.holds());
            assert_eq!(s.lead_exponent, 2 * (i as u32 + 1));
            assert!(s.lower_exponent <= s.lead_exponent - 2);
        }
        let pivots: Vec<_> = cert
            .steps
            .iter()
            .map(|s| s.lead_coefficient.to_rational().unwrap())
            .collect();
        assert_eq!(pivots[..3], [rat(1), rat(-3), rat(45)]);
    }

    #[test]
    fn bound_is_enforced() {
        let err = anchor_iterate_x1(13, 12).unwrap_err();
        assert!(err.to_string().contains("exceeds the configured bound"));
    }

    #[test]
    fn position_components_at_the_outer_equator() {
        let [x1, x2, x3] = anchor_position();
        assert!((x1.eval(2.0, 1.0, 0.0, 0.0) - 3.0).abs() < 1e-15);
        assert!(x2.eval(2.0, 1.0, 0.0, 0.0).abs() < 1e-15);
        assert!(x3.eval(2.0, 1.0, 0.0, 0.0).abs() < 1e-15);
        // x3 does not depend on phi
        assert!(x3.terms().all(|(k, _)| k.cos_phi == 0 && !k.sin_phi));
    }

    #[test]
    fn numeric_eval_of_first_iterate() {
        let x1 = AnchorExpr::x1();
        let lx1 = delta(&x1);
        let (a, r, t, phi) = (2.0_f64, 0.5_f64, 0.7_f64, 1.3_f64);
        let expected = a * phi.cos() / t.cos().powi(2) + 2.0 * r * t.cos() * phi.cos();
        assert!((lx1.eval(a, r, t, phi) - expected).abs() < 1e-12);
    }

    #[test]
    fn product_reduces_sines() {
        // sin_t * sin_t = 1 - cos_t^2
        let st = AnchorExpr::term(
            AnchorKey {
                cos_t: 0,
                sin_t: true,
                cos_phi: 0,
                sin_phi: false,
            },
            ArPoly::one(),
        );
        let sq = st.mul(&st);
        let expected = AnchorExpr::term(AnchorKey::ONE, ArPoly::one()).sub(&AnchorExpr::term(
            AnchorKey {
                cos_t: 2,
                sin_t: false,
                cos_phi: 0,
                sin_phi: false,
            },
            ArPoly::one(),
        ));
        assert_eq!(sq, expected);
    }

    #[test]
    fn rational_coefficients_survive() {
        let e = AnchorExpr::x1().mul_rat(&rat_frac(1, 3));
        let tripled = e.mul_rat(&rat(3));
        assert_eq!(tripled, AnchorExpr::x1());
    }
}
