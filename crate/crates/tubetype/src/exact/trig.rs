//! Polynomials in `cos(phi)` and `sin(phi)` with jet-polynomial
//! coefficients, in the normal form where `sin^2` never appears: every
//! element is `p(c) + s*q(c)` with `c = cos(phi)`, `s = sin(phi)`.

use super::jet::{eval_jet_poly, jet_derivative, JetPoly, JetValues, JetVar};
use num_rational::BigRational;
use std::fmt;

/// Polynomial in `c = cos(phi)` with jet coefficients. `coeffs[i]` is the
/// coefficient of `c^i`; trailing zeros are trimmed.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CosPoly {
    coeffs: Vec<JetPoly>,
}

impl CosPoly {
    pub fn zero() -> Self {
        CosPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<JetPoly>) -> Self {
        while coeffs.last().is_some_and(JetPoly::is_zero) {
            coeffs.pop();
        }
        CosPoly { coeffs }
    }

    pub fn constant(p: JetPoly) -> Self {
        Self::from_coeffs(vec![p])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> JetPoly {
        self.coeffs.get(i).cloned().unwrap_or_else(JetPoly::zero)
    }

    pub fn coeffs(&self) -> &[JetPoly] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).add(&other.coeff(i)));
        }
        Self::from_coeffs(out)
    }

    pub fn neg(&self) -> Self {
        CosPoly {
            coeffs: self.coeffs.iter().map(JetPoly::neg).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![JetPoly::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::from_coeffs(out)
    }

    pub fn mul_jet(&self, p: &JetPoly) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a.mul(p)).collect())
    }

    /// Multiply by `c^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = vec![JetPoly::zero(); k];
        out.extend(self.coeffs.iter().cloned());
        CosPoly { coeffs: out }
    }

    /// Formal derivative with respect to `c`.
    pub fn d_dc(&self) -> Self {
        let mut out = Vec::new();
        for (i, a) in self.coeffs.iter().enumerate().skip(1) {
            out.push(a.mul_rat(&BigRational::from_integer((i as i64).into())));
        }
        Self::from_coeffs(out)
    }

    /// Coefficient-wise arc-length derivative.
    pub fn dt(&self) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(jet_derivative).collect())
    }

    /// Lowest power of `c` with a nonzero coefficient.
    pub fn c_valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|a| !a.is_zero())
    }

    pub fn jet_valuation(&self, v: JetVar) -> Option<u32> {
        self.coeffs
            .iter()
            .filter(|a| !a.is_zero())
            .map(|a| a.valuation(v).expect("nonzero poly has a valuation"))
            .min()
    }

    pub fn div_c_pow(&self, k: usize) -> Option<Self> {
        if k == 0 || self.is_zero() {
            return Some(self.clone());
        }
        if self.c_valuation()? < k {
            return None;
        }
        Some(CosPoly {
            coeffs: self.coeffs[k..].to_vec(),
        })
    }

    pub fn div_jet_pow(&self, v: JetVar, k: u32) -> Option<Self> {
        if k == 0 {
            return Some(self.clone());
        }
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            if a.is_zero() {
                out.push(JetPoly::zero());
            } else {
                out.push(a.div_var_pow(v, k)?);
            }
        }
        Some(Self::from_coeffs(out))
    }

    /// Exact division by `1 - r*k*c`. Works upward from the constant term;
    /// the final coefficient must close the recursion exactly.
    pub fn div_one_minus_rkc(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let rk = super::jet::radius().mul(&super::jet::kappa(0));
        let deg = self.coeffs.len() - 1;
        if deg == 0 {
            // Degree-zero dividend: only divisible when zero, handled above.
            return None;
        }
        let mut q = vec![JetPoly::zero(); deg];
        q[0] = self.coeff(0);
        for j in 1..deg {
            q[j] = self.coeff(j).add(&rk.mul(&q[j - 1]));
        }
        // p_deg must equal -rk * q_{deg-1}.
        if self.coeff(deg) == rk.mul(&q[deg - 1]).neg() {
            Some(Self::from_coeffs(q))
        } else {
            None
        }
    }

    pub fn eval(&self, values: &JetValues, c: f64) -> f64 {
        // Horner, from the top coefficient down.
        let mut acc = 0.0;
        for a in self.coeffs.iter().rev() {
            acc = acc * c + eval_jet_poly(a, values);
        }
        acc
    }
}

/// `parts[0] + sin(phi) * parts[1]`, each a polynomial in `cos(phi)`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TrigPoly {
    pub parts: [CosPoly; 2],
}

impl TrigPoly {
    pub fn zero() -> Self {
        TrigPoly {
            parts: [CosPoly::zero(), CosPoly::zero()],
        }
    }

    pub fn from_parts(even: CosPoly, odd: CosPoly) -> Self {
        TrigPoly { parts: [even, odd] }
    }

    pub fn constant(p: JetPoly) -> Self {
        Self::from_parts(CosPoly::constant(p), CosPoly::zero())
    }

    pub fn cos_phi() -> Self {
        Self::from_parts(
            CosPoly::from_coeffs(vec![JetPoly::zero(), JetPoly::one()]),
            CosPoly::zero(),
        )
    }

    pub fn sin_phi() -> Self {
        Self::from_parts(CosPoly::zero(), CosPoly::constant(JetPoly::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.parts[0].is_zero() && self.parts[1].is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_parts(
            self.parts[0].add(&other.parts[0]),
            self.parts[1].add(&other.parts[1]),
        )
    }

    pub fn neg(&self) -> Self {
        Self::from_parts(self.parts[0].neg(), self.parts[1].neg())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Product with `sin^2 -> 1 - c^2` applied immediately, so the result
    /// is back in normal form.
    pub fn mul(&self, other: &Self) -> Self {
        let (p1, q1) = (&self.parts[0], &self.parts[1]);
        let (p2, q2) = (&other.parts[0], &other.parts[1]);
        let qq = q1.mul(q2);
        // (p1 + s q1)(p2 + s q2) = p1 p2 + (1 - c^2) q1 q2 + s (p1 q2 + q1 p2)
        let even = p1.mul(p2).add(&qq).sub(&qq.shift(2));
        let odd = p1.mul(q2).add(&q1.mul(p2));
        Self::from_parts(even, odd)
    }

    pub fn mul_jet(&self, p: &JetPoly) -> Self {
        Self::from_parts(self.parts[0].mul_jet(p), self.parts[1].mul_jet(p))
    }

    pub fn mul_rat(&self, c: &BigRational) -> Self {
        self.mul_jet(&JetPoly::constant(c.clone()))
    }

    /// Multiply by `(k*c)^n` without going through the generic product.
    pub fn mul_kc_pow(&self, n: u32) -> Self {
        if n == 0 {
            return self.clone();
        }
        let kn = super::jet::kappa(0).pow(n);
        Self::from_parts(
            self.parts[0].mul_jet(&kn).shift(n as usize),
            self.parts[1].mul_jet(&kn).shift(n as usize),
        )
    }

    /// Arc-length derivative (coefficients only; `phi` is independent of t).
    pub fn dt(&self) -> Self {
        Self::from_parts(self.parts[0].dt(), self.parts[1].dt())
    }

    /// Derivative in `phi`:
    ///   d/dphi p(c)        = -s p'(c)
    ///   d/dphi (s q(c))    = c q(c) - (1 - c^2) q'(c)
    pub fn dphi(&self) -> Self {
        let (p, q) = (&self.parts[0], &self.parts[1]);
        let dq = q.d_dc();
        let even = q.shift(1).sub(&dq).add(&dq.shift(2));
        let odd = p.d_dc().neg();
        Self::from_parts(even, odd)
    }

    pub fn c_valuation(&self) -> Option<usize> {
        match (self.parts[0].c_valuation(), self.parts[1].c_valuation()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (Some(a), None) => Some(a),
            (None, b) => b,
        }
    }

    pub fn jet_valuation(&self, v: JetVar) -> Option<u32> {
        match (
            self.parts[0].jet_valuation(v),
            self.parts[1].jet_valuation(v),
        ) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (Some(a), None) => Some(a),
            (None, b) => b,
        }
    }

    pub fn div_c_pow(&self, k: usize) -> Option<Self> {
        Some(Self::from_parts(
            self.parts[0].div_c_pow(k)?,
            self.parts[1].div_c_pow(k)?,
        ))
    }

    pub fn div_jet_pow(&self, v: JetVar, k: u32) -> Option<Self> {
        Some(Self::from_parts(
            self.parts[0].div_jet_pow(v, k)?,
            self.parts[1].div_jet_pow(v, k)?,
        ))
    }

    pub fn div_one_minus_rkc(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let even = if self.parts[0].is_zero() {
            CosPoly::zero()
        } else {
            self.parts[0].div_one_minus_rkc()?
        };
        let odd = if self.parts[1].is_zero() {
            CosPoly::zero()
        } else {
            self.parts[1].div_one_minus_rkc()?
        };
        Some(Self::from_parts(even, odd))
    }

    /// Drops every term divisible by `k*c` jointly. What remains is the
    /// residue class modulo the ideal `(k*c)`, which pins down the leading
    /// coefficient of a pole in `(k*c)`.
    pub fn residue_mod_kc(&self) -> Self {
        let keep = |poly: &CosPoly| -> CosPoly {
            let mut out = Vec::with_capacity(poly.coeffs().len());
            for (i, a) in poly.coeffs().iter().enumerate() {
                if i == 0 {
                    out.push(a.clone());
                    continue;
                }
                // c^i with i >= 1: keep only the part of `a` not divisible by k.
                let mut kept = JetPoly::zero();
                for (m, c) in a.terms() {
                    if m.exponent_of(JetVar::Kappa(0)) == 0 {
                        kept.add_term(m.clone(), c.clone());
                    }
                }
                out.push(kept);
            }
            CosPoly::from_coeffs(out)
        };
        Self::from_parts(keep(&self.parts[0]), keep(&self.parts[1]))
    }

    /// If `self == q * other` for a rational `q`, returns it.
    pub fn rational_multiple_of(&self, other: &Self) -> Option<BigRational> {
        use num_traits::Zero;
        if other.is_zero() {
            return if self.is_zero() {
                Some(BigRational::zero())
            } else {
                None
            };
        }
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        // Find one matching nonzero coefficient pair to fix the ratio.
        let probe = |tp: &TrigPoly| -> Option<(usize, usize, BigRational)> {
            for (part, poly) in tp.parts.iter().enumerate() {
                for (i, a) in poly.coeffs().iter().enumerate() {
                    if let Some((_, c)) = a.leading() {
                        return Some((part, i, c.clone()));
                    }
                }
            }
            None
        };
        let (part, i, denom_lead) = probe(other)?;
        let self_coeff = self.parts[part].coeff(i);
        let other_coeff = other.parts[part].coeff(i);
        let (lead_mono, _) = other_coeff.leading()?;
        let self_lead = self_coeff
            .terms()
            .find(|(m, _)| *m == lead_mono)
            .map(|(_, c)| c.clone())?;
        let q = self_lead / denom_lead;
        if *self == other.mul_rat(&q) {
            Some(q)
        } else {
            None
        }
    }

    pub fn eval(&self, values: &JetValues, phi: f64) -> f64 {
        let (c, s) = (phi.cos(), phi.sin());
        self.parts[0].eval(values, c) + s * self.parts[1].eval(values, c)
    }
}

fn fmt_cos_part(
    f: &mut fmt::Formatter<'_>,
    poly: &CosPoly,
    sin: bool,
    first: &mut bool,
) -> fmt::Result {
    // Highest power of c first.
    for i in (0..poly.coeffs().len()).rev() {
        let a = poly.coeff(i);
        if a.is_zero() {
            continue;
        }
        if !*first {
            write!(f, " + ")?;
        }
        *first = false;
        let needs_parens = a.num_terms() > 1;
        let body = a.to_string();
        let has_factor = i > 0 || sin;
        if needs_parens && has_factor {
            write!(f, "({})", body)?;
        } else if body == "1" && has_factor {
            // suppress the unit coefficient
        } else if body == "-1" && has_factor {
            write!(f, "-")?;
        } else {
            write!(f, "{}", body)?;
        }
        let mut wrote_any = !(has_factor && (body == "1" || body == "-1")) && !body.is_empty();
        if needs_parens {
            wrote_any = true;
        }
        if i > 0 {
            if wrote_any {
                write!(f, "*")?;
            }
            if i == 1 {
                write!(f, "c")?;
            } else {
                write!(f, "c^{}", i)?;
            }
            wrote_any = true;
        }
        if sin {
            if wrote_any {
                write!(f, "*")?;
            }
            write!(f, "s")?;
        }
    }
    Ok(())
}

impl fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        fmt_cos_part(f, &self.parts[0], false, &mut first)?;
        fmt_cos_part(f, &self.parts[1], true, &mut first)?;
        Ok(())
    }
}
