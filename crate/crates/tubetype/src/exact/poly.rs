//! Sparse multivariate polynomials over arbitrary-precision rationals.
//!
//! Terms live in a `BTreeMap` keyed by monomial, so iteration order (and with
//! it display output and serialization) is stable across runs. Monomials
//! compare by total degree first, then lexicographically on the variable
//! list, which keeps the printed form independent of insertion order.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// A variable symbol usable inside a [`Poly`].
pub trait PolyVar: Copy + Ord + Eq + fmt::Debug {
    fn symbol(&self) -> String;
}

/// Product of variables with positive exponents, kept sorted by variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Mono<V: PolyVar> {
    factors: Vec<(V, u32)>,
}

impl<V: PolyVar> Mono<V> {
    pub fn one() -> Self {
        Mono {
            factors: Vec::new(),
        }
    }

    pub fn var(v: V) -> Self {
        Mono {
            factors: vec![(v, 1)],
        }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent_of(&self, v: V) -> u32 {
        self.factors
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> &[(V, u32)] {
        &self.factors
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out: Vec<(V, u32)> = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (a, ea) = self.factors[i];
            let (b, eb) = other.factors[j];
            match a.cmp(&b) {
                std::cmp::Ordering::Less => {
                    out.push((a, ea));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b, eb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[i..]);
        out.extend_from_slice(&other.factors[j..]);
        Mono { factors: out }
    }

    /// Divides by `v^k`, or `None` when the exponent is too small.
    pub fn div_var_pow(&self, v: V, k: u32) -> Option<Self> {
        if k == 0 {
            return Some(self.clone());
        }
        let mut factors = self.factors.clone();
        let pos = factors.iter().position(|&(w, _)| w == v)?;
        if factors[pos].1 < k {
            return None;
        }
        factors[pos].1 -= k;
        if factors[pos].1 == 0 {
            factors.remove(pos);
        }
        Some(Mono { factors })
    }
}

impl<V: PolyVar> PartialOrd for Mono<V> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<V: PolyVar> Ord for Mono<V> {
    /// Graded lexicographic: higher total degree wins; ties go to the
    /// monomial with the larger exponent on the earliest variable.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match self.degree().cmp(&other.degree()) {
            std::cmp::Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.factors.get(i), other.factors.get(j)) {
                (None, None) => return std::cmp::Ordering::Equal,
                // A missing factor means exponent zero on a later variable,
                // so the side that still has factors holds the earlier one.
                (Some(_), None) => return std::cmp::Ordering::Greater,
                (None, Some(_)) => return std::cmp::Ordering::Less,
                (Some(&(a, ea)), Some(&(b, eb))) => match a.cmp(&b) {
                    std::cmp::Ordering::Less => return std::cmp::Ordering::Greater,
                    std::cmp::Ordering::Greater => return std::cmp::Ordering::Less,
                    std::cmp::Ordering::Equal => {
                        match ea.cmp(&eb) {
                            std::cmp::Ordering::Equal => {}
                            ord => return ord,
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl<V: PolyVar> fmt::Display for Mono<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for &(v, e) in &self.factors {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", v.symbol())?;
            } else {
                write!(f, "{}^{}", v.symbol(), e)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly<V: PolyVar> {
    terms: BTreeMap<Mono<V>, BigRational>,
}

impl<V: PolyVar> Poly<V> {
    pub fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::from_integer(1.into()))
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono::one(), c);
        }
        Poly { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(BigRational::from_integer(n.into()))
    }

    pub fn var(v: V) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Mono::var(v), BigRational::from_integer(1.into()));
        Poly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Mono<V>, BigRational)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono<V>, &BigRational)> {
        self.terms.iter()
    }

    pub fn constant_part(&self) -> BigRational {
        self.terms
            .get(&Mono::one())
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// The whole polynomial as a rational constant, if it is one.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            return Some(BigRational::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&Mono::one()) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn add_term(&mut self, m: Mono<V>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
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
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_rat(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_var(&self, v: V) -> Self {
        let m = Mono::var(v);
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(&m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Poly::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Smallest exponent of `v` across all terms; `None` for the zero poly.
    pub fn valuation(&self, v: V) -> Option<u32> {
        self.terms.keys().map(|m| m.exponent_of(v)).min()
    }

    /// Exact division by `v^k`; fails when some term lacks the factor.
    pub fn div_var_pow(&self, v: V, k: u32) -> Option<Self> {
        if k == 0 {
            return Some(self.clone());
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(m.div_var_pow(v, k)?, c.clone());
        }
        Some(Poly { terms })
    }

    pub fn eval(&self, assign: &impl Fn(V) -> f64) -> f64 {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut term = rational_to_f64(c);
            for &(v, e) in m.factors() {
                term *= assign(v).powi(e as i32);
            }
            acc += term;
        }
        acc
    }

    /// Leading term under the graded-lex order.
    pub fn leading(&self) -> Option<(&Mono<V>, &BigRational)> {
        self.terms.iter().next_back()
    }
}

pub fn rational_to_f64(c: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    c.to_f64().expect("rational out of f64 range")
}

impl<V: PolyVar> fmt::Display for Poly<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Leading term first.
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            let negative = c.is_negative();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_coeff = mag == BigRational::from_integer(1.into());
            if m.is_one() {
                write!(f, "{}", mag)?;
            } else if unit_coeff {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", mag, m)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
    enum XY {
        X,
        Y,
    }

    impl PolyVar for XY {
        fn symbol(&self) -> String {
            match self {
                XY::X => "x".into(),
                XY::Y => "y".into(),
            }
        }
    }

    fn x() -> Poly<XY> {
        Poly::var(XY::X)
    }

    fn y() -> Poly<XY> {
        Poly::var(XY::Y)
    }

    #[test]
    fn binomial_square() {
        let p = x().add(&y());
        let sq = p.mul(&p);
        let expected = x()
            .mul(&x())
            .add(&x().mul(&y()).mul_rat(&BigRational::from_integer(2.into())))
            .add(&y().mul(&y()));
        assert_eq!(sq, expected);
        assert_eq!(sq.to_string(), "x^2 + 2*x*y + y^2");
    }

    #[test]
    fn cancellation_drops_terms() {
        let p = x().sub(&x());
        assert!(p.is_zero());
        assert_eq!(p.to_string(), "0");
    }

    #[test]
    fn graded_lex_puts_higher_degree_first() {
        let p = x().add(&y().mul(&y()));
        assert_eq!(p.to_string(), "y^2 + x");
    }

    #[test]
    fn valuation_and_exact_division() {
        let p = x().mul(&x()).mul(&y()).add(&x().mul(&y()).mul(&y()));
        assert_eq!(p.valuation(XY::X), Some(1));
        assert_eq!(p.valuation(XY::Y), Some(1));
        let q = p.div_var_pow(XY::X, 1).unwrap();
        assert_eq!(q.to_string(), "x*y + y^2");
        assert!(p.div_var_pow(XY::X, 2).is_none());
    }

    #[test]
    fn eval_matches_hand_value() {
        let p = x()
            .mul(&x())
            .sub(&y().mul_rat(&BigRational::new(1.into(), 2.into())));
        let v = p.eval(&|v| match v {
            XY::X => 3.0,
            XY::Y => 4.0,
        });
        assert!((v - 7.0).abs() < 1e-12);
    }
}
