//! Truncated multivariate polynomials modelling the even cohomology of a
//! smooth fixed component.
//!
//! A [`RingModel`] is a monomial quotient: every variable has an exponent cap,
//! monomials above the total-degree cap vanish, and an explicit integral map
//! on top-degree monomials gives the evaluation pairing against the
//! fundamental class. Degrees are complex degrees (each variable has degree 1).

mod template;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::cyclo::{Cyclotomic, Rational};
use crate::error::{Error, Result};
use crate::ycoeff::YCoeff;

pub use template::{compose_template, template_coefficients, TemplateId};

pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingModel {
    vars: Vec<String>,
    caps: Vec<u32>,
    total_cap: u32,
    integral: BTreeMap<Monomial, Rational>,
}

impl RingModel {
    pub fn new(
        vars: Vec<String>,
        caps: Vec<u32>,
        total_cap: u32,
        integral: BTreeMap<Monomial, Rational>,
    ) -> Result<Arc<Self>> {
        if vars.len() != caps.len() {
            return Err(Error::InvalidRing(format!(
                "{} variables but {} caps",
                vars.len(),
                caps.len()
            )));
        }
        let ring = RingModel {
            vars,
            caps,
            total_cap,
            integral,
        };
        for m in ring.integral.keys() {
            if m.len() != ring.vars.len() || !ring.admits(m) {
                return Err(Error::InvalidRing(format!(
                    "integral monomial {m:?} is not in the ring"
                )));
            }
            if m.iter().sum::<u32>() != total_cap {
                return Err(Error::InvalidRing(format!(
                    "integral monomial {m:?} does not have top degree {total_cap}"
                )));
            }
        }
        Ok(Arc::new(ring))
    }

    /// The cohomology of a point.
    pub fn point() -> Arc<Self> {
        Self::new(
            Vec::new(),
            Vec::new(),
            0,
            BTreeMap::from([(Vec::new(), Rational::one())]),
        )
        .unwrap()
    }

    /// `H^*(P^n) = Q[x]/(x^{n+1})` with `∫ x^n = 1`.
    pub fn projective(n: u32, var: &str) -> Arc<Self> {
        Self::new(
            vec![var.to_string()],
            vec![n],
            n,
            BTreeMap::from([(vec![n], Rational::one())]),
        )
        .unwrap()
    }

    /// The tensor model of a product: variables of `a` first, then `b`.
    pub fn product(a: &RingModel, b: &RingModel) -> Arc<Self> {
        let mut vars = a.vars.clone();
        for v in &b.vars {
            let mut name = v.clone();
            while vars.contains(&name) {
                name.push('\'');
            }
            vars.push(name);
        }
        let mut caps = a.caps.clone();
        caps.extend(&b.caps);
        let mut integral = BTreeMap::new();
        for (ma, ca) in &a.integral {
            for (mb, cb) in &b.integral {
                let mut m = ma.clone();
                m.extend(mb);
                integral.insert(m, ca * cb);
            }
        }
        Self::new(vars, caps, a.total_cap + b.total_cap, integral).unwrap()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    /// Complex dimension of the modelled component.
    pub fn total_cap(&self) -> u32 {
        self.total_cap
    }

    pub fn integral(&self) -> &BTreeMap<Monomial, Rational> {
        &self.integral
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn admits(&self, m: &[u32]) -> bool {
        m.iter().zip(&self.caps).all(|(e, c)| e <= c) && m.iter().sum::<u32>() <= self.total_cap
    }
}

fn same_ring(a: &Arc<RingModel>, b: &Arc<RingModel>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::RingMismatch)
    }
}

/// A sparse element of `H^{ev}(component) ⊗ C[y^{±1}, (1+y)^{-1}]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    ring: Arc<RingModel>,
    terms: BTreeMap<Monomial, YCoeff>,
}

impl TruncSeries {
    pub fn zero(ring: &Arc<RingModel>) -> Self {
        TruncSeries {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<RingModel>) -> Self {
        Self::constant(ring, YCoeff::one())
    }

    pub fn constant(ring: &Arc<RingModel>, c: YCoeff) -> Self {
        Self::monomial(ring, vec![0; ring.nvars()], c)
    }

    /// `c · x^m`; vanishes if the monomial exceeds the caps.
    pub fn monomial(ring: &Arc<RingModel>, m: Monomial, c: YCoeff) -> Self {
        assert_eq!(m.len(), ring.nvars(), "monomial arity mismatch");
        let mut s = Self::zero(ring);
        if ring.admits(&m) && !c.is_zero() {
            s.terms.insert(m, c);
        }
        s
    }

    /// The generator with index `i`.
    pub fn var(ring: &Arc<RingModel>, i: usize) -> Self {
        let mut m = vec![0; ring.nvars()];
        m[i] = 1;
        Self::monomial(ring, m, YCoeff::one())
    }

    /// Builds from raw terms, dropping monomials outside the ring.
    pub fn from_terms(ring: &Arc<RingModel>, terms: impl IntoIterator<Item = (Monomial, YCoeff)>) -> Result<Self> {
        let mut s = Self::zero(ring);
        for (m, c) in terms {
            if m.len() != ring.nvars() {
                return Err(Error::InvalidRing(format!(
                    "monomial {m:?} has wrong arity for {} variables",
                    ring.nvars()
                )));
            }
            s.add_term(m, c);
        }
        Ok(s)
    }

    fn add_term(&mut self, m: Monomial, c: YCoeff) {
        if c.is_zero() || !self.ring.admits(&m) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                let sum = &*slot + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *slot = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn ring(&self) -> &Arc<RingModel> {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, YCoeff> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &[u32]) -> YCoeff {
        self.terms.get(m).cloned().unwrap_or_else(YCoeff::zero)
    }

    pub fn constant_term(&self) -> YCoeff {
        self.coeff(&vec![0; self.ring.nvars()])
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_ring(&self.ring, &other.ring)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        same_ring(&self.ring, &other.ring)?;
        let mut out = Self::zero(&self.ring);
        let mut m = vec![0u32; self.ring.nvars()];
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                for (i, slot) in m.iter_mut().enumerate() {
                    *slot = ma[i] + mb[i];
                }
                if self.ring.admits(&m) {
                    out.add_term(m.clone(), ca * cb);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &YCoeff) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        self.map_coeffs(|v| v * c)
    }

    pub fn scale_cyclotomic(&self, c: &Cyclotomic) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        self.map_coeffs(|v| v.scale(c))
    }

    pub fn map_coeffs(&self, f: impl Fn(&YCoeff) -> YCoeff) -> Self {
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Multiplies the homogeneous part of degree `j` by `f(j)`.
    pub fn scale_by_degree(&self, f: impl Fn(u32) -> YCoeff) -> Self {
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * &f(m.iter().sum()));
        }
        out
    }

    /// The homogeneous part of complex degree `j`.
    pub fn homogeneous(&self, j: u32) -> Self {
        TruncSeries {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.iter().sum::<u32>() == j)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// `self^e`; negative exponents go through [`TruncSeries::inverse`].
    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Inverse of `c + n` with `c` a unit and `n` nilpotent:
    /// `c^{-1} Σ_k (-n/c)^k`, which terminates at the total-degree cap.
    pub fn inverse(&self) -> Result<Self> {
        let c = self.constant_term();
        let c_inv = c.try_invert().map_err(|_| Error::NonUnitConstant(c.to_string()))?;
        let one = Self::one(&self.ring);
        // q = -(s/c - 1) is nilpotent
        let q = one.sub(&self.scale(&c_inv))?;
        let mut acc = one.clone();
        let mut power = one;
        for _ in 0..self.ring.total_cap() {
            power = power.mul(&q)?;
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power)?;
        }
        Ok(acc.scale(&c_inv))
    }

    /// The evaluation pairing against the fundamental class.
    pub fn integrate(&self) -> YCoeff {
        let mut acc = YCoeff::zero();
        for (m, w) in &self.ring.integral {
            if let Some(c) = self.terms.get(m) {
                acc = &acc + &c.scale(&Cyclotomic::from_rational(w.clone()));
            }
        }
        acc
    }

    /// Substitutes `y = v` in every coefficient.
    pub fn specialize_y(&self, v: &Cyclotomic) -> Result<Self> {
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), YCoeff::constant(c.specialize(v)?));
        }
        Ok(out)
    }

    /// Pulls back along a projection: variable `i` becomes variable
    /// `offset + i` of `target`.
    pub fn embed(&self, target: &Arc<RingModel>, offset: usize) -> Result<Self> {
        if offset + self.ring.nvars() > target.nvars() {
            return Err(Error::RingMismatch);
        }
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut tm = vec![0; target.nvars()];
            tm[offset..offset + m.len()].copy_from_slice(m);
            out.add_term(tm, c.clone());
        }
        Ok(out)
    }

    /// Integration along the fibre of `base × fiber → base`, where `self`
    /// lives in `RingModel::product(base, fiber)`.
    pub fn push_forward(&self, base: &Arc<RingModel>, fiber: &RingModel) -> Result<Self> {
        same_ring(&self.ring, &RingModel::product(base, fiber))?;
        let nb = base.nvars();
        let mut out = Self::zero(base);
        for (m, c) in &self.terms {
            if let Some(w) = fiber.integral.get(&m[nb..]) {
                if !w.is_zero() {
                    out.add_term(m[..nb].to_vec(), c.scale(&Cyclotomic::from_rational(w.clone())));
                }
            }
        }
        Ok(out)
    }

    /// Exterior product `a × b` in the product ring.
    pub fn cross(a: &Self, b: &Self) -> Result<Self> {
        let ring = RingModel::product(&a.ring, &b.ring);
        a.embed(&ring, 0)?.mul(&b.embed(&ring, a.ring.nvars())?)
    }
}

impl std::fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mono: Vec<String> = m
                    .iter()
                    .zip(&self.ring.vars)
                    .filter(|(e, _)| **e > 0)
                    .map(|(e, v)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
                    .collect();
                if mono.is_empty() {
                    format!("[{c}]")
                } else {
                    format!("[{c}]*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::{int, rat};
    use proptest::prelude::*;

    fn x(ring: &Arc<RingModel>) -> TruncSeries {
        TruncSeries::var(ring, 0)
    }

    fn c(ring: &Arc<RingModel>, n: i64) -> TruncSeries {
        TruncSeries::constant(ring, YCoeff::int(n))
    }

    #[test]
    fn truncation_in_p1() {
        let p1 = RingModel::projective(1, "x");
        let a = c(&p1, 1).add(&x(&p1)).unwrap();
        let sq = a.mul(&a).unwrap();
        assert_eq!(sq, c(&p1, 1).add(&x(&p1).scale(&YCoeff::int(2))).unwrap());
    }

    #[test]
    fn product_of_projective_lines() {
        let p1 = RingModel::projective(1, "x");
        let ring = RingModel::product(&p1, &RingModel::projective(1, "z"));
        let (xv, zv) = (TruncSeries::var(&ring, 0), TruncSeries::var(&ring, 1));
        let one = TruncSeries::one(&ring);
        let prod = one.add(&xv).unwrap().mul(&one.add(&zv).unwrap()).unwrap();
        let expected = TruncSeries::from_terms(
            &ring,
            [
                (vec![0, 0], YCoeff::one()),
                (vec![1, 0], YCoeff::one()),
                (vec![0, 1], YCoeff::one()),
                (vec![1, 1], YCoeff::one()),
            ],
        )
        .unwrap();
        assert_eq!(prod, expected);
        assert_eq!(prod.integrate(), YCoeff::one());
        // clashing names get primed
        let sq = RingModel::product(&p1, &p1);
        assert_eq!(sq.vars(), &["x".to_string(), "x'".to_string()]);
    }

    #[test]
    fn scaling_and_integration() {
        let p1 = RingModel::projective(1, "x");
        let minus_y = YCoeff::neg_y_pow(1);
        assert_eq!(TruncSeries::one(&p1).scale(&minus_y).constant_term(), minus_y);
        assert_eq!(x(&p1).integrate(), YCoeff::one());
        assert!(c(&RingModel::projective(2, "x"), 1).integrate().is_zero());
    }

    #[test]
    fn ring_mismatch_is_reported() {
        let a = TruncSeries::one(&RingModel::projective(1, "x"));
        let b = TruncSeries::one(&RingModel::projective(2, "x"));
        assert_eq!(a.mul(&b), Err(Error::RingMismatch));
    }

    #[test]
    fn inverse_of_unit_series() {
        let p3 = RingModel::projective(3, "x");
        let s = TruncSeries::constant(&p3, YCoeff::one_plus_y())
            .add(&x(&p3).scale(&YCoeff::rational(rat(1, 2))))
            .unwrap();
        let inv = s.inverse().unwrap();
        assert_eq!(inv.mul(&s).unwrap(), TruncSeries::one(&p3));
        assert!(matches!(x(&p3).inverse(), Err(Error::NonUnitConstant(_))));
    }

    #[test]
    fn ring_validation() {
        let bad = RingModel::new(vec!["x".into()], vec![2], 2, BTreeMap::from([(vec![1], int(1))]));
        assert!(matches!(bad, Err(Error::InvalidRing(_))));
    }

    #[test]
    fn fibre_integration() {
        let base = RingModel::projective(1, "x");
        let fiber = RingModel::projective(1, "z");
        let ring = RingModel::product(&base, &fiber);
        let s = TruncSeries::from_terms(
            &ring,
            [
                (vec![0, 0], YCoeff::int(7)),
                (vec![0, 1], YCoeff::int(2)),
                (vec![1, 1], YCoeff::int(3)),
            ],
        )
        .unwrap();
        let pushed = s.push_forward(&base, &fiber).unwrap();
        let expected = c(&base, 2).add(&x(&base).scale(&YCoeff::int(3))).unwrap();
        assert_eq!(pushed, expected);
    }

    proptest! {
        #[test]
        fn integration_is_linear(a in prop::collection::vec(-4i64..5, 3), b in prop::collection::vec(-4i64..5, 3), k in -3i64..4) {
            let p2 = RingModel::projective(2, "x");
            let mk = |cs: &[i64]| TruncSeries::from_terms(
                &p2, cs.iter().enumerate().map(|(i, c)| (vec![i as u32], YCoeff::int(*c)))).unwrap();
            let (sa, sb) = (mk(&a), mk(&b));
            let lhs = sa.scale(&YCoeff::int(k)).add(&sb).unwrap().integrate();
            let rhs = &sa.integrate().scale(&Cyclotomic::from_int(k)) + &sb.integrate();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
