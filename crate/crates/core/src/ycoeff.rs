//! The coefficient ring C[y, y^{-1}, (1+y)^{-1}] with cyclotomic scalars.
//!
//! A value is a Laurent polynomial in `y` divided by `(1+y)^e`. Canonical form
//! keeps `e` minimal: when `e > 0` the numerator does not vanish at `y = -1`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::cyclo::{Cyclotomic, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YCoeff {
    num: BTreeMap<i32, Cyclotomic>,
    denom_power: u32,
}

impl YCoeff {
    pub fn zero() -> Self {
        YCoeff {
            num: BTreeMap::new(),
            denom_power: 0,
        }
    }

    pub fn one() -> Self {
        Self::constant(Cyclotomic::one())
    }

    pub fn constant(c: Cyclotomic) -> Self {
        Self::monomial(0, c)
    }

    pub fn rational(r: Rational) -> Self {
        Self::constant(Cyclotomic::from_rational(r))
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Cyclotomic::from_int(n))
    }

    /// `c * y^k`.
    pub fn monomial(k: i32, c: Cyclotomic) -> Self {
        let mut num = BTreeMap::new();
        if !c.is_zero() {
            num.insert(k, c);
        }
        YCoeff { num, denom_power: 0 }
    }

    pub fn y() -> Self {
        Self::monomial(1, Cyclotomic::one())
    }

    /// `(-y)^p`, for any integer `p`.
    pub fn neg_y_pow(p: i32) -> Self {
        let sign = if p.rem_euclid(2) == 0 { 1 } else { -1 };
        Self::monomial(p, Cyclotomic::from_int(sign))
    }

    pub fn one_plus_y() -> Self {
        Self::from_terms([(0, Cyclotomic::one()), (1, Cyclotomic::one())], 0)
    }

    /// `(1+y)^k` for any integer `k`.
    pub fn one_plus_y_pow(k: i32) -> Self {
        if k >= 0 {
            let mut acc = Self::one();
            for _ in 0..k {
                acc = &acc * &Self::one_plus_y();
            }
            acc
        } else {
            YCoeff {
                num: BTreeMap::from([(0, Cyclotomic::one())]),
                denom_power: k.unsigned_abs(),
            }
        }
    }

    /// `Σ c_k y^k / (1+y)^e`, canonicalized.
    pub fn from_terms(terms: impl IntoIterator<Item = (i32, Cyclotomic)>, denom_power: u32) -> Self {
        let mut num: BTreeMap<i32, Cyclotomic> = BTreeMap::new();
        for (k, c) in terms {
            let slot = num.entry(k).or_insert_with(Cyclotomic::zero);
            *slot = &*slot + &c;
        }
        let mut out = YCoeff { num, denom_power };
        out.canonicalize();
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Cyclotomic)> {
        self.num.iter().map(|(k, c)| (*k, c))
    }

    pub fn denom_power(&self) -> u32 {
        self.denom_power
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.denom_power == 0 && self.num.len() == 1 && self.num.get(&0).is_some_and(|c| c.is_one())
    }

    /// The constant value, if the element does not depend on `y`.
    pub fn as_constant(&self) -> Option<Cyclotomic> {
        if self.is_zero() {
            return Some(Cyclotomic::zero());
        }
        (self.denom_power == 0 && self.num.len() == 1)
            .then(|| self.num.get(&0).cloned())
            .flatten()
    }

    /// Coefficient of `y^k` in the numerator.
    pub fn numerator_coeff(&self, k: i32) -> Cyclotomic {
        self.num.get(&k).cloned().unwrap_or_else(Cyclotomic::zero)
    }

    fn canonicalize(&mut self) {
        self.num.retain(|_, c| !c.is_zero());
        if self.num.is_empty() {
            self.denom_power = 0;
            return;
        }
        while self.denom_power > 0 && eval_at_minus_one(&self.num).is_zero() {
            self.num = divide_exact_by_one_plus_y(&self.num);
            self.denom_power -= 1;
        }
    }

    fn with_denominator(&self, e: u32) -> BTreeMap<i32, Cyclotomic> {
        debug_assert!(e >= self.denom_power);
        let mut num = self.num.clone();
        for _ in self.denom_power..e {
            num = mul_by_one_plus_y(&num);
        }
        num
    }

    fn add_impl(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let e = self.denom_power.max(other.denom_power);
        let mut num = self.with_denominator(e);
        for (k, c) in other.with_denominator(e) {
            let slot = num.entry(k).or_insert_with(Cyclotomic::zero);
            *slot = &*slot + &c;
        }
        let mut out = YCoeff { num, denom_power: e };
        out.canonicalize();
        out
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut num: BTreeMap<i32, Cyclotomic> = BTreeMap::new();
        for (i, a) in &self.num {
            for (j, b) in &other.num {
                let p = a * b;
                let slot = num.entry(i + j).or_insert_with(Cyclotomic::zero);
                *slot = &*slot + &p;
            }
        }
        let mut out = YCoeff {
            num,
            denom_power: self.denom_power + other.denom_power,
        };
        out.canonicalize();
        out
    }

    /// Multiplies by a scalar.
    pub fn scale(&self, c: &Cyclotomic) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        YCoeff {
            num: self.num.iter().map(|(k, v)| (*k, v * c)).collect(),
            denom_power: self.denom_power,
        }
    }

    pub fn divide_by_1py(&self) -> Self {
        let mut out = YCoeff {
            num: self.num.clone(),
            denom_power: self.denom_power + 1,
        };
        out.canonicalize();
        out
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.try_invert()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Inverse in the ring; only `c · y^a · (1+y)^b` are units.
    pub fn try_invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let low = *self.num.keys().next().unwrap();
        // numerator = y^low * q(y) with q(0) != 0
        let mut q: BTreeMap<i32, Cyclotomic> = self.num.iter().map(|(k, c)| (k - low, c.clone())).collect();
        let mut b = 0i64;
        while q.len() > 1 && eval_at_minus_one(&q).is_zero() {
            q = divide_exact_by_one_plus_y(&q);
            b += 1;
        }
        if q.len() != 1 || !q.contains_key(&0) {
            return Err(Error::NonUnitConstant(self.to_string()));
        }
        let c_inv = q[&0].invert()?;
        let shift = self.denom_power as i64 - b;
        let mut out = YCoeff::monomial(-low, c_inv);
        out = &out * &YCoeff::one_plus_y_pow(shift as i32);
        Ok(out)
    }

    /// Exact evaluation at `y = v`.
    pub fn specialize(&self, v: &Cyclotomic) -> Result<Cyclotomic> {
        let minus_one = Cyclotomic::from_int(-1);
        if self.denom_power > 0 && *v == minus_one {
            return Err(Error::PoleAtMinusOne(self.denom_power));
        }
        if v.is_zero() && self.num.keys().any(|k| *k < 0) {
            return Err(Error::PoleAtZero);
        }
        let mut acc = Cyclotomic::zero();
        for (k, c) in &self.num {
            acc = &acc + &(c * &v.pow(*k as i64)?);
        }
        if self.denom_power > 0 {
            let d = (Cyclotomic::one() + v).pow(self.denom_power as i64)?;
            acc = acc.div(&d)?;
        }
        Ok(acc)
    }

    pub fn specialize_rational(&self, v: Rational) -> Result<Cyclotomic> {
        self.specialize(&Cyclotomic::from_rational(v))
    }

    /// Applies complex conjugation to every scalar.
    pub fn conjugate(&self) -> Self {
        YCoeff {
            num: self.num.iter().map(|(k, c)| (*k, c.conjugate())).collect(),
            denom_power: self.denom_power,
        }
    }
}

fn eval_at_minus_one(num: &BTreeMap<i32, Cyclotomic>) -> Cyclotomic {
    let mut acc = Cyclotomic::zero();
    for (k, c) in num {
        if k.rem_euclid(2) == 0 {
            acc = &acc + c;
        } else {
            acc = &acc - c;
        }
    }
    acc
}

fn mul_by_one_plus_y(num: &BTreeMap<i32, Cyclotomic>) -> BTreeMap<i32, Cyclotomic> {
    let mut out: BTreeMap<i32, Cyclotomic> = num.clone();
    for (k, c) in num {
        let slot = out.entry(k + 1).or_insert_with(Cyclotomic::zero);
        *slot = &*slot + c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Synthetic division by `(1+y)`; the caller guarantees exactness.
fn divide_exact_by_one_plus_y(num: &BTreeMap<i32, Cyclotomic>) -> BTreeMap<i32, Cyclotomic> {
    let (Some(&lo), Some(&hi)) = (num.keys().next(), num.keys().next_back()) else {
        return BTreeMap::new();
    };
    // walk from the top: s_{k-1} = q_k - s_k
    let mut out = BTreeMap::new();
    let mut carry = Cyclotomic::zero();
    for k in (lo + 1..=hi).rev() {
        let q = num.get(&k).cloned().unwrap_or_else(Cyclotomic::zero);
        let s = &q - &carry;
        if !s.is_zero() {
            out.insert(k - 1, s.clone());
        }
        carry = s;
    }
    out
}

impl From<Cyclotomic> for YCoeff {
    fn from(c: Cyclotomic) -> Self {
        Self::constant(c)
    }
}

impl From<Rational> for YCoeff {
    fn from(r: Rational) -> Self {
        Self::rational(r)
    }
}

impl Add<&YCoeff> for &YCoeff {
    type Output = YCoeff;
    fn add(self, rhs: &YCoeff) -> YCoeff {
        self.add_impl(rhs)
    }
}

impl Sub<&YCoeff> for &YCoeff {
    type Output = YCoeff;
    fn sub(self, rhs: &YCoeff) -> YCoeff {
        self.add_impl(&-rhs)
    }
}

impl Mul<&YCoeff> for &YCoeff {
    type Output = YCoeff;
    fn mul(self, rhs: &YCoeff) -> YCoeff {
        self.mul_impl(rhs)
    }
}

impl Neg for &YCoeff {
    type Output = YCoeff;
    fn neg(self) -> YCoeff {
        YCoeff {
            num: self.num.iter().map(|(k, c)| (*k, -c)).collect(),
            denom_power: self.denom_power,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<YCoeff> for YCoeff {
            type Output = YCoeff;
            fn $m(self, rhs: YCoeff) -> YCoeff {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&YCoeff> for YCoeff {
            type Output = YCoeff;
            fn $m(self, rhs: &YCoeff) -> YCoeff {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for YCoeff {
    type Output = YCoeff;
    fn neg(self) -> YCoeff {
        -&self
    }
}

impl fmt::Display for YCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .num
            .iter()
            .map(|(k, c)| {
                let c = if c.is_rational() {
                    c.to_string()
                } else {
                    format!("({c})")
                };
                match k {
                    0 => c,
                    1 => format!("{c}*y"),
                    _ => format!("{c}*y^{k}"),
                }
            })
            .collect();
        let body = parts.join(" + ").replace("+ -", "- ");
        if self.denom_power == 0 {
            write!(f, "{body}")
        } else {
            write!(f, "({body})/(1+y)^{}", self.denom_power)
        }
    }
}

/// Builds a polynomial in `y` from rational coefficients, lowest degree first.
pub fn y_poly(coeffs: &[Rational]) -> YCoeff {
    YCoeff::from_terms(
        coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as i32, Cyclotomic::from_rational(c.clone()))),
        0,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::{int, rat};
    use proptest::prelude::*;

    fn p(cs: &[i64]) -> YCoeff {
        y_poly(&cs.iter().map(|&c| int(c)).collect::<Vec<_>>())
    }

    #[test]
    fn exact_division_cancels() {
        let q = p(&[1, 0, -1]).divide_by_1py();
        assert_eq!(q, p(&[1, -1]));
        assert_eq!(q.denom_power(), 0);
    }

    #[test]
    fn products_and_sums() {
        let minus_y = YCoeff::neg_y_pow(1);
        assert_eq!(&minus_y * &minus_y, p(&[0, 0, 1]));
        let a = YCoeff::one().divide_by_1py();
        let b = YCoeff::y().divide_by_1py();
        let s = &a + &b;
        assert!(s.is_one());
        assert_eq!(s.denom_power(), 0);
    }

    #[test]
    fn specialization_examples() {
        assert_eq!(
            p(&[1, -1]).specialize_rational(int(-1)).unwrap(),
            Cyclotomic::from_int(2)
        );
        assert_eq!(
            YCoeff::one().divide_by_1py().specialize_rational(int(-1)),
            Err(Error::PoleAtMinusOne(1))
        );
        assert_eq!(p(&[1, -1, 1]).specialize_rational(int(1)).unwrap(), Cyclotomic::one());
        let inv_y = YCoeff::monomial(-1, Cyclotomic::one());
        assert_eq!(inv_y.specialize_rational(int(0)), Err(Error::PoleAtZero));
        assert_eq!(inv_y.specialize_rational(rat(1, 2)).unwrap(), Cyclotomic::from_int(2));
    }

    #[test]
    fn unit_inversion() {
        let u =
            &(&YCoeff::one_plus_y_pow(2) * &YCoeff::monomial(3, Cyclotomic::from_int(5))) * &YCoeff::one_plus_y_pow(-5);
        assert!((&u * &u.try_invert().unwrap()).is_one());
        assert!(matches!(p(&[1, 0, 1]).try_invert(), Err(Error::NonUnitConstant(_))));
        assert_eq!(YCoeff::zero().try_invert(), Err(Error::DivisionByZero));
    }

    fn small_ycoeff() -> impl Strategy<Value = YCoeff> {
        (prop::collection::vec(-3i64..4, 1..4), -1i32..2, 0u32..3).prop_map(|(cs, shift, e)| {
            let terms = cs
                .into_iter()
                .enumerate()
                .map(|(k, c)| (k as i32 + shift, Cyclotomic::from_int(c)));
            YCoeff::from_terms(terms, e)
        })
    }

    proptest! {
        #[test]
        fn canonicalization_is_idempotent(a in small_ycoeff()) {
            let again = YCoeff::from_terms(a.terms().map(|(k, c)| (k, c.clone())), a.denom_power());
            prop_assert_eq!(again, a);
        }

        #[test]
        fn ring_axioms(a in small_ycoeff(), b in small_ycoeff(), c in small_ycoeff()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn specialization_is_multiplicative(a in small_ycoeff(), b in small_ycoeff(), v in -3i64..4) {
            let v = Cyclotomic::from_int(v);
            if let (Ok(x), Ok(y)) = (a.specialize(&v), b.specialize(&v)) {
                prop_assert_eq!((&a * &b).specialize(&v).unwrap(), &x * &y);
            }
        }
    }
}
