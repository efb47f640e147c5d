//! Exact arithmetic in the cyclotomic fields Q(ζ_N), plus rational angles.
//!
//! Elements are stored in the power basis 1, ζ, …, ζ^{φ(N)-1} after reduction
//! modulo the N-th cyclotomic polynomial, so equality is coefficient-wise.
//! Values from different conductors combine by lifting both operands into
//! Q(ζ_lcm); rationals live in conductor 1 and act as scalars.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for the rational `n / d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"` or `"p/q"` into a rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => BigInt::from_str(s).ok().map(Rational::from_integer),
    }
}

pub(crate) fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

// ---------------------------------------------------------------------------
// Angles

/// A fraction of a full turn, `0 <= t < 1`; the eigenvalue is `e^{2πi t}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Angle {
    num: u64,
    den: u64,
}

impl Angle {
    pub const ZERO: Angle = Angle { num: 0, den: 1 };

    /// `num / den` reduced modulo 1.
    pub fn new(num: i64, den: u64) -> Result<Angle> {
        if den == 0 {
            return Err(Error::InvalidAngle(format!("{num}/0")));
        }
        let d = den as i128;
        let n = (num as i128).rem_euclid(d);
        let g = n.gcd(&d).max(1);
        Ok(Angle {
            num: (n / g) as u64,
            den: (d / g) as u64,
        })
    }

    pub fn from_turns(t: &Rational) -> Result<Angle> {
        let num = t.numer().to_i64().ok_or_else(|| Error::InvalidAngle(fmt_rational(t)))?;
        let den = t.denom().to_u64().ok_or_else(|| Error::InvalidAngle(fmt_rational(t)))?;
        Angle::new(num, den)
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn turns(&self) -> Rational {
        rat(self.num as i64, self.den as i64)
    }

    /// `k * self` modulo 1.
    pub fn scale(self, k: i64) -> Angle {
        let n = (self.num as i128 * k as i128).rem_euclid(self.den as i128);
        Angle::new(n as i64, self.den).expect("nonzero denominator")
    }
}

impl Ord for Angle {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Angle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::Add for Angle {
    type Output = Angle;

    fn add(self, other: Angle) -> Angle {
        let den = self.den.lcm(&other.den);
        let n = self.num * (den / self.den) + other.num * (den / other.den);
        Angle::new(n as i64, den).expect("nonzero denominator")
    }
}

impl std::ops::Neg for Angle {
    type Output = Angle;

    fn neg(self) -> Angle {
        Angle::new(-(self.num as i64), self.den).expect("nonzero denominator")
    }
}

impl std::ops::Sub for Angle {
    type Output = Angle;

    fn sub(self, other: Angle) -> Angle {
        self + -other
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Angle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Angle> {
        let bad = || Error::InvalidAngle(s.to_string());
        let r = parse_rational(s).ok_or_else(bad)?;
        if r.is_negative() || r >= Rational::one() {
            return Err(bad());
        }
        Angle::from_turns(&r)
    }
}

// ---------------------------------------------------------------------------
// Field data

struct Field {
    phi: usize,
    /// Φ_N, low to high, monic.
    modulus: Vec<Rational>,
    /// ζ^k in the power basis for k in 0..N.
    powers: Vec<Vec<Rational>>,
    /// The same table as machine integers; Φ_N is monic over Z.
    ipowers: Vec<Vec<i64>>,
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn cyclotomic_polynomial(n: u32) -> Vec<Rational> {
    // x^n - 1 divided by Φ_d for each proper divisor d
    let mut p = vec![Rational::zero(); n as usize + 1];
    p[0] = -Rational::one();
    p[n as usize] = Rational::one();
    for d in divisors(n) {
        if d < n {
            let (q, r) = poly::divrem(&p, &field(d).modulus);
            debug_assert!(r.is_empty());
            p = q;
        }
    }
    p
}

fn build_field(n: u32) -> Field {
    let modulus = cyclotomic_polynomial(n);
    let phi = modulus.len() - 1;
    let mut powers = Vec::with_capacity(n as usize);
    let mut cur = vec![Rational::zero(); phi];
    cur[0] = Rational::one();
    for _ in 0..n {
        powers.push(cur.clone());
        // multiply by ζ and reduce the overflow using the monic modulus
        let top = cur[phi - 1].clone();
        let mut next = vec![Rational::zero(); phi];
        for i in (1..phi).rev() {
            next[i] = cur[i - 1].clone();
        }
        if !top.is_zero() {
            for (i, m) in modulus.iter().take(phi).enumerate() {
                next[i] -= &top * m;
            }
        }
        cur = next;
    }
    let ipowers = powers
        .iter()
        .map(|v| {
            v.iter()
                .map(|r| r.to_integer().to_i64().expect("small cyclotomic table"))
                .collect()
        })
        .collect();
    Field {
        phi,
        modulus,
        powers,
        ipowers,
    }
}

fn field(n: u32) -> Arc<Field> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Field>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(f) = cache.read().unwrap().get(&n) {
        return f.clone();
    }
    let built = Arc::new(build_field(n));
    cache.write().unwrap().entry(n).or_insert(built).clone()
}

/// Euler's totient.
pub fn totient(n: u32) -> usize {
    field(n).phi
}

/// Dense univariate polynomials over Q, low to high, trimmed.
mod poly {
    use super::Rational;
    use num_traits::Zero;

    pub fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
        p
    }

    pub fn divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        let b = trim(b.to_vec());
        let mut r = trim(a.to_vec());
        assert!(!b.is_empty(), "polynomial division by zero");
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let lead = b.last().unwrap().clone();
        let mut q = vec![Rational::zero(); r.len() - b.len() + 1];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = r.last().unwrap() / &lead;
            for (i, bc) in b.iter().enumerate() {
                r[i + shift] -= &c * bc;
            }
            q[shift] = c;
            r = trim(r);
        }
        (trim(q), r)
    }

    pub fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(out)
    }

    pub fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let n = a.len().max(b.len());
        let mut out = vec![Rational::zero(); n];
        for (i, x) in a.iter().enumerate() {
            out[i] += x;
        }
        for (i, x) in b.iter().enumerate() {
            out[i] -= x;
        }
        trim(out)
    }
}

// ---------------------------------------------------------------------------
// Cyclotomic numbers

/// An exact element of Q(ζ_N) in canonical power-basis form.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    conductor: u32,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![r],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    /// Reduces `Σ coeffs[k] ζ_N^k` (any length) to canonical form.
    pub fn from_coeffs(conductor: u32, coeffs: &[Rational]) -> Self {
        assert!(conductor > 0, "conductor must be positive");
        let f = field(conductor);
        let mut out = vec![Rational::zero(); f.phi];
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            accumulate(&mut out, c, &f.powers[k % conductor as usize]);
        }
        Cyclotomic { conductor, coeffs: out }
    }

    /// Builds from an already canonical coefficient vector.
    pub fn from_canonical(conductor: u32, coeffs: Vec<Rational>) -> Result<Self> {
        if conductor == 0 || coeffs.len() != totient(conductor) {
            return Err(Error::InvalidDatum(format!(
                "conductor {conductor} needs {} coefficients, got {}",
                if conductor == 0 { 0 } else { totient(conductor) },
                coeffs.len()
            )));
        }
        Ok(Cyclotomic { conductor, coeffs })
    }

    /// ζ_N^k.
    pub fn zeta(conductor: u32, k: i64) -> Self {
        let f = field(conductor);
        let idx = k.rem_euclid(conductor as i64) as usize;
        Cyclotomic {
            conductor,
            coeffs: f.powers[idx].clone(),
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    pub fn is_one(&self) -> bool {
        self.is_rational() && self.coeffs[0].is_one()
    }

    /// Re-expresses the value in Q(ζ_m); requires `conductor | m`.
    pub fn lift(&self, m: u32) -> Result<Self> {
        if !m.is_multiple_of(self.conductor) {
            return Err(Error::ConductorMismatch {
                den: self.conductor as u64,
                conductor: m,
            });
        }
        if m == self.conductor {
            return Ok(self.clone());
        }
        let f = field(m);
        let step = (m / self.conductor) as usize;
        let mut out = vec![Rational::zero(); f.phi];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                accumulate(&mut out, c, &f.powers[(k * step) % m as usize]);
            }
        }
        Ok(Cyclotomic {
            conductor: m,
            coeffs: out,
        })
    }

    fn scale(&self, r: &Rational) -> Self {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Brings two operands into a common field.
    fn aligned(&self, other: &Self) -> (Self, Self) {
        let m = self.conductor.lcm(&other.conductor);
        (self.lift(m).unwrap(), other.lift(m).unwrap())
    }

    fn add_impl(&self, other: &Self) -> Self {
        if self.conductor == other.conductor {
            let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
            return Cyclotomic {
                conductor: self.conductor,
                coeffs,
            };
        }
        if let Some(r) = other.as_rational() {
            let mut out = self.clone();
            out.coeffs[0] += r;
            return out;
        }
        if let Some(r) = self.as_rational() {
            let mut out = other.clone();
            out.coeffs[0] += r;
            return out;
        }
        let (a, b) = self.aligned(other);
        a.add_impl(&b)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if let Some(r) = other.as_rational() {
            return self.scale(&r);
        }
        if let Some(r) = self.as_rational() {
            return other.scale(&r);
        }
        if self.conductor != other.conductor {
            let (a, b) = self.aligned(other);
            return a.mul_impl(&b);
        }
        let n = self.conductor;
        let f = field(n);
        let (na, da) = integral_form(&self.coeffs);
        let (nb, db) = integral_form(&other.coeffs);
        let nums = small_product(&na, &nb, &f).unwrap_or_else(|| big_product(&na, &nb, &f));
        let den = da * db;
        Cyclotomic {
            conductor: n,
            coeffs: nums.into_iter().map(|x| Rational::new(x, den.clone())).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Φ_N.
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(r.recip()));
        }
        let f = field(self.conductor);
        let mut r0 = f.modulus.clone();
        let mut r1 = poly::trim(self.coeffs.clone());
        let mut s0: Vec<Rational> = Vec::new();
        let mut s1 = vec![Rational::one()];
        while !r1.is_empty() {
            let (q, r) = poly::divrem(&r0, &r1);
            let s = poly::sub(&s0, &poly::mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // Φ_N is irreducible, so the gcd is a nonzero constant
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].recip();
        let scaled: Vec<Rational> = s0.iter().map(|x| x * &c).collect();
        Ok(Self::from_coeffs(self.conductor, &scaled))
    }

    /// Complex conjugation, ζ ↦ ζ^{-1}.
    pub fn conjugate(&self) -> Self {
        let n = self.conductor as usize;
        let f = field(self.conductor);
        let mut out = vec![Rational::zero(); f.phi];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                accumulate(&mut out, c, &f.powers[(n - k % n) % n]);
            }
        }
        Cyclotomic {
            conductor: self.conductor,
            coeffs: out,
        }
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.invert()? } else { self.clone() };
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

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.invert()?)
    }

    /// Floating approximation of the embedding ζ_N ↦ e^{2πi/N}. Display only.
    pub fn embed_complex(&self) -> (f64, f64) {
        let n = self.conductor as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = c.to_f64().unwrap_or(f64::NAN);
            let a = std::f64::consts::TAU * k as f64 / n;
            re += v * a.cos();
            im += v * a.sin();
        }
        (re, im)
    }
}

/// Integer numerators over a common denominator.
fn integral_form(coeffs: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let nums = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
    (nums, den)
}

/// Product of integer power-basis vectors in `Z[ζ_N]`, in `i128` when
/// nothing overflows.
fn small_product(a: &[BigInt], b: &[BigInt], f: &Field) -> Option<Vec<BigInt>> {
    let a: Vec<i64> = a.iter().map(|x| x.to_i64()).collect::<Option<_>>()?;
    let b: Vec<i64> = b.iter().map(|x| x.to_i64()).collect::<Option<_>>()?;
    let phi = f.phi;
    let mut conv = vec![0i128; 2 * phi - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            conv[i + j] = conv[i + j].checked_add((x as i128).checked_mul(y as i128)?)?;
        }
    }
    let n = f.ipowers.len();
    let mut out: Vec<i128> = conv[..phi].to_vec();
    for (k, &c) in conv.iter().enumerate().skip(phi) {
        if c != 0 {
            for (o, &p) in out.iter_mut().zip(&f.ipowers[k % n]) {
                *o = o.checked_add(c.checked_mul(p as i128)?)?;
            }
        }
    }
    Some(out.into_iter().map(BigInt::from).collect())
}

fn big_product(a: &[BigInt], b: &[BigInt], f: &Field) -> Vec<BigInt> {
    let phi = f.phi;
    let mut conv = vec![BigInt::zero(); 2 * phi - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            conv[i + j] += x * y;
        }
    }
    let n = f.ipowers.len();
    let mut out: Vec<BigInt> = conv.drain(..phi).collect();
    for (k, c) in conv.iter().enumerate() {
        if !c.is_zero() {
            for (o, &p) in out.iter_mut().zip(&f.ipowers[(k + phi) % n]) {
                if p != 0 {
                    *o += c * p;
                }
            }
        }
    }
    out
}

fn accumulate(out: &mut [Rational], c: &Rational, v: &[Rational]) {
    for (o, x) in out.iter_mut().zip(v) {
        if !x.is_zero() {
            *o += c * x;
        }
    }
}

/// e^{2πi t} as an element of Q(ζ_N).
pub fn root_of_unity(t: Angle, conductor: u32) -> Result<Cyclotomic> {
    if conductor == 0 || !(conductor as u64).is_multiple_of(t.den) {
        return Err(Error::ConductorMismatch { den: t.den, conductor });
    }
    let k = t.num * (conductor as u64 / t.den);
    Ok(Cyclotomic::zeta(conductor, k as i64))
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        match (self.as_rational(), other.as_rational()) {
            (Some(a), Some(b)) => a == b,
            (Some(_), None) | (None, Some(_)) => false,
            (None, None) => {
                let (a, b) = self.aligned(other);
                a.coeffs == b.coeffs
            }
        }
    }
}

impl Eq for Cyclotomic {}

impl From<Rational> for Cyclotomic {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl From<i64> for Cyclotomic {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl Add<&Cyclotomic> for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.add_impl(rhs)
    }
}

impl Sub<&Cyclotomic> for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.add_impl(&-rhs)
    }
}

impl Mul<&Cyclotomic> for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.mul_impl(rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: &Cyclotomic) -> Cyclotomic {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{}", fmt_rational(&r));
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let zeta = match k {
                0 => String::new(),
                1 => format!("ζ{}", self.conductor),
                _ => format!("ζ{}^{}", self.conductor, k),
            };
            if k == 0 {
                write!(f, "{}", fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{zeta}")?;
            } else {
                write!(f, "{}*{zeta}", fmt_rational(&mag))?;
            }
        }
        Ok(())
    }
}
