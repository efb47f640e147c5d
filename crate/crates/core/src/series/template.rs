//! Power series defining the multiplicative characteristic classes, expanded
//! exactly about `α = 0`, and their composition with nilpotent arguments.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::One;

use super::TruncSeries;
use crate::cyclo::{int, root_of_unity, Angle, Cyclotomic, Rational};
use crate::error::{Error, Result};
use crate::ycoeff::YCoeff;

/// Which defining power series `f(α)` a class uses.
///
/// Angles are fractions of a turn: `UTheta(t)` is `1/(1 - e^{-α - 2πi t})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TemplateId {
    /// `1 + α`
    Chern,
    /// `α / (1 - e^{-α})`
    Todd,
    /// `α / tanh α`
    LClass,
    /// `α(1+y)/(1 - e^{-α(1+y)}) - αy`
    NormalizedTy,
    /// `α(1 + y e^{-α})/(1 - e^{-α})`
    UnnormalizedTy,
    /// `1/(1 - e^{-α - iθ})`
    UTheta(Angle),
    /// `(1 + y e^{-iθ - α(1+y)})/(1 - e^{-iθ - α(1+y)})`
    TyTheta(Angle),
    /// `(1 + y e^{-iθ - α})/(1 - e^{-iθ - α})`
    UnnormTyTheta(Angle),
    /// `e^α`
    Exp,
    /// `e^{(1+y)α}`
    ExpOnePlusY,
}

impl TemplateId {
    pub fn angle(&self) -> Option<Angle> {
        match self {
            TemplateId::UTheta(t) | TemplateId::TyTheta(t) | TemplateId::UnnormTyTheta(t) => Some(*t),
            _ => None,
        }
    }
}

type Uni = Vec<YCoeff>;

fn inv_factorial(k: usize) -> Rational {
    let f: BigInt = (1..=k as u64).map(BigInt::from).product();
    Rational::new(BigInt::one(), f)
}

fn uni_mul(a: &[YCoeff], b: &[YCoeff], order: usize) -> Uni {
    (0..=order)
        .map(|k| {
            (0..=k).fold(YCoeff::zero(), |acc, i| match (a.get(i), b.get(k - i)) {
                (Some(x), Some(y)) => &acc + &(x * y),
                _ => acc,
            })
        })
        .collect()
}

fn uni_inv(a: &[YCoeff], order: usize) -> Result<Uni> {
    let a0_inv = a[0]
        .try_invert()
        .map_err(|_| Error::NonUnitConstant(a[0].to_string()))?;
    let mut b: Uni = vec![a0_inv.clone()];
    for k in 1..=order {
        let mut s = YCoeff::zero();
        for i in 1..=k {
            if let Some(ai) = a.get(i) {
                s = &s + &(ai * &b[k - i]);
            }
        }
        b.push(-(&s * &a0_inv));
    }
    Ok(b)
}

fn rational_series(order: usize, f: impl Fn(usize) -> Rational) -> Uni {
    (0..=order).map(|k| YCoeff::rational(f(k))).collect()
}

fn alternating_inv_factorial(k: usize) -> Rational {
    let s = if k.is_multiple_of(2) { int(1) } else { int(-1) };
    s * inv_factorial(k)
}

fn todd(order: usize) -> Result<Uni> {
    // (1 - e^{-α})/α = Σ (-1)^k α^k/(k+1)!
    uni_inv(&rational_series(order, |k| -alternating_inv_factorial(k + 1)), order)
}

/// `1 - u e^{-α}` and `1 + y u e^{-α}` for `u = e^{-2πi t}`.
fn twisted_pair(t: Angle, order: usize) -> Result<(Uni, Uni)> {
    if t.is_zero() {
        return Err(Error::ThetaZero);
    }
    let u = root_of_unity(-t, t.den() as u32)?;
    let denom = (0..=order)
        .map(|k| {
            let mut c = YCoeff::constant(u.clone()).scale(&Cyclotomic::from_rational(-alternating_inv_factorial(k)));
            if k == 0 {
                c = &c + &YCoeff::one();
            }
            c
        })
        .collect();
    let numer = (0..=order)
        .map(|k| {
            let mut c = YCoeff::monomial(1, u.clone()).scale(&Cyclotomic::from_rational(alternating_inv_factorial(k)));
            if k == 0 {
                c = &c + &YCoeff::one();
            }
            c
        })
        .collect();
    Ok((denom, numer))
}

fn unnorm_ty_theta(t: Angle, order: usize) -> Result<Uni> {
    let (denom, numer) = twisted_pair(t, order)?;
    Ok(uni_mul(&numer, &uni_inv(&denom, order)?, order))
}

/// Substitutes `α ↦ (1+y)α`.
fn rescale(series: Uni) -> Uni {
    series
        .into_iter()
        .enumerate()
        .map(|(k, c)| &c * &YCoeff::one_plus_y_pow(k as i32))
        .collect()
}

fn compute(id: TemplateId, order: usize) -> Result<Uni> {
    Ok(match id {
        TemplateId::Chern => (0..=order)
            .map(|k| if k <= 1 { YCoeff::one() } else { YCoeff::zero() })
            .collect(),
        TemplateId::Todd => todd(order)?,
        TemplateId::LClass => {
            // α cosh α / sinh α
            let cosh = rational_series(order, |k| if k % 2 == 0 { inv_factorial(k) } else { int(0) });
            let sinhc = rational_series(order, |k| if k % 2 == 0 { inv_factorial(k + 1) } else { int(0) });
            uni_mul(&cosh, &uni_inv(&sinhc, order)?, order)
        }
        TemplateId::NormalizedTy => {
            let mut s = rescale(todd(order)?);
            if order >= 1 {
                s[1] = &s[1] - &YCoeff::y();
            }
            s
        }
        TemplateId::UnnormalizedTy => {
            let tail: Uni = (0..=order)
                .map(|k| {
                    let mut c = YCoeff::y().scale(&Cyclotomic::from_rational(alternating_inv_factorial(k)));
                    if k == 0 {
                        c = &c + &YCoeff::one();
                    }
                    c
                })
                .collect();
            uni_mul(&todd(order)?, &tail, order)
        }
        TemplateId::UTheta(t) => uni_inv(&twisted_pair(t, order)?.0, order)?,
        TemplateId::UnnormTyTheta(t) => unnorm_ty_theta(t, order)?,
        TemplateId::TyTheta(t) => rescale(unnorm_ty_theta(t, order)?),
        TemplateId::Exp => rational_series(order, inv_factorial),
        TemplateId::ExpOnePlusY => rescale(rational_series(order, inv_factorial)),
    })
}

/// Exact Taylor coefficients `[f_0, …, f_order]` of a template, memoized.
pub fn template_coefficients(id: TemplateId, order: usize) -> Result<Arc<Vec<YCoeff>>> {
    type Cache = RwLock<HashMap<(TemplateId, usize), Arc<Vec<YCoeff>>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.read().unwrap().get(&(id, order)) {
        return Ok(v.clone());
    }
    let computed = Arc::new(compute(id, order)?);
    Ok(cache.write().unwrap().entry((id, order)).or_insert(computed).clone())
}

/// `f(arg)` in the truncated ring of `arg`.
pub fn compose_template(id: TemplateId, arg: &TruncSeries) -> Result<TruncSeries> {
    if !arg.constant_term().is_zero() {
        return Err(Error::NonNilpotentArgument);
    }
    let ring = arg.ring().clone();
    let order = ring.total_cap() as usize;
    let coeffs = template_coefficients(id, order)?;
    if arg.is_zero() {
        return Ok(TruncSeries::constant(&ring, coeffs[0].clone()));
    }
    let mut acc = TruncSeries::constant(&ring, coeffs[order].clone());
    for c in coeffs[..order].iter().rev() {
        acc = acc.mul(arg)?.add(&TruncSeries::constant(&ring, c.clone()))?;
    }
    Ok(acc)
}
