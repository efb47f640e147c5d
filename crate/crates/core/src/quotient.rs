//! Invariants of global quotients `X/G`: averaged genera, the pulled-back
//! Hirzebruch classes of weighted projective spaces, the isolated defect
//! sum and the orbifold twisted-genus identity.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_integer::Integer;
use rayon::prelude::*;

use crate::bundle::{CharacterScale, SplitBundle};
use crate::cyclo::{rat, Angle, Cyclotomic};
use crate::error::{Error, Result};
use crate::localization::{
    atiyah_singer_class, diagonal_components, equivariant_chi_y, twisted_class, wproj_element_weights, wproj_elements,
    LocalizationDatum, IDENTITY,
};
use crate::series::{compose_template, RingModel, TemplateId, TruncSeries};
use crate::ycoeff::YCoeff;

fn sum(values: &[YCoeff]) -> YCoeff {
    values.iter().fold(YCoeff::zero(), |acc, x| &acc + x)
}

fn average(total: YCoeff, order: u64) -> YCoeff {
    total.scale(&Cyclotomic::from_rational(rat(1, order as i64)))
}

/// `χ_y(X/G) = (1/|G|) Σ_g χ_y(X; g)`.
pub fn chi_y_quotient(d: &LocalizationDatum) -> Result<YCoeff> {
    let genera = d
        .group()
        .elements()
        .par_iter()
        .map(|g| equivariant_chi_y(d, g, None))
        .collect::<Result<Vec<_>>>()?;
    Ok(average(sum(&genera), d.group().order() as u64))
}

/// Canonical form of a diagonal action up to coordinate permutation,
/// scalar shift and common factors with the conductor, none of which change
/// the fixed data.
fn action_class(weights: &[u64], n: u64) -> (Vec<u64>, u64) {
    let key = action_key(weights, n);
    let g = key.iter().fold(n, |acc, w| acc.gcd(w));
    (key.iter().map(|w| w / g).collect(), n / g)
}

/// `χ_y(P^n; g)` for a diagonal action class, memoized across calls.
fn diagonal_genus(class: &(Vec<u64>, u64)) -> Result<YCoeff> {
    type Memo = RwLock<HashMap<(Vec<u64>, u64), YCoeff>>;
    static CACHE: OnceLock<Memo> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.read().unwrap().get(class) {
        return Ok(v.clone());
    }
    let mut chi = YCoeff::zero();
    for c in &diagonal_components(&class.0, class.1)? {
        chi = &chi + &atiyah_singer_class(c, true)?.integrate();
    }
    cache.write().unwrap().insert(class.clone(), chi.clone());
    Ok(chi)
}

fn action_key(weights: &[u64], n: u64) -> Vec<u64> {
    let mut best: Option<Vec<u64>> = None;
    for &s in weights {
        let mut v: Vec<u64> = weights.iter().map(|a| (a + n - s) % n).collect();
        v.sort_unstable();
        if best.as_ref().is_none_or(|b| v < *b) {
            best = Some(v);
        }
    }
    best.unwrap_or_default()
}

/// `χ_y(P^n(w))` as the average over the cover `P^n → P^n(w)`, without
/// materializing the full datum. Elements are grouped by action class.
pub fn chi_y_quotient_wproj(w: &[u64]) -> Result<YCoeff> {
    let elements = wproj_elements(w)?;
    let mut classes: HashMap<(Vec<u64>, u64), u64> = HashMap::new();
    for k in &elements {
        let (weights, n) = wproj_element_weights(w, k)?;
        *classes.entry(action_class(&weights, n)).or_insert(0) += 1;
    }
    let mut keys: Vec<_> = classes.into_iter().collect();
    keys.sort();
    let genera = keys
        .par_iter()
        .map(|(class, count)| Ok(diagonal_genus(class)?.scale(&Cyclotomic::from_int(*count as i64))))
        .collect::<Result<Vec<_>>>()?;
    Ok(average(sum(&genera), elements.len() as u64))
}

/// Fixed points of a non-identity element with isolated fixed set, for the
/// defect formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectPoint {
    pub angles: Vec<Angle>,
    /// `χ_y(L_x; g)`
    pub chi_g: YCoeff,
    /// `χ_y(L_x)`
    pub chi_plain: YCoeff,
}

/// Isolated fixed points of each non-identity element.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IsolatedDefectDatum {
    pub points: BTreeMap<String, Vec<DefectPoint>>,
}

/// `(1/|G|) Σ_{g≠id} Σ_x (χ_y(L_x; g) - χ_y(L_x)) Π_θ (1 + y e^{-iθ})/(1 - e^{-iθ})`.
pub fn defect_sum(d: &IsolatedDefectDatum, group_order: u64) -> Result<YCoeff> {
    if group_order == 0 {
        return Err(Error::InvalidGroup("group order must be positive".into()));
    }
    let mut acc = YCoeff::zero();
    for (g, pts) in &d.points {
        if g == IDENTITY {
            continue;
        }
        for p in pts {
            let mut term = &p.chi_g - &p.chi_plain;
            for &t in &p.angles {
                let c = crate::series::template_coefficients(TemplateId::UnnormTyTheta(t), 0)?;
                term = &term * &c[0];
            }
            acc = &acc + &term;
        }
    }
    Ok(average(acc, group_order))
}

/// The pulled-back class `π^* T̃*_y(P^n(w))` (or its normalized version)
/// in `H^*(P^n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WprojClass {
    pub weights: Vec<u64>,
    pub normalized: bool,
    pub series: TruncSeries,
    /// `deg π = |G| / gcd(w)`.
    pub cover_degree: u64,
    /// Angles `α` (as fractions of a turn) that contributed a nonzero term.
    pub contributing: Vec<Angle>,
}

impl WprojClass {
    /// `∫_{P^n(w)}` of the class, i.e. `∫_{P^n} π^*(class) / deg π`.
    pub fn degree(&self) -> YCoeff {
        average(self.series.integrate(), self.cover_degree)
    }
}

/// The candidate angles `∪_j {k/w_j}`, sorted and deduplicated.
pub fn wproj_candidate_angles(w: &[u64]) -> Result<Vec<Angle>> {
    wproj_elements(w)?;
    let mut out = BTreeSet::new();
    for &wj in w {
        for k in 0..wj {
            out.insert(Angle::new(k as i64, wj)?);
        }
    }
    Ok(out.into_iter().collect())
}

/// `Π_j w_j x (1 + y e^{-w_j(x + iα)})/(1 - e^{-w_j(x + iα)})` truncated in
/// `H^*(P^n)`, with `α` given in turns.
pub fn wproj_alpha_term(w: &[u64], alpha: Angle, ring: &Arc<RingModel>) -> Result<TruncSeries> {
    let x = TruncSeries::var(ring, 0);
    let mut acc = TruncSeries::one(ring);
    for &wj in w {
        let arg = x.scale(&YCoeff::int(wj as i64));
        let phase = alpha.scale(wj as i64);
        let factor = if phase.is_zero() {
            compose_template(TemplateId::UnnormalizedTy, &arg)?
        } else {
            arg.mul(&compose_template(TemplateId::UnnormTyTheta(phase), &arg)?)?
        };
        acc = acc.mul(&factor)?;
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}

/// `(1+y) π^* T̃*_y(P^n(w)) = (1/gcd(w)) Σ_α Π_j w_j x (…)`, the sum over
/// the finitely many `α` with some `w_j α ∈ Z`.
pub fn wproj_class(w: &[u64], normalized: bool) -> Result<WprojClass> {
    let elements = wproj_elements(w)?;
    let n = w.len() as u32 - 1;
    let ring = RingModel::projective(n, "x");
    let d = w.iter().fold(0u64, |acc, x| acc.gcd(x));
    let order = elements.len() as u64;
    let terms = wproj_candidate_angles(w)?
        .into_par_iter()
        .map(|a| Ok((a, wproj_alpha_term(w, a, &ring)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut total = TruncSeries::zero(&ring);
    let mut contributing = Vec::new();
    for (a, t) in terms {
        if !t.is_zero() {
            contributing.push(a);
            total = total.add(&t)?;
        }
    }
    let unnorm = total
        .scale(&YCoeff::rational(rat(1, d as i64)))
        .scale(&YCoeff::one_plus_y_pow(-1));
    let series = if normalized {
        unnorm.scale_by_degree(|j| YCoeff::one_plus_y_pow(j as i32 - n as i32))
    } else {
        unnorm
    };
    Ok(WprojClass {
        weights: w.to_vec(),
        normalized,
        series,
        cover_degree: order / d,
        contributing,
    })
}

/// Genus-level form of the orbifold twisted-class identity on the cover `M`.
///
/// `v[g]` holds one bundle per component of `M^g`, each the restriction of a
/// bundle pulled back from `M/G`, so every angle must vanish. The left side
/// averages the degrees of the twisted classes with the group trace; the right
/// side pairs the untraced character with the averaged Atiyah-Singer classes.
/// The restrictions must also share one Hodge rank profile.
pub fn orbifold_twisted_check(d: &LocalizationDatum, v: &BTreeMap<String, Vec<SplitBundle>>) -> Result<bool> {
    for g in d.group().elements() {
        let comps = d.components(g)?;
        let bundles = v
            .get(g)
            .ok_or_else(|| Error::InvalidDatum(format!("no twist bundles for element `{g}`")))?;
        if bundles.len() != comps.len() {
            return Err(Error::InvalidDatum(format!(
                "`{g}` has {} components but {} twist bundles",
                comps.len(),
                bundles.len()
            )));
        }
        for (c, b) in comps.iter().zip(bundles) {
            if b.ring() != c.ring() {
                return Err(Error::RingMismatch);
            }
            if let Some(a) = b.first_nonzero_angle() {
                return Err(Error::NonTrivialAngle {
                    element: g.clone(),
                    component: c.label().to_string(),
                    angle: a.to_string(),
                });
            }
        }
    }
    let profile = match v.get(IDENTITY).and_then(|b| b.first()) {
        Some(b) => b.hodge_ranks(),
        None => return Ok(true),
    };
    if v.values().flatten().any(|b| b.hodge_ranks() != profile) {
        return Ok(false);
    }
    let mut lhs = YCoeff::zero();
    let mut rhs = YCoeff::zero();
    for g in d.group().elements() {
        for (c, b) in d.components(g)?.iter().zip(&v[g]) {
            lhs = &lhs + &twisted_class(c, b, true)?.integrate();
            let untraced = b.character(CharacterScale::OnePlusY, false, true)?;
            rhs = &rhs + &untraced.mul(&atiyah_singer_class(c, true)?)?.integrate();
        }
    }
    let order = d.group().order() as u64;
    Ok(average(lhs, order) == average(rhs, order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::LineTerm;
    use crate::localization::{build_projective_datum, build_wproj_cover_datum};
    use crate::ycoeff::y_poly;

    fn chi_pn(n: usize) -> YCoeff {
        y_poly(
            &(0..=n)
                .map(|p| rat(if p % 2 == 0 { 1 } else { -1 }, 1))
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn averaged_genera() {
        let d = build_projective_datum(1, &[0, 1], 2).unwrap();
        assert_eq!(chi_y_quotient(&d).unwrap(), chi_pn(1));
        let d = build_projective_datum(2, &[0, 1, 2], 3).unwrap();
        assert_eq!(chi_y_quotient(&d).unwrap(), chi_pn(2));
        let d = build_projective_datum(2, &[0, 0, 0], 1).unwrap();
        assert_eq!(
            chi_y_quotient(&d).unwrap(),
            equivariant_chi_y(&d, IDENTITY, None).unwrap()
        );
    }

    #[test]
    fn memoized_average_matches_the_full_datum() {
        for w in [vec![1, 2], vec![2, 3], vec![1, 2, 2], vec![2, 2, 3]] {
            let full = chi_y_quotient(&build_wproj_cover_datum(&w).unwrap()).unwrap();
            assert_eq!(chi_y_quotient_wproj(&w).unwrap(), full, "w = {w:?}");
        }
    }

    #[test]
    fn action_keys_forget_order_and_shift() {
        assert_eq!(action_key(&[3, 1, 1], 4), action_key(&[0, 2, 2], 4));
        assert_eq!(action_key(&[1, 0], 5), vec![0, 1]);
        assert_ne!(action_key(&[0, 1, 2], 5), action_key(&[0, 1, 3], 5));
        assert_eq!(action_class(&[0, 4, 8], 12), (vec![0, 1, 2], 3));
    }

    #[test]
    fn weighted_projective_line() {
        let c = wproj_class(&[1, 2], false).unwrap();
        assert_eq!(c.cover_degree, 2);
        assert_eq!(c.contributing, vec![Angle::ZERO, Angle::new(1, 2).unwrap()]);
        let x = TruncSeries::var(c.series.ring(), 0);
        let expected = TruncSeries::constant(c.series.ring(), YCoeff::one_plus_y())
            .add(&x.scale(&y_poly(&[rat(2, 1), rat(-2, 1)])))
            .unwrap();
        assert_eq!(c.series, expected);
        assert_eq!(c.degree(), chi_pn(1));
        assert_eq!(wproj_class(&[1, 2], true).unwrap().degree(), chi_pn(1));
    }

    #[test]
    fn unweighted_case_is_projective_space() {
        for n in 1..=3usize {
            let c = wproj_class(&vec![1; n + 1], true).unwrap();
            let d = build_projective_datum(n, &vec![0; n + 1], 1).unwrap();
            let direct = atiyah_singer_class(&d.components(IDENTITY).unwrap()[0], true).unwrap();
            assert_eq!(c.series, direct);
        }
    }

    #[test]
    fn non_contributing_angle_vanishes() {
        let ring = RingModel::projective(1, "x");
        assert!(wproj_alpha_term(&[2, 3], Angle::new(1, 5).unwrap(), &ring)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn defect_examples() {
        let half = Angle::new(1, 2).unwrap();
        let point = |diff: YCoeff| DefectPoint {
            angles: vec![half],
            chi_g: &YCoeff::one() + &diff,
            chi_plain: YCoeff::one(),
        };
        let mut d = IsolatedDefectDatum::default();
        d.points.insert("g".into(), vec![point(YCoeff::one())]);
        assert_eq!(defect_sum(&d, 2).unwrap(), y_poly(&[rat(1, 4), rat(-1, 4)]));
        d.points.insert("g".into(), vec![point(YCoeff::zero())]);
        assert!(defect_sum(&d, 2).unwrap().is_zero());
        assert!(defect_sum(&IsolatedDefectDatum::default(), 3).unwrap().is_zero());
    }

    #[test]
    fn orbifold_twist_precondition() {
        let d = build_projective_datum(1, &[0, 1], 2).unwrap();
        let twist = |hodge: i32, angle: Angle| -> BTreeMap<String, Vec<SplitBundle>> {
            d.fixed_data()
                .iter()
                .map(|(g, comps)| {
                    let bs = comps
                        .iter()
                        .map(|c| {
                            let t = LineTerm::trivial(c.ring(), 1).with_hodge(hodge);
                            let t = if g == "g" { t.with_angle(angle) } else { t };
                            SplitBundle::new(c.ring(), vec![t]).unwrap()
                        })
                        .collect();
                    (g.clone(), bs)
                })
                .collect()
        };
        assert!(orbifold_twisted_check(&d, &twist(0, Angle::ZERO)).unwrap());
        assert!(orbifold_twisted_check(&d, &twist(2, Angle::ZERO)).unwrap());
        assert!(matches!(
            orbifold_twisted_check(&d, &twist(0, Angle::new(1, 2).unwrap())),
            Err(Error::NonTrivialAngle { .. })
        ));
    }
}
