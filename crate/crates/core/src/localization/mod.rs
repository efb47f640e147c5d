//! Fixed-point data of a finite group action and the classes and genera
//! computed from it.
//!
//! Homology classes on a smooth fixed component are represented by their
//! Poincaré-dual cohomology series, so capping with `[X^g]` is the identity
//! and integration reads the top-degree coefficient.

mod builders;
mod group;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_integer::Integer;
use rayon::prelude::*;

use crate::bundle::{CharacterScale, SplitBundle};
use crate::cyclo::{Angle, Cyclotomic};
use crate::error::{Error, Result};
use crate::series::{RingModel, TemplateId, TruncSeries};
use crate::ycoeff::YCoeff;

pub use builders::{
    build_projective_datum, build_wproj_cover_datum, diagonal_components, wproj_element_weights, wproj_elements,
};
pub use group::{cyclic_label, product_label, GroupTable, IDENTITY};

/// A connected component of `X^g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedComponent {
    label: String,
    ring: Arc<RingModel>,
    tangent: SplitBundle,
    normal: SplitBundle,
}

impl FixedComponent {
    pub fn new(
        label: impl Into<String>,
        ring: Arc<RingModel>,
        tangent: SplitBundle,
        normal: SplitBundle,
    ) -> Result<Self> {
        let label = label.into();
        let bad = |why: String| Err(Error::InvalidDatum(format!("component `{label}`: {why}")));
        if tangent.ring() != &ring || normal.ring() != &ring {
            return Err(Error::RingMismatch);
        }
        if tangent.rank() != ring.total_cap() as i64 {
            return bad(format!(
                "tangent rank {} differs from dimension {}",
                tangent.rank(),
                ring.total_cap()
            ));
        }
        if !tangent.angles_all_zero() {
            return bad("tangent bundle has a nonzero angle".into());
        }
        if normal.terms().iter().any(|t| t.angle().is_zero()) {
            return bad("normal bundle has a zero angle".into());
        }
        Ok(FixedComponent {
            label,
            ring,
            tangent,
            normal,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn ring(&self) -> &Arc<RingModel> {
        &self.ring
    }

    pub fn tangent(&self) -> &SplitBundle {
        &self.tangent
    }

    pub fn normal(&self) -> &SplitBundle {
        &self.normal
    }

    pub fn dim(&self) -> u32 {
        self.ring.total_cap()
    }

    /// Denominators of every normal angle.
    fn angle_dens(&self) -> impl Iterator<Item = u64> + '_ {
        self.normal.terms().iter().map(|t| t.angle().den())
    }

    /// `X × X'` with pulled-back tangent and normal bundles.
    pub fn product(&self, other: &FixedComponent) -> Result<FixedComponent> {
        let ring = RingModel::product(&self.ring, &other.ring);
        let off = self.ring.nvars();
        let tangent = self
            .tangent
            .pullback(&ring, 0)?
            .exterior_sum(&other.tangent.pullback(&ring, off)?)?;
        let normal = self
            .normal
            .pullback(&ring, 0)?
            .exterior_sum(&other.normal.pullback(&ring, off)?)?;
        FixedComponent::new(product_label(&self.label, &other.label), ring, tangent, normal)
    }
}

/// Fixed-point data of `(X, G)`: for every element, the components of `X^g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalizationDatum {
    conductor: u32,
    group: GroupTable,
    fixed_data: BTreeMap<String, Vec<FixedComponent>>,
}

impl LocalizationDatum {
    pub fn new(conductor: u32, group: GroupTable, fixed_data: BTreeMap<String, Vec<FixedComponent>>) -> Result<Self> {
        if conductor == 0 {
            return Err(Error::InvalidDatum("conductor must be positive".into()));
        }
        for g in group.elements() {
            if !fixed_data.contains_key(g) {
                return Err(Error::InvalidDatum(format!("no fixed data for element `{g}`")));
            }
        }
        for (g, comps) in &fixed_data {
            group.index_of(g)?;
            let mut labels = BTreeSet::new();
            for c in comps {
                if !labels.insert(c.label()) {
                    return Err(Error::InvalidDatum(format!(
                        "duplicate component `{}` for `{g}`",
                        c.label()
                    )));
                }
                if g == IDENTITY && !c.normal.is_empty() {
                    return Err(Error::InvalidDatum(format!(
                        "identity component `{}` has a normal bundle",
                        c.label()
                    )));
                }
                if let Some(den) = c.angle_dens().find(|d| !(conductor as u64).is_multiple_of(*d)) {
                    return Err(Error::ConductorMismatch { den, conductor });
                }
            }
        }
        Ok(LocalizationDatum {
            conductor,
            group,
            fixed_data,
        })
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn fixed_data(&self) -> &BTreeMap<String, Vec<FixedComponent>> {
        &self.fixed_data
    }

    pub fn components(&self, g: &str) -> Result<&[FixedComponent]> {
        self.fixed_data
            .get(g)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::UnknownElement(g.to_string()))
    }

    /// Fixed data of `(X × X', G × G')`.
    pub fn exterior_product(&self, other: &LocalizationDatum) -> Result<LocalizationDatum> {
        let group = GroupTable::product(&self.group, &other.group)?;
        let mut fixed_data = BTreeMap::new();
        for g in self.group.elements() {
            for h in other.group.elements() {
                let comps = self.fixed_data[g]
                    .iter()
                    .flat_map(|a| other.fixed_data[h].iter().map(move |b| a.product(b)))
                    .collect::<Result<Vec<_>>>()?;
                fixed_data.insert(product_label(g, h), comps);
            }
        }
        LocalizationDatum::new(self.conductor.lcm(&other.conductor), group, fixed_data)
    }
}

/// A class in `⊕_g H^{BM}(X^g)`, one series per fixed component.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DelocalizedClass {
    pub classes: BTreeMap<String, Vec<(String, TruncSeries)>>,
}

impl DelocalizedClass {
    /// The Atiyah-Singer classes of every component of every element.
    pub fn of_datum(d: &LocalizationDatum, normalized: bool) -> Result<Self> {
        let mut classes = BTreeMap::new();
        for (g, comps) in &d.fixed_data {
            let series = comps
                .par_iter()
                .map(|c| Ok((c.label.clone(), atiyah_singer_class(c, normalized)?)))
                .collect::<Result<Vec<_>>>()?;
            classes.insert(g.clone(), series);
        }
        Ok(DelocalizedClass { classes })
    }

    pub fn exterior_product(&self, other: &DelocalizedClass) -> Result<Self> {
        let mut classes = BTreeMap::new();
        for (g, a) in &self.classes {
            for (h, b) in &other.classes {
                let entry = a
                    .iter()
                    .flat_map(|(la, sa)| {
                        b.iter()
                            .map(move |(lb, sb)| Ok((product_label(la, lb), TruncSeries::cross(sa, sb)?)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                classes.insert(product_label(g, h), entry);
            }
        }
        Ok(DelocalizedClass { classes })
    }

    /// Sum of the degrees of the components of `g`.
    pub fn degree(&self, g: &str) -> Result<YCoeff> {
        let comps = self
            .classes
            .get(g)
            .ok_or_else(|| Error::UnknownElement(g.to_string()))?;
        Ok(comps.iter().fold(YCoeff::zero(), |acc, (_, s)| &acc + &s.integrate()))
    }
}

fn product_of_classes(
    factors: impl IntoIterator<Item = Result<TruncSeries>>,
    ring: &Arc<RingModel>,
) -> Result<TruncSeries> {
    let mut acc = TruncSeries::one(ring);
    for f in factors {
        acc = acc.mul(&f?)?;
    }
    Ok(acc)
}

/// `T_y(X^g) · Π_θ T_y^θ(N_θ)`, or the un-normalized `T̃` version.
pub fn atiyah_singer_class(c: &FixedComponent, normalized: bool) -> Result<TruncSeries> {
    let (tan, twisted): (TemplateId, fn(Angle) -> TemplateId) = if normalized {
        (TemplateId::NormalizedTy, TemplateId::TyTheta)
    } else {
        (TemplateId::UnnormalizedTy, TemplateId::UnnormTyTheta)
    };
    let normal = c.normal.angle_groups();
    product_of_classes(
        std::iter::once(c.tangent.total_class(tan)).chain(normal.iter().map(|(t, b)| b.total_class(twisted(*t)))),
        &c.ring,
    )
}

/// `td(X^g) · Π_θ U_θ(N_θ)`.
pub fn td_star_class(c: &FixedComponent) -> Result<TruncSeries> {
    let normal = c.normal.angle_groups();
    product_of_classes(
        std::iter::once(c.tangent.total_class(TemplateId::Todd))
            .chain(normal.iter().map(|(t, b)| b.total_class(TemplateId::UTheta(*t)))),
        &c.ring,
    )
}

/// `ch_{(1+y)}(χ_y(V))(g) · T*_y(X; g)`; the un-normalized class pairs with
/// the unscaled character.
pub fn twisted_class(c: &FixedComponent, v: &SplitBundle, normalized: bool) -> Result<TruncSeries> {
    let scale = if normalized {
        CharacterScale::OnePlusY
    } else {
        CharacterScale::One
    };
    v.character(scale, true, true)?
        .mul(&atiyah_singer_class(c, normalized)?)
}

/// `ch(E)(g) · td*(X; g)`, the Lefschetz-Riemann-Roch class of `E`.
pub fn lrr_td_class(c: &FixedComponent, e: &SplitBundle) -> Result<TruncSeries> {
    e.character(CharacterScale::One, true, false)?.mul(&td_star_class(c)?)
}

/// `χ_y(X, V; g)` by holomorphic Lefschetz localization. `twist`, when
/// present, holds one bundle per component of `X^g`, in order.
pub fn equivariant_chi_y(d: &LocalizationDatum, g: &str, twist: Option<&[SplitBundle]>) -> Result<YCoeff> {
    let comps = d.components(g)?;
    if let Some(t) = twist {
        if t.len() != comps.len() {
            return Err(Error::InvalidDatum(format!(
                "twist has {} bundles but `{g}` has {} components",
                t.len(),
                comps.len()
            )));
        }
    }
    let degrees = comps
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let class = match twist {
                Some(t) => twisted_class(c, &t[i], true)?,
                None => atiyah_singer_class(c, true)?,
            };
            Ok(class.integrate())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(degrees.iter().fold(YCoeff::zero(), |acc, x| &acc + x))
}

/// `χ_y` at `y = -1, 0, 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecializedInvariants {
    pub euler: Cyclotomic,
    pub todd: Cyclotomic,
    pub signature: Cyclotomic,
}

pub fn specialized_invariants(d: &LocalizationDatum, g: &str) -> Result<SpecializedInvariants> {
    let chi = equivariant_chi_y(d, g, None)?;
    Ok(SpecializedInvariants {
        euler: chi.specialize(&Cyclotomic::from_int(-1))?,
        todd: chi.specialize(&Cyclotomic::zero())?,
        signature: chi.specialize(&Cyclotomic::one())?,
    })
}

/// Pushforward of `T*_y(Y; g)` along a fibration with base datum `base`:
/// one twisted class per base component, twisted by `χ_y(f)` restricted there.
pub fn fibration_pushforward(
    base: &LocalizationDatum,
    g: &str,
    chi_y_f: &[SplitBundle],
) -> Result<Vec<(String, TruncSeries)>> {
    let comps = base.components(g)?;
    if chi_y_f.len() != comps.len() {
        return Err(Error::InvalidDatum(format!(
            "fibre data has {} bundles but `{g}` has {} components",
            chi_y_f.len(),
            comps.len()
        )));
    }
    comps
        .iter()
        .zip(chi_y_f)
        .map(|(c, v)| Ok((c.label.clone(), twisted_class(c, v, true)?)))
        .collect()
}

/// Identification of the components of `X^g` with those of `X^{g'}` for a
/// conjugate pair `(g, g')`.
pub type Relabel = BTreeMap<(String, String), BTreeMap<String, String>>;

/// Checks `h_* T*_y(X; g) = T*_y(X; hgh^{-1})` for every `g, h`. Pairs with
/// `g' = g` default to the identity relabelling; any other missing or
/// non-bijective mapping makes the check fail.
pub fn check_conjugation(d: &LocalizationDatum, relabel: &Relabel) -> Result<bool> {
    let group = d.group();
    if !group.has_table() && !group.is_abelian() {
        return Err(Error::MissingTable);
    }
    let class = DelocalizedClass::of_datum(d, true)?;
    let mut genus = BTreeMap::new();
    for g in group.elements() {
        genus.insert(g.clone(), class.degree(g)?);
    }
    for g in group.elements() {
        for h in group.elements() {
            let gp = group.conjugate(h, g)?.to_string();
            if genus[g] != genus[&gp] {
                return Ok(false);
            }
            let src = &class.classes[g];
            let dst: BTreeMap<&str, &TruncSeries> = class.classes[&gp].iter().map(|(l, s)| (l.as_str(), s)).collect();
            let mapping: Vec<(&str, &str)> = match relabel.get(&(g.clone(), gp.clone())) {
                Some(m) => m.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect(),
                None if *g == gp => src.iter().map(|(l, _)| (l.as_str(), l.as_str())).collect(),
                None => return Ok(false),
            };
            let images: BTreeSet<&str> = mapping.iter().map(|(_, b)| *b).collect();
            if mapping.len() != src.len() || images.len() != dst.len() || images.len() != mapping.len() {
                return Ok(false);
            }
            for (l, s) in src {
                let Some((_, target)) = mapping.iter().find(|(a, _)| a == l) else {
                    return Ok(false);
                };
                match dst.get(target) {
                    Some(t) if *t == s => {}
                    _ => return Ok(false),
                }
            }
        }
    }
    Ok(true)
}

/// `T̃_{y,i} = (1+y)^i T_{y,i}` in every homological degree `i`.
pub fn unnorm_norm_check(c: &FixedComponent) -> Result<bool> {
    let norm = atiyah_singer_class(c, true)?;
    let unnorm = atiyah_singer_class(c, false)?;
    let dim = c.dim();
    Ok(unnorm == norm.scale_by_degree(|j| YCoeff::one_plus_y_pow((dim - j) as i32)))
}
