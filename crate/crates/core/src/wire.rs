//! JSON representations of every exchanged value.
//!
//! Exact numbers travel as strings (`"3/4"`, angles as `"k/N"`), cyclotomic
//! values as `{conductor, coeffs}` in the power basis. Bundles and series
//! inside a fixed component omit their ring, which the component supplies.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bundle::{LineTerm, SplitBundle};
use crate::cyclo::{fmt_rational, parse_rational, Angle, Cyclotomic, Rational};
use crate::error::{Error, Result};
use crate::localization::{DelocalizedClass, FixedComponent, GroupTable, LocalizationDatum};
use crate::motivic::{Stratification, Stratum};
use crate::quotient::{DefectPoint, IsolatedDefectDatum};
use crate::series::{Monomial, RingModel, TruncSeries};
use crate::ycoeff::YCoeff;

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidDatum(msg.into())
}

fn parse_rat(s: &str) -> Result<Rational> {
    parse_rational(s).ok_or_else(|| invalid(format!("`{s}` is not a rational number")))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CyclotomicWire {
    Full { conductor: u32, coeffs: Vec<String> },
    Rational(String),
}

impl From<&Cyclotomic> for CyclotomicWire {
    fn from(c: &Cyclotomic) -> Self {
        CyclotomicWire::Full {
            conductor: c.conductor(),
            coeffs: c.coeffs().iter().map(fmt_rational).collect(),
        }
    }
}

impl TryFrom<&CyclotomicWire> for Cyclotomic {
    type Error = Error;

    fn try_from(w: &CyclotomicWire) -> Result<Self> {
        match w {
            CyclotomicWire::Rational(s) => Ok(Cyclotomic::from_rational(parse_rat(s)?)),
            CyclotomicWire::Full { conductor, coeffs } => {
                if *conductor == 0 {
                    return Err(invalid("conductor must be positive"));
                }
                let c: Vec<Rational> = coeffs.iter().map(|s| parse_rat(s)).collect::<Result<_>>()?;
                Ok(Cyclotomic::from_coeffs(*conductor, &c))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct YCoeffWire {
    pub terms: Vec<(i32, CyclotomicWire)>,
    #[serde(default)]
    pub denom_power: u32,
}

impl From<&YCoeff> for YCoeffWire {
    fn from(c: &YCoeff) -> Self {
        YCoeffWire {
            terms: c.terms().map(|(k, v)| (k, v.into())).collect(),
            denom_power: c.denom_power(),
        }
    }
}

impl TryFrom<&YCoeffWire> for YCoeff {
    type Error = Error;

    fn try_from(w: &YCoeffWire) -> Result<Self> {
        let terms = w
            .terms
            .iter()
            .map(|(k, c)| Ok((*k, Cyclotomic::try_from(c)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(YCoeff::from_terms(terms, w.denom_power))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RingWire {
    pub vars: Vec<String>,
    pub caps: Vec<u32>,
    pub total_cap: u32,
    pub integral: Vec<(Monomial, String)>,
}

impl From<&RingModel> for RingWire {
    fn from(r: &RingModel) -> Self {
        RingWire {
            vars: r.vars().to_vec(),
            caps: r.caps().to_vec(),
            total_cap: r.total_cap(),
            integral: r.integral().iter().map(|(m, q)| (m.clone(), fmt_rational(q))).collect(),
        }
    }
}

impl TryFrom<&RingWire> for Arc<RingModel> {
    type Error = Error;

    fn try_from(w: &RingWire) -> Result<Self> {
        let integral = w
            .integral
            .iter()
            .map(|(m, q)| Ok((m.clone(), parse_rat(q)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        RingModel::new(w.vars.clone(), w.caps.clone(), w.total_cap, integral)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesWire {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingWire>,
    pub terms: Vec<(Monomial, YCoeffWire)>,
}

impl SeriesWire {
    pub fn with_ring(s: &TruncSeries) -> Self {
        SeriesWire {
            ring: Some(s.ring().as_ref().into()),
            ..Self::bare(s)
        }
    }

    pub fn bare(s: &TruncSeries) -> Self {
        SeriesWire {
            ring: None,
            terms: s.terms().iter().map(|(m, c)| (m.clone(), c.into())).collect(),
        }
    }

    /// Decodes in the embedded ring, or in `ring` when none is embedded.
    pub fn decode(&self, ring: Option<&Arc<RingModel>>) -> Result<TruncSeries> {
        let own;
        let ring = match (&self.ring, ring) {
            (Some(w), _) => {
                own = Arc::<RingModel>::try_from(w)?;
                &own
            }
            (None, Some(r)) => r,
            (None, None) => return Err(invalid("series has no ring")),
        };
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| Ok((m.clone(), YCoeff::try_from(c)?)))
            .collect::<Result<Vec<_>>>()?;
        TruncSeries::from_terms(ring, terms)
    }
}

/// A root is either a full series or, as shorthand, a variable name or `"0"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RootWire {
    Series(SeriesWire),
    Var(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineTermWire {
    pub root: RootWire,
    pub angle: String,
    #[serde(default)]
    pub hodge: i32,
    pub mult: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BundleWire {
    pub terms: Vec<LineTermWire>,
}

impl From<&SplitBundle> for BundleWire {
    fn from(b: &SplitBundle) -> Self {
        BundleWire {
            terms: b
                .terms()
                .iter()
                .map(|t| LineTermWire {
                    root: RootWire::Series(SeriesWire::bare(t.root())),
                    angle: t.angle().to_string(),
                    hodge: t.hodge(),
                    mult: t.mult(),
                })
                .collect(),
        }
    }
}

impl BundleWire {
    pub fn decode(&self, ring: &Arc<RingModel>) -> Result<SplitBundle> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let root = match &t.root {
                    RootWire::Series(s) => s.decode(Some(ring))?,
                    RootWire::Var(v) if v == "0" => TruncSeries::zero(ring),
                    RootWire::Var(v) => {
                        let i = ring
                            .var_index(v)
                            .ok_or_else(|| invalid(format!("unknown variable `{v}`")))?;
                        TruncSeries::var(ring, i)
                    }
                };
                let angle: Angle = t.angle.parse()?;
                LineTerm::new(root, angle, t.hodge, t.mult)
            })
            .collect::<Result<Vec<_>>>()?;
        SplitBundle::new(ring, terms)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentWire {
    pub label: String,
    pub ring: RingWire,
    pub tangent: BundleWire,
    pub normal: BundleWire,
}

impl From<&FixedComponent> for ComponentWire {
    fn from(c: &FixedComponent) -> Self {
        ComponentWire {
            label: c.label().to_string(),
            ring: c.ring().as_ref().into(),
            tangent: c.tangent().into(),
            normal: c.normal().into(),
        }
    }
}

impl TryFrom<&ComponentWire> for FixedComponent {
    type Error = Error;

    fn try_from(w: &ComponentWire) -> Result<Self> {
        let ring = Arc::<RingModel>::try_from(&w.ring)?;
        FixedComponent::new(
            w.label.clone(),
            ring.clone(),
            w.tangent.decode(&ring)?,
            w.normal.decode(&ring)?,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupWire {
    pub elements: Vec<String>,
    pub order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mul: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub abelian: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatumWire {
    pub conductor: u32,
    pub group: GroupWire,
    pub fixed_data: BTreeMap<String, Vec<ComponentWire>>,
}

impl From<&LocalizationDatum> for DatumWire {
    fn from(d: &LocalizationDatum) -> Self {
        let g = d.group();
        DatumWire {
            conductor: d.conductor(),
            group: GroupWire {
                elements: g.elements().to_vec(),
                order: g.order(),
                mul: g.table_labels(),
                abelian: g.is_abelian() && !g.has_table(),
            },
            fixed_data: d
                .fixed_data()
                .iter()
                .map(|(k, v)| (k.clone(), v.iter().map(Into::into).collect()))
                .collect(),
        }
    }
}

impl TryFrom<&DatumWire> for LocalizationDatum {
    type Error = Error;

    fn try_from(w: &DatumWire) -> Result<Self> {
        if w.group.order != w.group.elements.len() {
            return Err(Error::InvalidGroup(format!(
                "order {} but {} elements",
                w.group.order,
                w.group.elements.len()
            )));
        }
        let group = GroupTable::new(w.group.elements.clone(), w.group.mul.clone(), w.group.abelian)?;
        let fixed = w
            .fixed_data
            .iter()
            .map(|(g, comps)| {
                let comps = comps.iter().map(FixedComponent::try_from).collect::<Result<Vec<_>>>()?;
                Ok((g.clone(), comps))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        LocalizationDatum::new(w.conductor, group, fixed)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelledSeriesWire {
    pub label: String,
    pub series: SeriesWire,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DelocalizedWire {
    pub classes: BTreeMap<String, Vec<LabelledSeriesWire>>,
}

impl From<&DelocalizedClass> for DelocalizedWire {
    fn from(c: &DelocalizedClass) -> Self {
        DelocalizedWire {
            classes: c
                .classes
                .iter()
                .map(|(g, v)| {
                    let entries = v
                        .iter()
                        .map(|(l, s)| LabelledSeriesWire {
                            label: l.clone(),
                            series: SeriesWire::with_ring(s),
                        })
                        .collect();
                    (g.clone(), entries)
                })
                .collect(),
        }
    }
}

impl TryFrom<&DelocalizedWire> for DelocalizedClass {
    type Error = Error;

    fn try_from(w: &DelocalizedWire) -> Result<Self> {
        let classes = w
            .classes
            .iter()
            .map(|(g, v)| {
                let entries = v
                    .iter()
                    .map(|e| Ok((e.label.clone(), e.series.decode(None)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok((g.clone(), entries))
            })
            .collect::<Result<_>>()?;
        Ok(DelocalizedClass { classes })
    }
}

/// Twist bundles keyed by element, one per fixed component, in order.
pub type TwistWire = BTreeMap<String, Vec<BundleWire>>;

pub fn decode_twist(d: &LocalizationDatum, w: &TwistWire) -> Result<BTreeMap<String, Vec<SplitBundle>>> {
    w.iter()
        .map(|(g, bundles)| {
            let comps = d.components(g)?;
            if comps.len() != bundles.len() {
                return Err(invalid(format!(
                    "`{g}` has {} components but {} twist bundles",
                    comps.len(),
                    bundles.len()
                )));
            }
            let decoded = comps
                .iter()
                .zip(bundles)
                .map(|(c, b)| b.decode(c.ring()))
                .collect::<Result<Vec<_>>>()?;
            Ok((g.clone(), decoded))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DefectPointWire {
    pub angles: Vec<String>,
    pub chi_g: YCoeffWire,
    pub chi_plain: YCoeffWire,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DefectWire {
    pub group_order: u64,
    pub points: BTreeMap<String, Vec<DefectPointWire>>,
}

impl TryFrom<&DefectWire> for IsolatedDefectDatum {
    type Error = Error;

    fn try_from(w: &DefectWire) -> Result<Self> {
        let points = w
            .points
            .iter()
            .map(|(g, pts)| {
                let pts = pts
                    .iter()
                    .map(|p| {
                        Ok(DefectPoint {
                            angles: p.angles.iter().map(|a| a.parse()).collect::<Result<_>>()?,
                            chi_g: (&p.chi_g).try_into()?,
                            chi_plain: (&p.chi_plain).try_into()?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok((g.clone(), pts))
            })
            .collect::<Result<_>>()?;
        Ok(IsolatedDefectDatum { points })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StratumWire {
    pub dim: u32,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StratificationWire {
    pub strata: Vec<StratumWire>,
}

impl From<&StratificationWire> for Stratification {
    fn from(w: &StratificationWire) -> Self {
        Stratification {
            strata: w
                .strata
                .iter()
                .map(|s| Stratum {
                    dim: s.dim,
                    count: s.count,
                })
                .collect(),
        }
    }
}

pub fn datum_from_json(s: &str) -> Result<LocalizationDatum> {
    let w: DatumWire = serde_json::from_str(s).map_err(|e| invalid(e.to_string()))?;
    LocalizationDatum::try_from(&w)
}

pub fn datum_to_json(d: &LocalizationDatum) -> String {
    serde_json::to_string_pretty(&DatumWire::from(d)).expect("datum serializes")
}

/// Relabelling of components between conjugate elements, as
/// `[{from, to, components: {label: label}}]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelabelEntryWire {
    pub from: String,
    pub to: String,
    pub components: BTreeMap<String, String>,
}

pub fn decode_relabel(entries: &[RelabelEntryWire]) -> crate::localization::Relabel {
    entries
        .iter()
        .map(|e| ((e.from.clone(), e.to.clone()), e.components.clone()))
        .collect()
}
