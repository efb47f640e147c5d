//! Split equivariant bundles on a fixed component.
//!
//! A bundle is a formal sum of eigen-lines. Each line carries its Chern root,
//! the angle by which the group element rotates it, a Hodge degree and a
//! virtual multiplicity, so K-theory classes, flat Hodge-graded bundles and
//! Euler-sequence presentations of tangent bundles share one representation.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cyclo::{root_of_unity, Angle};
use crate::error::{Error, Result};
use crate::series::{compose_template, RingModel, TemplateId, TruncSeries};
use crate::ycoeff::YCoeff;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineTerm {
    root: TruncSeries,
    angle: Angle,
    hodge: i32,
    mult: i64,
}

impl LineTerm {
    pub fn new(root: TruncSeries, angle: Angle, hodge: i32, mult: i64) -> Result<Self> {
        if !root.constant_term().is_zero() {
            return Err(Error::NonNilpotentArgument);
        }
        Ok(LineTerm {
            root,
            angle,
            hodge,
            mult,
        })
    }

    /// The trivial line `O` with multiplicity `mult`.
    pub fn trivial(ring: &Arc<RingModel>, mult: i64) -> Self {
        LineTerm {
            root: TruncSeries::zero(ring),
            angle: Angle::ZERO,
            hodge: 0,
            mult,
        }
    }

    pub fn root(&self) -> &TruncSeries {
        &self.root
    }

    pub fn angle(&self) -> Angle {
        self.angle
    }

    pub fn hodge(&self) -> i32 {
        self.hodge
    }

    pub fn mult(&self) -> i64 {
        self.mult
    }

    pub fn with_angle(mut self, angle: Angle) -> Self {
        self.angle = angle;
        self
    }

    pub fn with_hodge(mut self, hodge: i32) -> Self {
        self.hodge = hodge;
        self
    }

    pub fn with_mult(mut self, mult: i64) -> Self {
        self.mult = mult;
        self
    }
}

/// Whether the Chern character is taken at `e^{α}` or `e^{(1+y)α}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharacterScale {
    One,
    OnePlusY,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitBundle {
    ring: Arc<RingModel>,
    terms: Vec<LineTerm>,
}

impl SplitBundle {
    pub fn new(ring: &Arc<RingModel>, terms: Vec<LineTerm>) -> Result<Self> {
        for t in &terms {
            if t.root.ring() != ring {
                return Err(Error::RingMismatch);
            }
        }
        Ok(SplitBundle {
            ring: ring.clone(),
            terms,
        })
    }

    pub fn empty(ring: &Arc<RingModel>) -> Self {
        SplitBundle {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    /// The trivial rank-one bundle with Hodge degree 0.
    pub fn trivial(ring: &Arc<RingModel>) -> Self {
        SplitBundle {
            ring: ring.clone(),
            terms: vec![LineTerm::trivial(ring, 1)],
        }
    }

    /// `T P^k = (k+1)·O(1) ⊖ O` on a component whose ring has hyperplane
    /// class as variable 0. On a point this is the zero bundle.
    pub fn euler_sequence(ring: &Arc<RingModel>) -> Self {
        let k = ring.total_cap() as i64;
        if k == 0 {
            return Self::empty(ring);
        }
        let x = TruncSeries::var(ring, 0);
        SplitBundle {
            ring: ring.clone(),
            terms: vec![
                LineTerm::new(x, Angle::ZERO, 0, k + 1).unwrap(),
                LineTerm::trivial(ring, -1),
            ],
        }
    }

    pub fn ring(&self) -> &Arc<RingModel> {
        &self.ring
    }

    pub fn terms(&self) -> &[LineTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn rank(&self) -> i64 {
        self.terms.iter().map(|t| t.mult).sum()
    }

    /// Virtual rank of each Hodge graded piece, zero entries dropped.
    pub fn hodge_ranks(&self) -> BTreeMap<i32, i64> {
        let mut out = BTreeMap::new();
        for t in &self.terms {
            *out.entry(t.hodge).or_insert(0) += t.mult;
        }
        out.retain(|_, r| *r != 0);
        out
    }

    pub fn angles_all_zero(&self) -> bool {
        self.terms.iter().all(|t| t.angle.is_zero())
    }

    /// The first term with a nonzero angle, if any.
    pub fn first_nonzero_angle(&self) -> Option<Angle> {
        self.terms.iter().map(|t| t.angle).find(|a| !a.is_zero())
    }

    /// Sub-bundles `N_θ`, keyed by angle in increasing order.
    pub fn angle_groups(&self) -> BTreeMap<Angle, SplitBundle> {
        let mut out: BTreeMap<Angle, SplitBundle> = BTreeMap::new();
        for t in &self.terms {
            out.entry(t.angle)
                .or_insert_with(|| Self::empty(&self.ring))
                .terms
                .push(t.clone());
        }
        out
    }

    pub fn exterior_sum(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(SplitBundle {
            ring: self.ring.clone(),
            terms,
        })
    }

    /// `self ⊗ L`: roots, angles and Hodge degrees add, multiplicities scale.
    pub fn tensor_line(&self, line: &LineTerm) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Ok(LineTerm {
                    root: t.root.add(&line.root)?,
                    angle: t.angle + line.angle,
                    hodge: t.hodge + line.hodge,
                    mult: t.mult * line.mult,
                })
            })
            .collect::<Result<_>>()?;
        Ok(SplitBundle {
            ring: self.ring.clone(),
            terms,
        })
    }

    /// Pulls every root back into `target`, variables shifted by `offset`.
    pub fn pullback(&self, target: &Arc<RingModel>, offset: usize) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Ok(LineTerm {
                    root: t.root.embed(target, offset)?,
                    ..t.clone()
                })
            })
            .collect::<Result<_>>()?;
        Ok(SplitBundle {
            ring: target.clone(),
            terms,
        })
    }

    /// `Π f(α_i)^{m_i}` for the template `f`. Angles are ignored; callers
    /// pass one angle group at a time to the twisted templates.
    pub fn total_class(&self, id: TemplateId) -> Result<TruncSeries> {
        // merge equal roots so each composition happens once
        let mut merged: Vec<(&TruncSeries, i64)> = Vec::new();
        for t in &self.terms {
            match merged.iter_mut().find(|(r, _)| *r == &t.root) {
                Some(slot) => slot.1 += t.mult,
                None => merged.push((&t.root, t.mult)),
            }
        }
        let mut acc = TruncSeries::one(&self.ring);
        for (root, mult) in merged {
            if mult != 0 {
                acc = acc.mul(&compose_template(id, root)?.pow(mult)?)?;
            }
        }
        Ok(acc)
    }

    /// `Σ m_i · [e^{2πi t_i}] · [(-y)^{p_i}] · e^{s α_i}`.
    pub fn character(&self, scale: CharacterScale, use_angle: bool, use_hodge: bool) -> Result<TruncSeries> {
        let exp = match scale {
            CharacterScale::One => TemplateId::Exp,
            CharacterScale::OnePlusY => TemplateId::ExpOnePlusY,
        };
        let mut acc = TruncSeries::zero(&self.ring);
        for t in &self.terms {
            let mut c = YCoeff::int(t.mult);
            if use_angle && !t.angle.is_zero() {
                c = c.scale(&root_of_unity(t.angle, t.angle.den() as u32)?);
            }
            if use_hodge && t.hodge != 0 {
                c = &c * &YCoeff::neg_y_pow(t.hodge);
            }
            acc = acc.add(&compose_template(exp, &t.root)?.scale(&c))?;
        }
        Ok(acc)
    }
}
