//! Fixed-point data of diagonal actions on projective space.

use std::collections::BTreeMap;

use num_integer::Integer;

use super::{FixedComponent, GroupTable, LocalizationDatum, IDENTITY};
use crate::bundle::{LineTerm, SplitBundle};
use crate::cyclo::Angle;
use crate::error::{Error, Result};
use crate::series::{RingModel, TruncSeries};

/// Components of `(P^n)^g` for `g = diag(ζ_N^{a_0}, …, ζ_N^{a_n})`.
///
/// Each distinct weight `λ` of multiplicity `k` gives a `P^{k-1}` with
/// normal bundle `⊕_{μ≠λ} O(1)^{k_μ}` rotated by `(μ - λ)/N`.
pub fn diagonal_components(weights: &[u64], conductor: u64) -> Result<Vec<FixedComponent>> {
    if conductor == 0 {
        return Err(Error::InvalidWeights("conductor must be positive".into()));
    }
    let mut mult: BTreeMap<u64, i64> = BTreeMap::new();
    for &a in weights {
        *mult.entry(a % conductor).or_insert(0) += 1;
    }
    mult.iter()
        .map(|(&lambda, &k)| {
            let ring = if k == 1 {
                RingModel::point()
            } else {
                RingModel::projective(k as u32 - 1, "x")
            };
            let root = if k == 1 {
                TruncSeries::zero(&ring)
            } else {
                TruncSeries::var(&ring, 0)
            };
            let normal = mult
                .iter()
                .filter(|(&mu, _)| mu != lambda)
                .map(|(&mu, &k_mu)| {
                    let angle = Angle::new(mu as i64 - lambda as i64, conductor)?;
                    LineTerm::new(root.clone(), angle, 0, k_mu)
                })
                .collect::<Result<Vec<_>>>()?;
            let normal = SplitBundle::new(&ring, normal)?;
            FixedComponent::new(
                format!("F{lambda}"),
                ring.clone(),
                SplitBundle::euler_sequence(&ring),
                normal,
            )
        })
        .collect()
}

/// `Z/N` acting on `P^n` with the generator `diag(ζ_N^{a_0}, …, ζ_N^{a_n})`.
pub fn build_projective_datum(n: usize, weights: &[u64], conductor: u32) -> Result<LocalizationDatum> {
    if weights.len() != n + 1 {
        return Err(Error::InvalidWeights(format!(
            "P^{n} needs {} weights, got {}",
            n + 1,
            weights.len()
        )));
    }
    if conductor == 0 {
        return Err(Error::InvalidWeights("conductor must be positive".into()));
    }
    if let Some(a) = weights.iter().find(|&&a| a >= conductor as u64) {
        return Err(Error::InvalidWeights(format!(
            "weight {a} is not below the conductor {conductor}"
        )));
    }
    let group = GroupTable::cyclic(conductor as usize)?;
    let mut fixed = BTreeMap::new();
    for (k, g) in group.elements().iter().enumerate() {
        let w: Vec<u64> = weights.iter().map(|a| a * k as u64).collect();
        fixed.insert(g.clone(), diagonal_components(&w, conductor as u64)?);
    }
    LocalizationDatum::new(conductor, group, fixed)
}

fn check_weights(w: &[u64]) -> Result<u64> {
    if w.is_empty() {
        return Err(Error::InvalidWeights("empty weight vector".into()));
    }
    if w.contains(&0) {
        return Err(Error::InvalidWeights("weights must be positive".into()));
    }
    Ok(w.iter().fold(1, |acc, x| acc.lcm(x)))
}

/// All elements `(k_0, …, k_n)` of `G(w) = Π μ_{w_j}`, last index fastest.
pub fn wproj_elements(w: &[u64]) -> Result<Vec<Vec<u64>>> {
    check_weights(w)?;
    let mut out = vec![Vec::new()];
    for &wj in w {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..wj).map(move |k| {
                    let mut v = prefix.clone();
                    v.push(k);
                    v
                })
            })
            .collect();
    }
    Ok(out)
}

/// Diagonal weights mod `N = lcm(w)` of the element `k` of `G(w)`.
pub fn wproj_element_weights(w: &[u64], k: &[u64]) -> Result<(Vec<u64>, u64)> {
    let n = check_weights(w)?;
    if k.len() != w.len() || k.iter().zip(w).any(|(a, b)| a >= b) {
        return Err(Error::InvalidWeights(format!("{k:?} is not an element of G({w:?})")));
    }
    Ok((k.iter().zip(w).map(|(kj, wj)| kj * (n / wj)).collect(), n))
}

fn wproj_label(k: &[u64]) -> String {
    if k.iter().all(|&x| x == 0) {
        IDENTITY.to_string()
    } else {
        let parts: Vec<String> = k.iter().map(u64::to_string).collect();
        format!("({})", parts.join(","))
    }
}

/// `G(w)` acting on `P^n` by roots of unity on the coordinates, the cover
/// `P^n → P^n(w)`.
pub fn build_wproj_cover_datum(w: &[u64]) -> Result<LocalizationDatum> {
    let n = check_weights(w)?;
    let elements = wproj_elements(w)?;
    let labels: Vec<String> = elements.iter().map(|k| wproj_label(k)).collect();
    let group = GroupTable::new(labels.clone(), None, true)?;
    let mut fixed = BTreeMap::new();
    for (k, label) in elements.iter().zip(labels) {
        let (weights, _) = wproj_element_weights(w, k)?;
        fixed.insert(label, diagonal_components(&weights, n)?);
    }
    LocalizationDatum::new(n as u32, group, fixed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_examples() {
        let d = build_projective_datum(1, &[0, 1], 3).unwrap();
        let comps = d.components("g").unwrap();
        assert_eq!(comps.len(), 2);
        let angles: Vec<String> = comps
            .iter()
            .map(|c| c.normal().terms()[0].angle().to_string())
            .collect();
        assert_eq!(angles, ["1/3", "2/3"]);
        assert!(comps.iter().all(|c| c.dim() == 0));

        let d = build_projective_datum(2, &[0, 0, 1], 2).unwrap();
        let dims: Vec<u32> = d.components("g").unwrap().iter().map(|c| c.dim()).collect();
        assert_eq!(dims, [1, 0]);

        let d = build_projective_datum(3, &[2, 2, 2, 2], 5).unwrap();
        for g in d.group().elements() {
            let comps = d.components(g).unwrap();
            assert_eq!(comps.len(), 1);
            assert_eq!(comps[0].dim(), 3);
            assert!(comps[0].normal().is_empty());
        }
    }

    #[test]
    fn invalid_weights() {
        assert!(build_projective_datum(1, &[0, 3], 3).is_err());
        assert!(build_projective_datum(2, &[0, 1], 3).is_err());
        assert!(build_wproj_cover_datum(&[1, 0]).is_err());
        assert!(build_wproj_cover_datum(&[]).is_err());
    }

    #[test]
    fn wproj_cover() {
        let d = build_wproj_cover_datum(&[1, 2]).unwrap();
        assert_eq!(d.group().elements(), ["id", "(0,1)"]);
        assert_eq!(d.conductor(), 2);
        assert_eq!(d.components("(0,1)").unwrap().len(), 2);
        assert_eq!(wproj_elements(&[2, 3]).unwrap().len(), 6);
        assert_eq!(wproj_element_weights(&[2, 3], &[1, 2]).unwrap(), (vec![3, 4], 6));
    }
}
