//! Compactly supported equivariant genera from invariant cell
//! decompositions, an oracle independent of localization.
//!
//! A finite-order linear automorphism of `C^k` lies in the connected group
//! `GL_k(C)`, so it acts trivially on `H^{2k}_c(C^k)` and every cell
//! contributes `(-y)^k` regardless of the action.

use crate::ycoeff::YCoeff;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub dim: u32,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Stratification {
    pub strata: Vec<Stratum>,
}

impl Stratification {
    /// The coordinate-flag cells of `P^n`, one per dimension. They are
    /// invariant under every diagonal action.
    pub fn projective(n: u32) -> Self {
        Stratification {
            strata: (0..=n).map(|dim| Stratum { dim, count: 1 }).collect(),
        }
    }

    /// Disjoint union.
    pub fn union(&self, other: &Self) -> Self {
        let mut strata = self.strata.clone();
        strata.extend(&other.strata);
        Stratification { strata }
    }
}

/// `χ^c_y = Σ count · (-y)^{dim}`.
pub fn chi_c_y_cells(s: &Stratification) -> YCoeff {
    s.strata.iter().fold(YCoeff::zero(), |acc, st| {
        &acc + &YCoeff::neg_y_pow(st.dim as i32).scale(&(st.count as i64).into())
    })
}

/// `χ^c_y(X) = χ_y(X̄) - χ_y(∂X)`.
pub fn compactification_check(chi_c_x: &YCoeff, chi_xbar: &YCoeff, chi_boundary: &YCoeff) -> bool {
    *chi_c_x == chi_xbar - chi_boundary
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::rat;
    use crate::ycoeff::y_poly;
    use proptest::prelude::*;

    #[test]
    fn cell_examples() {
        assert_eq!(
            chi_c_y_cells(&Stratification::projective(2)),
            y_poly(&[rat(1, 1), rat(-1, 1), rat(1, 1)])
        );
        let line = Stratification {
            strata: vec![Stratum { dim: 1, count: 1 }],
        };
        assert_eq!(chi_c_y_cells(&line), -YCoeff::y());
        assert!(chi_c_y_cells(&Stratification::default()).is_zero());
    }

    #[test]
    fn compactification_examples() {
        let p1 = chi_c_y_cells(&Stratification::projective(1));
        let pt = chi_c_y_cells(&Stratification::projective(0));
        assert!(compactification_check(&-YCoeff::y(), &p1, &pt));
        assert!(compactification_check(&p1, &p1, &YCoeff::zero()));
        assert!(!compactification_check(&YCoeff::y(), &p1, &pt));
    }

    fn arb_strat() -> impl Strategy<Value = Stratification> {
        prop::collection::vec((0u32..5, 1u64..4), 0..6).prop_map(|v| Stratification {
            strata: v.into_iter().map(|(dim, count)| Stratum { dim, count }).collect(),
        })
    }

    proptest! {
        #[test]
        fn additivity(a in arb_strat(), b in arb_strat()) {
            prop_assert_eq!(chi_c_y_cells(&a.union(&b)), &chi_c_y_cells(&a) + &chi_c_y_cells(&b));
        }
    }
}
