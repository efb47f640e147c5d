//! The built-in verification suite: every identity the library promises,
//! checked exactly on bundled and generated data.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_integer::Integer;
use rayon::prelude::*;

use crate::bundle::{LineTerm, SplitBundle};
use crate::cyclo::{rat, Angle, Cyclotomic, Rational};
use crate::error::Result;
use crate::fixtures::{s3_on_p2, s3_on_p2_relabel};
use crate::localization::{
    atiyah_singer_class, build_projective_datum, build_wproj_cover_datum, check_conjugation, diagonal_components,
    equivariant_chi_y, fibration_pushforward, specialized_invariants, twisted_class, unnorm_norm_check,
    DelocalizedClass, FixedComponent, GroupTable, LocalizationDatum, IDENTITY,
};
use crate::motivic::{chi_c_y_cells, Stratification};
use crate::quotient::{
    chi_y_quotient, chi_y_quotient_wproj, defect_sum, wproj_alpha_term, wproj_class, DefectPoint, IsolatedDefectDatum,
};
use crate::series::{template_coefficients, RingModel, TemplateId, TruncSeries};
use crate::ycoeff::YCoeff;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

/// `Σ_{p=0}^n (-y)^p`.
pub fn chi_y_projective(n: usize) -> YCoeff {
    (0..=n as i32).fold(YCoeff::zero(), |acc, p| &acc + &YCoeff::neg_y_pow(p))
}

/// Diagonal actions of `Z/N` on `P^n` up to permutation and shift of the
/// weights, each as a sorted weight vector starting at 0.
pub fn diagonal_action_classes(n: usize, conductor: u64) -> Vec<Vec<u64>> {
    let mut out = BTreeSet::new();
    let mut current = vec![0u64];
    fn rec(n: usize, conductor: u64, current: &mut Vec<u64>, out: &mut BTreeSet<Vec<u64>>) {
        if current.len() == n + 1 {
            let key = (0..current.len())
                .map(|i| {
                    let s = current[i];
                    let mut v: Vec<u64> = current.iter().map(|a| (a + conductor - s) % conductor).collect();
                    v.sort_unstable();
                    v
                })
                .min()
                .unwrap();
            out.insert(key);
            return;
        }
        let start = *current.last().unwrap();
        for a in start..conductor {
            current.push(a);
            rec(n, conductor, current, out);
            current.pop();
        }
    }
    rec(n, conductor, &mut current, &mut out);
    out.into_iter().collect()
}

/// Non-decreasing weight vectors of length `n+1` with `lcm ≤ max_lcm`.
pub fn weight_vectors(n: usize, max_lcm: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    fn rec(n: usize, max_lcm: u64, lcm: u64, current: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if current.len() == n + 1 {
            out.push(current.clone());
            return;
        }
        let start = current.last().copied().unwrap_or(1);
        for w in start..=max_lcm {
            let l = lcm.lcm(&w);
            if l <= max_lcm {
                current.push(w);
                rec(n, max_lcm, l, current, out);
                current.pop();
            }
        }
    }
    rec(n, max_lcm, 1, &mut Vec::new(), &mut out);
    out
}

fn genus_of(comps: &[FixedComponent]) -> Result<YCoeff> {
    let mut acc = YCoeff::zero();
    for c in comps {
        acc = &acc + &atiyah_singer_class(c, true)?.integrate();
    }
    Ok(acc)
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<std::result::Result<(), String>> {
    Ok(if ok { Ok(()) } else { Err(what()) })
}

type Check = fn() -> Result<std::result::Result<(), String>>;

macro_rules! bail {
    ($e:expr) => {
        if let Err(msg) = $e? {
            return Ok(Err(msg));
        }
    };
}

fn p1_closed_form() -> Result<std::result::Result<(), String>> {
    for n in 2..=12u32 {
        for k in 1..n as u64 {
            let d = build_projective_datum(1, &[0, k], n)?;
            let chi = equivariant_chi_y(&d, "g", None)?;
            bail!(ensure(chi == chi_y_projective(1), || format!("N={n}, k={k}: {chi}")));
        }
    }
    Ok(Ok(()))
}

fn trace_identity() -> Result<std::result::Result<(), String>> {
    let jobs: Vec<(usize, u64, Vec<u64>)> = (1..=4)
        .flat_map(|n| (1..=12).flat_map(move |m| diagonal_action_classes(n, m).into_iter().map(move |w| (n, m, w))))
        .collect();
    let results = jobs
        .par_iter()
        .map(|(n, m, w)| {
            let chi = genus_of(&diagonal_components(w, *m)?)?;
            let cells = chi_c_y_cells(&Stratification::projective(*n as u32));
            Ok(chi == chi_y_projective(*n) && cells == chi)
        })
        .collect::<Result<Vec<bool>>>()?;
    if let Some(i) = results.iter().position(|ok| !ok) {
        let (n, m, w) = &jobs[i];
        return Ok(Err(format!("n={n}, N={m}, weights {w:?}")));
    }
    Ok(Ok(()))
}

fn specializations() -> Result<std::result::Result<(), String>> {
    let p1 = build_projective_datum(1, &[0, 1], 5)?;
    bail!(ensure(specialized_invariants(&p1, "g")?.euler == 2.into(), || {
        "P^1 Euler".into()
    }));
    let p2 = build_projective_datum(2, &[0, 1, 2], 3)?;
    bail!(ensure(specialized_invariants(&p2, "g")?.euler == 3.into(), || {
        "P^2 Euler".into()
    }));
    for n in 1..=4 {
        let d = build_projective_datum(n, &vec![0; n + 1], 1)?;
        let inv = specialized_invariants(&d, IDENTITY)?;
        bail!(ensure(inv.todd == 1.into(), || format!("Todd genus of P^{n}")));
        bail!(ensure(inv.euler == Cyclotomic::from_int(n as i64 + 1), || format!(
            "Euler of P^{n}"
        )));
    }
    let p2 = build_projective_datum(2, &[0, 0, 0], 1)?;
    ensure(specialized_invariants(&p2, IDENTITY)?.signature == 1.into(), || {
        "signature of P^2".into()
    })
}

fn rationals(id: TemplateId, order: usize) -> Result<Vec<Option<Rational>>> {
    Ok(template_coefficients(id, order)?
        .iter()
        .map(|c| c.as_constant().and_then(|c| c.as_rational()))
        .collect())
}

fn template_regression() -> Result<std::result::Result<(), String>> {
    let todd = [rat(1, 1), rat(1, 2), rat(1, 12), rat(0, 1), rat(-1, 720)];
    let l = [rat(1, 1), rat(0, 1), rat(1, 3), rat(0, 1), rat(-1, 45)];
    bail!(ensure(rationals(TemplateId::Todd, 4)? == todd.map(Some), || {
        "Todd coefficients".into()
    }));
    bail!(ensure(rationals(TemplateId::LClass, 4)? == l.map(Some), || {
        "L coefficients".into()
    }));
    for k in 0..=6 {
        let ty = template_coefficients(TemplateId::NormalizedTy, k)?;
        for (y, target) in [(-1, TemplateId::Chern), (0, TemplateId::Todd), (1, TemplateId::LClass)] {
            let want = template_coefficients(target, k)?;
            for (a, b) in ty.iter().zip(want.iter()) {
                let ok = YCoeff::constant(a.specialize(&Cyclotomic::from_int(y))?) == *b;
                bail!(ensure(ok, || format!("order {k}, y={y}")));
            }
        }
    }
    Ok(Ok(()))
}

fn multiplicativity() -> Result<std::result::Result<(), String>> {
    let a = build_projective_datum(1, &[0, 1], 3)?;
    let b = build_projective_datum(1, &[0, 1], 4)?;
    let ab = a.exterior_product(&b)?;
    let product = DelocalizedClass::of_datum(&a, true)?.exterior_product(&DelocalizedClass::of_datum(&b, true)?)?;
    bail!(ensure(product == DelocalizedClass::of_datum(&ab, true)?, || "classes".into()));
    for g in a.group().elements() {
        for h in b.group().elements() {
            let lhs = equivariant_chi_y(&ab, &crate::localization::product_label(g, h), None)?;
            let rhs = &equivariant_chi_y(&a, g, None)? * &equivariant_chi_y(&b, h, None)?;
            bail!(ensure(lhs == rhs, || format!("genus at ({g}, {h})")));
        }
    }
    Ok(Ok(()))
}

/// `χ_y(P^1)` as a Hodge-graded trivial bundle: `O` in degree 0 and 1.
fn chi_y_p1_bundle(ring: &std::sync::Arc<RingModel>) -> Result<SplitBundle> {
    SplitBundle::new(
        ring,
        vec![LineTerm::trivial(ring, 1), LineTerm::trivial(ring, 1).with_hodge(1)],
    )
}

fn trivial_action(n: u32) -> Result<LocalizationDatum> {
    build_projective_datum(n as usize, &vec![0; n as usize + 1], 1)
}

fn fibration() -> Result<std::result::Result<(), String>> {
    for (weights, m) in [(vec![0, 1], 5u32), (vec![0, 2], 3)] {
        let base = build_projective_datum(1, &weights, m)?;
        let fibre = trivial_action(1)?;
        let total = base.exterior_product(&fibre)?;
        let fibre_ring = fibre.components(IDENTITY)?[0].ring().clone();
        for g in base.group().elements() {
            let comps = base.components(g)?;
            let chi_f = comps
                .iter()
                .map(|c| chi_y_p1_bundle(c.ring()))
                .collect::<Result<Vec<_>>>()?;
            let rhs = fibration_pushforward(&base, g, &chi_f)?;
            let total_comps = total.components(&crate::localization::product_label(g, IDENTITY))?;
            for ((label, r), (c, tc)) in rhs.iter().zip(comps.iter().zip(total_comps)) {
                let pushed = atiyah_singer_class(tc, true)?.push_forward(c.ring(), &fibre_ring)?;
                bail!(ensure(pushed == *r, || format!("element {g}, component {label}")));
            }
        }
    }
    Ok(Ok(()))
}

fn quotient_genus() -> Result<std::result::Result<(), String>> {
    let cover = build_wproj_cover_datum(&[1, 2])?;
    bail!(ensure(chi_y_quotient(&cover)? == chi_y_projective(1), || {
        "P(1,2) average".into()
    }));
    let jobs: Vec<Vec<u64>> = (1..=3).flat_map(|n| weight_vectors(n, 12)).collect();
    let results = jobs
        .par_iter()
        .map(|w| {
            let n = w.len() - 1;
            let class_degree = wproj_class(w, true)?.degree();
            let averaged = chi_y_quotient_wproj(w)?;
            let mut ok = class_degree == averaged && averaged == chi_y_projective(n);
            if n == 2 {
                ok &= averaged.specialize(&Cyclotomic::one())? == Cyclotomic::one();
            }
            Ok(ok)
        })
        .collect::<Result<Vec<bool>>>()?;
    match results.iter().position(|ok| !ok) {
        Some(i) => Ok(Err(format!("weights {:?}", jobs[i]))),
        None => Ok(Ok(())),
    }
}

fn wproj_distinguished() -> Result<std::result::Result<(), String>> {
    let a = wproj_class(&[1, 1, 1], true)?.series;
    let b = wproj_class(&[1, 1, 2], true)?.series;
    ensure(
        (1..=2).any(|j| a.homogeneous(j).terms() != b.homogeneous(j).terms()),
        || "classes agree in every positive degree".into(),
    )
}

fn vanishing_alpha() -> Result<std::result::Result<(), String>> {
    let ring = RingModel::projective(1, "x");
    let term = wproj_alpha_term(&[2, 3], Angle::new(1, 5)?, &ring)?;
    ensure(term.is_zero(), || format!("term is {term}"))
}

fn conjugation() -> Result<std::result::Result<(), String>> {
    let d = s3_on_p2();
    for t in ["t01", "t12", "t02"] {
        bail!(ensure(
            equivariant_chi_y(&d, t, None)? == chi_y_projective(2),
            || format!("genus of {t}")
        ));
    }
    bail!(ensure(check_conjugation(&d, &s3_on_p2_relabel())?, || "covariance".into()));
    // swap the 3-cycle rows and columns with a transposition's: still a
    // group, but conjugation now pairs components that do not match
    let g = d.group();
    let swap = |s: &str| match s {
        "t01" => "c".to_string(),
        "c" => "t01".to_string(),
        other => other.to_string(),
    };
    let labels = g.elements().to_vec();
    let table = g.table_labels().expect("fixture has a table");
    let mut corrupted = vec![vec![String::new(); labels.len()]; labels.len()];
    for (i, row) in table.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let (a, b) = (
                labels.iter().position(|l| *l == swap(&labels[i])).unwrap(),
                labels.iter().position(|l| *l == swap(&labels[j])).unwrap(),
            );
            corrupted[a][b] = swap(v);
        }
    }
    let bad_group = GroupTable::new(labels, Some(corrupted), false)?;
    let bad = LocalizationDatum::new(d.conductor(), bad_group, d.fixed_data().clone())?;
    ensure(!check_conjugation(&bad, &s3_on_p2_relabel())?, || {
        "corrupted table passed".into()
    })
}

/// Components of every bundled and generated datum.
pub fn fixture_components() -> Result<Vec<FixedComponent>> {
    let mut data = vec![
        build_projective_datum(1, &[0, 1], 4)?,
        build_projective_datum(2, &[0, 0, 1], 2)?,
        build_projective_datum(2, &[0, 1, 2], 3)?,
        build_projective_datum(3, &[0, 1, 1, 3], 5)?,
        build_wproj_cover_datum(&[1, 2, 3])?,
        s3_on_p2(),
    ];
    data.push(data[0].exterior_product(&data[1])?);
    let mut out = Vec::new();
    for d in &data {
        for comps in d.fixed_data().values() {
            out.extend(comps.iter().cloned());
        }
    }
    Ok(out)
}

fn twisted_rigidity() -> Result<std::result::Result<(), String>> {
    let minus_one = Cyclotomic::from_int(-1);
    for c in fixture_components()? {
        let base = atiyah_singer_class(&c, true)?;
        let ring = c.ring();
        bail!(ensure(
            twisted_class(&c, &SplitBundle::trivial(ring), true)? == base,
            || { format!("trivial twist on {}", c.label()) }
        ));
        let stalk = SplitBundle::new(
            ring,
            vec![
                LineTerm::trivial(ring, 2).with_hodge(1),
                LineTerm::trivial(ring, 1).with_hodge(3),
            ],
        )?;
        let chi_stalk = &YCoeff::neg_y_pow(1).scale(&2.into()) + &YCoeff::neg_y_pow(3);
        bail!(ensure(
            twisted_class(&c, &stalk, true)? == base.scale(&chi_stalk),
            || { format!("constant twist on {}", c.label()) }
        ));
        let rank = 3i64;
        let flat = if ring.nvars() > 0 {
            SplitBundle::new(
                ring,
                vec![
                    LineTerm::new(TruncSeries::var(ring, 0), Angle::ZERO, 0, 2)?,
                    LineTerm::trivial(ring, 1).with_hodge(2),
                ],
            )?
        } else {
            SplitBundle::new(ring, vec![LineTerm::trivial(ring, rank)])?
        };
        let degree = twisted_class(&c, &flat, true)?.integrate().specialize(&minus_one)?;
        let euler = c
            .tangent()
            .total_class(TemplateId::Chern)?
            .integrate()
            .specialize(&minus_one)?;
        bail!(ensure(degree == Cyclotomic::from_int(rank) * euler, || {
            format!("y=-1 twisted degree on {}", c.label())
        }));
    }
    Ok(Ok(()))
}

fn unnorm_norm() -> Result<std::result::Result<(), String>> {
    for c in fixture_components()? {
        bail!(ensure(unnorm_norm_check(&c)?, || format!("component {}", c.label())));
    }
    Ok(Ok(()))
}

fn defect() -> Result<std::result::Result<(), String>> {
    let half = Angle::new(1, 2)?;
    let point = |chi_g: YCoeff| DefectPoint {
        angles: vec![half],
        chi_g,
        chi_plain: YCoeff::one(),
    };
    let mut d = IsolatedDefectDatum::default();
    d.points.insert("g".into(), vec![point(YCoeff::int(2))]);
    let expected = (&YCoeff::one() - &YCoeff::y()).scale(&Cyclotomic::from_rational(rat(1, 4)));
    bail!(ensure(defect_sum(&d, 2)? == expected, || "single point".into()));
    d.points.insert("g".into(), vec![point(YCoeff::one())]);
    ensure(defect_sum(&d, 2)?.is_zero(), || "matching stalks".into())
}

const CHECKS: [(u32, &str, Check); 13] = [
    (1, "p1-closed-form", p1_closed_form),
    (2, "trace-identity", trace_identity),
    (3, "specializations", specializations),
    (4, "template-regression", template_regression),
    (5, "multiplicativity", multiplicativity),
    (6, "fibration-formula", fibration),
    (7, "quotient-genus", quotient_genus),
    (8, "wproj-distinguished", wproj_distinguished),
    (9, "vanishing-alpha", vanishing_alpha),
    (10, "conjugation-covariance", conjugation),
    (11, "twisted-rigidity", twisted_rigidity),
    (12, "unnorm-norm-relation", unnorm_norm),
    (13, "defect-formula", defect),
];

pub fn suite_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.1).collect()
}

/// Runs the checks whose names are in `only` (all when empty), in order.
pub fn run_suite(only: &[String]) -> Vec<CheckOutcome> {
    let wanted: BTreeMap<&str, ()> = only.iter().map(|s| (s.as_str(), ())).collect();
    CHECKS
        .iter()
        .filter(|(_, name, _)| wanted.is_empty() || wanted.contains_key(name))
        .map(|&(id, name, check)| {
            let start = Instant::now();
            let (passed, detail) = match check() {
                Ok(Ok(())) => (true, String::new()),
                Ok(Err(msg)) => (false, msg),
                Err(e) => (false, format!("error: {e}")),
            };
            CheckOutcome {
                id,
                name,
                passed,
                detail,
                millis: start.elapsed().as_millis(),
            }
        })
        .collect()
}
