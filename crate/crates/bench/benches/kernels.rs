use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use eqclass::localization::{build_projective_datum, equivariant_chi_y, DelocalizedClass};
use eqclass::quotient::{chi_y_quotient, wproj_class};
use eqclass::series::{template_coefficients, TemplateId};
use eqclass::{Angle, Cyclotomic};

fn cyclotomic(c: &mut Criterion) {
    let mut g = c.benchmark_group("cyclotomic");
    for n in [12u32, 60] {
        let a = &Cyclotomic::zeta(n, 1) + &Cyclotomic::from_int(3);
        let b = &Cyclotomic::zeta(n, 7) - &Cyclotomic::from_int(2);
        g.bench_with_input(BenchmarkId::new("mul", n), &n, |bch, _| {
            bch.iter(|| black_box(&a) * black_box(&b))
        });
        g.bench_with_input(BenchmarkId::new("invert", n), &n, |bch, _| {
            bch.iter(|| black_box(&a).invert().unwrap())
        });
    }
    g.finish();
}

fn templates(c: &mut Criterion) {
    let mut g = c.benchmark_group("template_cached");
    let theta = Angle::new(1, 7).unwrap();
    for order in [4usize, 8] {
        g.bench_with_input(BenchmarkId::new("normalized_ty", order), &order, |b, &k| {
            b.iter(|| template_coefficients(TemplateId::NormalizedTy, k).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("ty_theta", order), &order, |b, &k| {
            b.iter(|| template_coefficients(TemplateId::TyTheta(theta), k).unwrap())
        });
    }
    g.finish();
}

fn localization(c: &mut Criterion) {
    let mut g = c.benchmark_group("localization");
    let d = build_projective_datum(4, &[0, 1, 1, 5, 9], 12).unwrap();
    g.bench_function("chi_y_p4_mod12", |b| {
        b.iter(|| equivariant_chi_y(&d, "g", None).unwrap())
    });
    g.bench_function("delocalized_p4_mod12", |b| {
        b.iter(|| DelocalizedClass::of_datum(&d, true).unwrap())
    });
    let d = build_projective_datum(3, &[0, 1, 2, 3], 7).unwrap();
    g.bench_function("quotient_p3_mod7", |b| b.iter(|| chi_y_quotient(&d).unwrap()));
    g.finish();
}

fn weighted(c: &mut Criterion) {
    let mut g = c.benchmark_group("wproj_class");
    for w in [vec![1u64, 2, 3], vec![2, 3, 5, 7]] {
        let name = w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        g.bench_with_input(BenchmarkId::from_parameter(name), &w, |b, w| {
            b.iter(|| wproj_class(w, true).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, cyclotomic, templates, localization, weighted);
criterion_main!(benches);
