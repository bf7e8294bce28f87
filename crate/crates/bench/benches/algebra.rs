use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use finitude::extend::builtin_presentation;
use finitude::field::{FieldKind, Q};
use finitude::homalg::{first_syzygy, pdim, DEFAULT_CUTOFF};
use finitude::presentation::Algebra;
use finitude::repmod::{decompose, hom_basis, projective_rep, DecomposeOptions};
use finitude_bench::{ex6, ex7_lambda, hn, mn};

fn basis(c: &mut Criterion) {
    let mut g = c.benchmark_group("basis");
    for name in ["ex2", "ex6", "ex7-delta"] {
        let pres = builtin_presentation(name, FieldKind::Rational).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(name), &pres, |b, p| b.iter(|| Algebra::<Q>::new(black_box(p.clone())).unwrap()));
    }
    g.finish();
}

fn hom(c: &mut Criterion) {
    let alg = ex6();
    let mut g = c.benchmark_group("hom_basis");
    for n in [1, 2, 4] {
        let m = mn(&alg, n);
        g.bench_with_input(BenchmarkId::new("M_n to M_n", n), &m, |b, m| b.iter(|| hom_basis(black_box(m), m)));
    }
    g.finish();
}

fn syzygies(c: &mut Criterion) {
    let lam = ex7_lambda();
    let mut g = c.benchmark_group("first_syzygy");
    for n in [1, 2, 4] {
        let h = hn(&lam, n);
        g.bench_with_input(BenchmarkId::new("H_n", n), &h, |b, h| b.iter(|| first_syzygy(black_box(h))));
    }
    g.finish();
}

fn projective_dimension(c: &mut Criterion) {
    let alg = ex6();
    let mut g = c.benchmark_group("pdim");
    for n in [1, 2, 4] {
        let m = mn(&alg, n);
        g.bench_with_input(BenchmarkId::new("M_n", n), &m, |b, m| b.iter(|| pdim(black_box(m), DEFAULT_CUTOFF).unwrap()));
    }
    g.finish();
}

fn decomposition(c: &mut Criterion) {
    let lam = ex7_lambda();
    let p2 = projective_rep(&lam, lam.vertex("2"));
    let h = hn(&lam, 3);
    let omega = first_syzygy(&h).0;
    let opts = DecomposeOptions::default();
    c.bench_function("decompose first syzygy of H_3", |b| b.iter(|| decompose(black_box(&omega), &opts).unwrap()));
    c.bench_function("decompose P_2", |b| b.iter(|| decompose(black_box(&p2), &opts).unwrap()));
}

criterion_group!(benches, basis, hom, syzygies, projective_dimension, decomposition);
criterion_main!(benches);
