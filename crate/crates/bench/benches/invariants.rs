use cr_ahlfors::algebra::reduce_mod_sphere;
use cr_ahlfors::invariants::{ahlfors_mixed, umbilic_locus_from};
use cr_ahlfors::maps::catalog;
use cr_ahlfors::numeric::positivity_scan;
use cr_ahlfors::parse::parse_expression;
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn trace_and_a1(c: &mut Criterion) {
    let mut g = c.benchmark_group("ahlfors_mixed");
    g.sample_size(20);
    for id in ["table1/row2", "table1/row13", "faran-3-9", "whitney:n=2", "homogeneous:n=2,d=3"] {
        let f = catalog(id).unwrap().map;
        g.bench_with_input(BenchmarkId::from_parameter(id), &f, |b, f| b.iter(|| ahlfors_mixed(black_box(f)).unwrap()));
    }
    g.finish();
}

fn umbilic(c: &mut Criterion) {
    let mut g = c.benchmark_group("umbilic");
    g.sample_size(20);
    for id in ["table1/row4", "table1/row13", "cubic-dangelo-1991"] {
        let f = catalog(id).unwrap().map;
        let data = ahlfors_mixed(&f).unwrap();
        g.bench_function(id, |b| b.iter(|| umbilic_locus_from(&f, black_box(&data)).unwrap()));
    }
    g.finish();
}

fn algebra(c: &mut Criterion) {
    let src = "(z^3 - sqrt(3)*z*w^2 + w^3/2)*(conj(z)^2 + conj(w))";
    c.bench_function("parse", |b| b.iter(|| parse_expression(black_box(src), 2).unwrap()));
    let p = parse_expression("(z*conj(z) + w*conj(w))^4 + z^2*conj(w)^3", 2).unwrap();
    c.bench_function("reduce_mod_sphere", |b| b.iter(|| reduce_mod_sphere(black_box(p.num()))));
}

fn positivity(c: &mut Criterion) {
    let f = catalog("faran-3-9").unwrap().map;
    let trace = ahlfors_mixed(&f).unwrap().trace;
    c.bench_function("positivity_scan_10k", |b| b.iter(|| positivity_scan(black_box(&trace), 1, 10_000, 42).unwrap()));
}

criterion_group!(benches, trace_and_a1, umbilic, algebra, positivity);
criterion_main!(benches);
