use criterion::{black_box, criterion_group, criterion_main, Criterion};
use hcns_core::hcnumber::hns_number;
use hcns_core::ops::{divis, in_multi, rad2};
use hcns_core::transforms::sys_izo;
use hcns_core::{HNumber, Registry, Side};

fn products(c: &mut Criterion) {
    let reg = Registry::in_memory();
    let q4n = reg.search_hns("Q4N").unwrap();
    let (a, _) = hns_number(4, "a", "e").unwrap();
    let (b, _) = hns_number(4, "b", "e").unwrap();
    c.bench_function("in_multi symbolic Q4N", |bench| bench.iter(|| in_multi(black_box(&a), black_box(&b), q4n).unwrap()));

    let h = reg.search_hns("H").unwrap();
    let x = HNumber::from_ints(&[3, -1, 4, 1]);
    let y = HNumber::from_ints(&[2, 7, -1, 8]);
    c.bench_function("divis exact H", |bench| bench.iter(|| divis(black_box(&x), black_box(&y), h, Side::Left).unwrap()));
}

fn roots(c: &mut Criterion) {
    let reg = Registry::in_memory();
    let h = reg.search_hns("H").unwrap();
    let a = HNumber::from_f64(&[0.3, -1.2, 0.7, 2.0]);
    c.bench_function("rad2 H", |bench| bench.iter(|| rad2(black_box(&a), h).unwrap()));
}

fn iso(c: &mut Criterion) {
    let reg = Registry::in_memory();
    let (q, hab) = (reg.search_hns("Q4N").unwrap(), reg.search_hns("Hab").unwrap());
    c.bench_function("sys_izo Q4N Hab", |bench| bench.iter(|| sys_izo(black_box(q), hab).unwrap()));
}

criterion_group!(benches, products, roots, iso);
criterion_main!(benches);
