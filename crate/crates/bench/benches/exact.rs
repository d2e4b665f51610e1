use criterion::{criterion_group, criterion_main, Criterion};
use specfact_bench::{dense_phi_row, rational_row, tower_factor};
use specfact_core::{complete, construct_paraunitary, factorize, transfer_matrix, FieldDescriptor};

fn benches(c: &mut Criterion) {
    let tf = tower_factor();
    c.bench_function("factorize 2x2 over the quartic tower", |b| {
        b.iter(|| factorize(&tf, true).unwrap())
    });
    let row = rational_row();
    c.bench_function("complete rational 3-row", |b| {
        b.iter(|| complete(&row, None).unwrap())
    });
    let dense = dense_phi_row();
    let mut slow = c.benchmark_group("dense");
    slow.sample_size(10);
    slow.bench_function("construct_paraunitary m=4, three order-3 poles", |b| {
        b.iter(|| construct_paraunitary(&dense).unwrap())
    });
    slow.finish();
    let q = FieldDescriptor::rational();
    let (a, bb) = (q.from_ratio(1, 3), q.from_ratio(-3, 4));
    c.bench_function("transfer matrix 5x5", |b| {
        b.iter(|| transfer_matrix(&a, &bb, 5, 5).unwrap())
    });
}

criterion_group!(exact, benches);
criterion_main!(exact);
