use criterion::{black_box, criterion_group, criterion_main, Criterion};

use nanokerr::{
    derive_circuit, frequency_shift, mb_conductivity, steady_state, surface_impedance, GapModel,
};
use nanokerr_bench::{bistable_drive, device_design, measured_cavity, monostable_drive};

fn conductivity(c: &mut Criterion) {
    let mut group = c.benchmark_group("mb");
    group.bench_function("conductivity_point", |b| {
        b.iter(|| mb_conductivity(black_box(6.3e9), black_box(1.0), 2.9, GapModel::Tanh).unwrap())
    });
    group.bench_function("conductivity_point_exact_gap", |b| {
        b.iter(|| mb_conductivity(black_box(6.3e9), black_box(1.0), 2.9, GapModel::Exact).unwrap())
    });
    group.bench_function("surface_impedance", |b| {
        b.iter(|| {
            surface_impedance(black_box(6.3e9), 1.0, 2.9, 1.6e-6, 14e-9, GapModel::Tanh).unwrap()
        })
    });
    let temps: Vec<f64> = (0..23).map(|i| 0.1 + 1.1 * i as f64 / 22.0).collect();
    group.bench_function("shift_curve_23_points", |b| {
        b.iter(|| frequency_shift(6.3e9, black_box(&temps), 2.9, 0.9, GapModel::Tanh).unwrap())
    });
    group.finish();
}

fn duffing(c: &mut Criterion) {
    let cavity = measured_cavity();
    let mut group = c.benchmark_group("duffing");
    group.bench_function("steady_state_single_root", |b| {
        let drive = monostable_drive();
        b.iter(|| steady_state(black_box(&cavity), black_box(&drive)).unwrap())
    });
    group.bench_function("steady_state_bistable", |b| {
        let drive = bistable_drive();
        b.iter(|| steady_state(black_box(&cavity), black_box(&drive)).unwrap())
    });
    group.finish();
}

fn circuit(c: &mut Criterion) {
    let design = device_design();
    c.bench_function("derive_circuit", |b| {
        b.iter(|| derive_circuit(black_box(&design)).unwrap())
    });
}

criterion_group!(benches, conductivity, duffing, circuit);
criterion_main!(benches);
