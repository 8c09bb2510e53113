use criterion::{black_box, criterion_group, criterion_main, Criterion};

use nanokerr::{
    coplanar_pad_field, coupling_rate, fit_inverse_volume, fit_resonance, fit_tc, frequency_shift,
    GapModel, KerrVolumePoint, OverlapConfig,
};
use nanokerr_bench::{device_pads, noisy_trace, sample_box};

fn resonance(c: &mut Criterion) {
    let trace = noisy_trace();
    c.bench_function("fit_resonance_401_points", |b| {
        b.iter(|| fit_resonance(black_box(&trace)).unwrap())
    });
}

fn critical_temperature(c: &mut Criterion) {
    let temps: Vec<f64> = (0..23).map(|i| 0.1 + 1.1 * i as f64 / 22.0).collect();
    let f0s = frequency_shift(6.3e9, &temps, 2.9, 0.9, GapModel::Tanh)
        .unwrap()
        .resonances_hz(6.3e9);
    c.bench_function("fit_tc_23_points", |b| {
        b.iter(|| fit_tc(black_box(&temps), black_box(&f0s), 0.9, GapModel::Tanh).unwrap())
    });
}

fn inverse_volume(c: &mut Criterion) {
    let points: Vec<KerrVolumePoint> = (0..24)
        .map(|i| {
            let volume_m3 = 1e-22 * 10f64.powf(i as f64 / 8.0);
            KerrVolumePoint {
                volume_m3,
                kerr_hz: 1.4e-17 / volume_m3,
                kerr_sigma_hz: Some(0.05e-17 / volume_m3),
            }
        })
        .collect();
    c.bench_function("fit_inverse_volume_24_points", |b| {
        b.iter(|| fit_inverse_volume(black_box(&points)).unwrap())
    });
}

fn overlap(c: &mut Criterion) {
    let pads = device_pads();
    let bx = sample_box();
    let mut group = c.benchmark_group("overlap");
    group.sample_size(20);
    group.bench_function("pad_field_11x11", |b| {
        b.iter(|| coplanar_pad_field(black_box(&pads), 11, 11).unwrap())
    });
    let field = coplanar_pad_field(&pads, 11, 11).unwrap();
    let config = OverlapConfig {
        substrate_permittivity: 11.45,
        ..OverlapConfig::default()
    };
    group.bench_function("coupling_rate", |b| {
        b.iter(|| coupling_rate(black_box(&field), &bx, 7.0e9, &config).unwrap())
    });
    group.finish();
}

criterion_group!(benches, resonance, critical_temperature, inverse_volume, overlap);
criterion_main!(benches);
