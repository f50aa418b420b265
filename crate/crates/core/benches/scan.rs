use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use h2sim::chemistry::{default_grid, exact_curve, H2Model};
use h2sim::exec::Execution;
use h2sim::vqe::{run_vqe, EstimateOptions, Shots, VqeSettings};

fn modes() -> [(&'static str, Execution); 2] {
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)]
}

fn theta_scan(c: &mut Criterion) {
    let h = H2Model::at(0.75).unwrap().hamiltonian;
    let settings = VqeSettings {
        estimate: EstimateOptions { shots: Shots::Count(10_000), seed: 1, ..Default::default() },
        ..Default::default()
    };
    let mut group = c.benchmark_group("vqe_scan_1000x4");
    group.sample_size(10);
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| run_vqe(&h, 0.75, &settings, exec).unwrap())
        });
    }
    group.finish();
}

fn curve(c: &mut Criterion) {
    let grid = default_grid();
    let mut group = c.benchmark_group("exact_curve_52");
    group.sample_size(10);
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| exact_curve(&grid, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, theta_scan, curve);
criterion_main!(benches);
