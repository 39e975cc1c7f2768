use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qwalk_core::lattice::{run, LatticeState};
use qwalk_core::quench::time_grid;
use qwalk_core::scenario::Preset;
use qwalk_core::{band_structure, phase_diagram, MomentumGrid, Spinor, WalkParams};

fn bands(c: &mut Criterion) {
    let p = WalkParams::standard(8.0 * PI / 9.0, -PI / 3.0);
    let mut g = c.benchmark_group("band_structure");
    for m in [1024, 8192] {
        let grid = MomentumGrid::new(m).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(m), &grid, |b, &grid| {
            b.iter(|| band_structure(black_box(&p), grid))
        });
    }
    g.finish();
}

fn diagram(c: &mut Criterion) {
    c.bench_function("phase_diagram_64", |b| b.iter(|| phase_diagram(black_box(64))));
}

fn dtop(c: &mut Criterion) {
    let q = Preset::by_name("fig1").unwrap().quench().unwrap();
    c.bench_function("dtop_at_fig1", |b| b.iter(|| q.dtop_at(black_box(3.3)).unwrap()));
    let times = time_grid(0.05, 10.0);
    let mut g = c.benchmark_group("trace");
    g.sample_size(10);
    g.bench_function("fig1_dt0.05", |b| b.iter(|| q.trace(black_box(&times))));
    g.finish();
}

fn lattice(c: &mut Criterion) {
    let p = WalkParams::standard(8.0 * PI / 9.0, -PI / 3.0);
    let init = LatticeState::single_site(0, Spinor::down_y());
    c.bench_function("lattice_200_steps", |b| b.iter(|| run(black_box(&init), &p, 200)));
}

criterion_group!(benches, bands, diagram, dtop, lattice);
criterion_main!(benches);
