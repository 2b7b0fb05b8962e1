//! Sequential vs parallel timings for the three data-parallel kernels:
//! grid construction, the intrinsic Laplacian sweep, and the full iterate
//! stack used by classification.
//!
//! Run with `cargo bench -p tubetype`; add `--no-default-features` to time
//! the build without rayon (both mode labels then run single-threaded).

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;
use tubetype::beltrami::{
    laplace_beltrami_vec, position_fields, GridShape, MetricChoice, MetricField,
};
use tubetype::chentype::IterateMatrix;
use tubetype::geometry::{CurveSpec, SurfaceGrid, SurfaceSpec};
use tubetype::EvalMode;

const MODES: [(&str, EvalMode); 2] = [
    ("sequential", EvalMode::Sequential),
    ("parallel", EvalMode::Parallel),
];

fn helix_tube() -> SurfaceSpec {
    SurfaceSpec::Tube {
        curve: CurveSpec::Helix {
            radius: 1.0,
            pitch: 1.0,
        },
        radius: 0.5,
    }
}

fn bench_grid_build(c: &mut Criterion) {
    let spec = helix_tube();
    let (nu, nv) = (128, 1024);
    let mut group = c.benchmark_group("grid_build/helix_tube");
    group.throughput(Throughput::Elements((nu * nv) as u64));
    group.sample_size(30);
    for (label, mode) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(label), &mode, |b, &mode| {
            b.iter(|| SurfaceGrid::build(black_box(&spec), nu, nv, 0.2, mode).unwrap());
        });
    }
    group.finish();
}

fn bench_laplacian(c: &mut Criterion) {
    let mut group = c.benchmark_group("third_form_laplacian/sphere");
    group.sample_size(40);
    for n in [96usize, 192] {
        let spec = SurfaceSpec::Sphere {
            radius: 1.0,
            center: [0.0; 3],
        };
        let grid = SurfaceGrid::build(&spec, n, n, 0.0, EvalMode::Parallel).unwrap();
        let shape = GridShape::of(&grid);
        let metric = MetricField::from_grid(&grid, MetricChoice::Third);
        let x = position_fields(&grid);
        group.throughput(Throughput::Elements((n * n) as u64));
        for (label, mode) in MODES {
            group.bench_with_input(
                BenchmarkId::new(label, format!("{n}x{n}")),
                &mode,
                |b, &mode| {
                    b.iter(|| laplace_beltrami_vec(shape, black_box(&metric), black_box(&x), mode));
                },
            );
        }
    }
    group.finish();
}

fn bench_iterate_stack(c: &mut Criterion) {
    let grid = SurfaceGrid::build(&helix_tube(), 128, 1024, 0.2, EvalMode::Parallel).unwrap();
    let mut group = c.benchmark_group("iterate_stack/helix_tube");
    group.throughput(Throughput::Elements(grid.len() as u64));
    group.sample_size(20);
    for (label, mode) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(label), &mode, |b, &mode| {
            b.iter(|| {
                IterateMatrix::from_grid(black_box(&grid), MetricChoice::Third, 3, mode).unwrap()
            });
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_grid_build,
    bench_laplacian,
    bench_iterate_stack
);
criterion_main!(benches);
