//! Parallel vs sequential throughput on the data-parallel hot paths:
//! figure-grid evaluation and per-mode flattening ranks.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use borderrank::exponent::{generate_grid, GridFamily, GridSpec, RangeSpec};
use borderrank::par::{map_slice, map_slice_seq};
use borderrank::tensor::{flattening, mamu};

fn grid_cells() -> Vec<(usize, f64)> {
    let ns: Vec<usize> = (2..=50).step_by(2).collect();
    let ps: Vec<f64> = (1..200).map(|i| i as f64 * 0.005).collect();
    let mut cells = Vec::new();
    for &n in &ns {
        for &p in &ps {
            cells.push((n, p));
        }
    }
    cells
}

fn bench_grid(c: &mut Criterion) {
    let mut group = c.benchmark_group("dome_grid");
    let cells = grid_cells();
    group.bench_function("parallel", |b| {
        b.iter(|| {
            map_slice(&cells, |&(n, p)| {
                borderrank::exponent::dome_bounds(n, p).unwrap().delta
            })
        })
    });
    group.bench_function("sequential", |b| {
        b.iter(|| {
            map_slice_seq(&cells, |&(n, p)| {
                borderrank::exponent::dome_bounds(n, p).unwrap().delta
            })
        })
    });
    group.bench_function("generate_grid", |b| {
        let spec = GridSpec::figure_defaults(GridFamily::Dome);
        b.iter_batched(
            || spec.clone(),
            |s| generate_grid(&s).unwrap(),
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

fn bench_flattening_ranks(c: &mut Criterion) {
    let mut group = c.benchmark_group("flattening_ranks");
    let t = mamu(3, 3, 3);
    let modes: Vec<usize> = (0..3).collect();
    group.bench_function("parallel", |b| {
        b.iter(|| map_slice(&modes, |&m| flattening(&t, m).unwrap().rank()))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| map_slice_seq(&modes, |&m| flattening(&t, m).unwrap().rank()))
    });
    group.finish();
}

criterion_group!(benches, bench_grid, bench_flattening_ranks);
criterion_main!(benches);
