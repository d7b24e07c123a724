//! Sequential against parallel execution for the data-parallel stages.
//!
//! Built with `--no-default-features` both arms run sequentially, which
//! measures the overhead of the dispatch layer alone.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use smallcover::classify::group_classes;
use smallcover::coloring::{palette_with, published_vector, z25_extension, Color};
use smallcover::polytopes::{build_120cell, build_cube};
use smallcover::search::{enumerate, Engine, SearchTask};
use smallcover::symmetries::{cube_symmetries, symmetry_group_120cell_with};
use smallcover::topology::{betti_table, Field};
use smallcover::Execution;

const MODES: [(Execution, &str); 2] = [(Execution::Sequential, "sequential"), (Execution::Parallel, "parallel")];

fn recursion(c: &mut Criterion) {
    let cube = build_cube(4).unwrap();
    let all: Vec<Color> = (1..16).collect();
    let cell = build_120cell().unwrap();
    let five = palette_with(4, &[15]);
    let mut group = c.benchmark_group("recursion");
    group.sample_size(10);
    for (exec, name) in MODES {
        group.bench_with_input(BenchmarkId::new("cube4", name), &exec, |b, &exec| {
            b.iter(|| enumerate(&SearchTask::new(&cube, &all).with_execution(exec), Engine::Recursion).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("120cell-15", name), &exec, |b, &exec| {
            b.iter(|| enumerate(&SearchTask::new(&cell, &five).exact().with_execution(exec), Engine::Recursion).unwrap())
        });
    }
    group.finish();
}

fn pasting(c: &mut Criterion) {
    let cell = build_120cell().unwrap();
    let five = palette_with(4, &[15]);
    let mut group = c.benchmark_group("block_pasting");
    group.sample_size(10);
    for (exec, name) in MODES {
        group.bench_with_input(BenchmarkId::new("120cell-15", name), &exec, |b, &exec| {
            b.iter(|| enumerate(&SearchTask::new(&cell, &five).exact().with_execution(exec), Engine::BlockPaste).unwrap())
        });
    }
    group.finish();
}

fn symmetry_and_grouping(c: &mut Criterion) {
    let cell = build_120cell().unwrap();
    let cube = build_cube(4).unwrap();
    let all: Vec<Color> = (1..16).collect();
    let vs = enumerate(&SearchTask::new(&cube, &all), Engine::Recursion).unwrap();
    let g = cube_symmetries(4);
    let mut group = c.benchmark_group("symmetry");
    group.sample_size(10);
    for (exec, name) in MODES {
        group.bench_with_input(BenchmarkId::new("120cell-group", name), &exec, |b, &exec| {
            b.iter(|| symmetry_group_120cell_with(black_box(&cell), exec).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("cube4-classes", name), &exec, |b, &exec| {
            b.iter(|| group_classes(&vs, &g, 4, exec).unwrap())
        });
    }
    group.finish();
}

fn homology(c: &mut Criterion) {
    let cell = build_120cell().unwrap();
    let delta = z25_extension(&published_vector(59)).unwrap();
    let mut group = c.benchmark_group("homology");
    group.sample_size(10);
    for (exec, name) in MODES {
        group.bench_with_input(BenchmarkId::new("double-cover-59", name), &exec, |b, &exec| {
            b.iter(|| betti_table(&cell, &delta, Field::Rationals, exec))
        });
    }
    group.finish();
}

criterion_group!(benches, recursion, pasting, symmetry_and_grouping, homology);
criterion_main!(benches);
