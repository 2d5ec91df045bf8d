use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use rootlab::monodromy::{certify, Certifiable, CertifyControls};
use rootlab::path::{CoefficientPath, Preset};
use rootlab::quad::{grid_scan, Rect, SelectorId};
use rootlab::solver::solve_all;
use rootlab::stability::{verify_bound, BoundGrid, DomainBox};
use rootlab::track::track;
use rootlab::{SolveControls, TrackControls};
use rootlab_bench::spiral_poly;

fn solver(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve_all");
    for n in [2, 5, 10, 20] {
        let p = spiral_poly(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &p, |b, p| {
            b.iter(|| solve_all(black_box(p), &SolveControls::default()).unwrap())
        });
    }
    g.finish();
}

fn quad(c: &mut Criterion) {
    let rect = Rect::new(-4.0, 4.0, -4.0, 4.0).unwrap();
    c.bench_function("quad_grid_scan_100", |b| {
        b.iter(|| grid_scan(SelectorId::PlusSet, black_box(&rect), 100))
    });
}

fn tracking(c: &mut Criterion) {
    let path = CoefficientPath::preset(Preset::QuadComplexLoop);
    c.bench_function("track_quad_loop", |b| {
        b.iter(|| track(black_box(&path), &TrackControls::default()).unwrap())
    });
}

fn certificates(c: &mut Criterion) {
    let ctl = CertifyControls::default();
    let mut g = c.benchmark_group("certify");
    for which in [Certifiable::Deg2c, Certifiable::Deg4r, Certifiable::Deg5r] {
        g.bench_function(format!("{which:?}"), |b| b.iter(|| certify(which, &ctl).unwrap()));
    }
    g.finish();
}

fn bound(c: &mut Criterion) {
    let a = DomainBox::real(&[[-2.0, -0.5], [-2.0, -0.5]]).unwrap();
    let w = DomainBox::real(&[[-1.0, 1.0], [-1.0, 1.0]]).unwrap();
    let grid = BoundGrid { a: 5, w: 3, steps: 500 };
    let mut g = c.benchmark_group("verify_bound");
    g.sample_size(10);
    g.bench_function("n2_small_grid", |b| b.iter(|| verify_bound(&a, &w, grid, 50.0).unwrap()));
    g.finish();
}

criterion_group!(benches, solver, quad, tracking, certificates, bound);
criterion_main!(benches);
