//! Per-mode solve times of every model on the reference strip, and the modal
//! projection of the reference source.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use viscoacoustic::analysis::{solve_model, Route};
use viscoacoustic::exact::solve_exact_mode;
use viscoacoustic::pressure::solve_pressure_model;
use viscoacoustic::sources::{project_to_modes, SourceSpec};
use viscoacoustic::velocity::solve_velocity_model;
use viscoacoustic::{Discretization, DiscretizationSpec, MaterialParams, ModelOrder, SeparableGeometry};

fn mode_solves(c: &mut Criterion) {
    let geom = SeparableGeometry::unit_strip();
    let params = MaterialParams::reference();
    let disc = Discretization::for_params(&geom, &params, &DiscretizationSpec::default()).unwrap();
    let set = project_to_modes(&SourceSpec::reference(), &geom, &disc.grid, 64).unwrap();
    let ms = set.mode(3).unwrap();

    c.bench_function("exact mode", |b| b.iter(|| solve_exact_mode(&params, &geom, black_box(ms), &disc).unwrap()));
    for order in ModelOrder::ALL {
        c.bench_function(&format!("pressure mode, order {order}"), |b| {
            b.iter(|| solve_pressure_model(&params, &geom, order, black_box(ms), &disc).unwrap())
        });
        c.bench_function(&format!("velocity mode, order {order}"), |b| {
            b.iter(|| solve_velocity_model(&params, &geom, order, black_box(ms), &disc).unwrap())
        });
    }
    let active = set.active(1e-24);
    c.bench_function("all modes, order 2", |b| {
        b.iter(|| solve_model(&params, &geom, ModelOrder::Two, Route::Pressure, black_box(&active), &disc).unwrap())
    });
}

fn projection(c: &mut Criterion) {
    let geom = SeparableGeometry::unit_strip();
    let params = MaterialParams::reference();
    let disc = Discretization::for_params(&geom, &params, &DiscretizationSpec::default()).unwrap();
    c.bench_function("project reference source, K = 64", |b| {
        b.iter(|| project_to_modes(black_box(&SourceSpec::reference()), &geom, &disc.grid, 64).unwrap())
    });
}

criterion_group!(benches, mode_solves, projection);
criterion_main!(benches);
