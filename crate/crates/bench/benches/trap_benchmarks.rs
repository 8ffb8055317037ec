//! Benchmarks for the hot paths: potential evaluation, trap finding, and a
//! full feasibility-grid cell.

use criterion::{criterion_group, criterion_main, Criterion};

use wgmtrap_core::config::{Config, FeasibilitySpec};
use wgmtrap_core::sweep::evaluate_cell;

fn default_system() -> wgmtrap_core::TrapSystem {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../presets/default.json");
    let text = std::fs::read_to_string(path).expect("default preset readable");
    Config::from_json(&text).unwrap().system().unwrap()
}

fn bench_potential(c: &mut Criterion) {
    let sys = default_system().with_red_photons(3.085872e5);
    c.bench_function("potential_total_120nm", |b| {
        b.iter(|| std::hint::black_box(sys.potential_total(std::hint::black_box(120e-9))))
    });
}

fn bench_find_trap(c: &mut Criterion) {
    let sys = default_system().with_red_photons(3.085872e5);
    c.bench_function("find_trap_default_window", |b| {
        b.iter(|| std::hint::black_box(sys.find_trap().unwrap()))
    });
}

fn bench_grid_cell(c: &mut Criterion) {
    let sys = default_system();
    let feas = FeasibilitySpec::default();
    c.bench_function("grid_cell_solve_and_audit", |b| {
        b.iter(|| std::hint::black_box(evaluate_cell(&sys, &feas, 2.4e5, 120e-9)))
    });
}

criterion_group!(benches, bench_potential, bench_find_trap, bench_grid_cell);
criterion_main!(benches);
