//! Benchmarks for the three data-parallel kernels. Group names carry the
//! active execution mode so reports from `cargo bench` (parallel) and
//! `cargo bench --no-default-features` (sequential) can be compared side
//! by side.

use criterion::{criterion_group, criterion_main, Criterion};

use monopoint::adele::{congruence_solutions, standard_schedule};
use monopoint::ffpoly::{Field, MultiPoly};
use monopoint::lifting::solve_all_monomial_points;
use monopoint::partition::divisibility_equivalence_sweep;

const MODE: &str = if cfg!(feature = "parallel") { "parallel" } else { "sequential" };

fn poly(field: &Field, num_vars: usize, terms: &[(i64, &[u32])]) -> MultiPoly {
    let list: Vec<(i64, Vec<u32>)> = terms.iter().map(|&(c, t)| (c, t.to_vec())).collect();
    MultiPoly::from_int_terms(field, num_vars, &list).unwrap()
}

fn bench_sweep(c: &mut Criterion) {
    let field = Field::prime(3).unwrap();
    let mut group = c.benchmark_group(format!("sweep-{MODE}"));
    group.sample_size(10);
    group.bench_function("f3-3terms-box4", |b| {
        b.iter(|| {
            let rep = divisibility_equivalence_sweep(&field, 3, -4, 4, 6, 6).unwrap();
            assert!(rep.mismatches.is_empty());
            rep.pairs_checked
        })
    });
    group.finish();
}

fn bench_congruence(c: &mut Criterion) {
    let field = Field::prime(3).unwrap();
    let f = poly(
        &field,
        2,
        &[(1, &[0, 1, 0]), (1, &[0, 0, 1]), (-1, &[1, 0, 0]), (-1, &[2, 0, 0])],
    );
    let level = standard_schedule(&field, 3, 1).unwrap().pop().unwrap();
    let mut group = c.benchmark_group(format!("congruence-{MODE}"));
    group.sample_size(10);
    group.bench_function("f3-two-term-deg3", |b| {
        b.iter(|| congruence_solutions(std::slice::from_ref(&f), &level).unwrap().residues.len())
    });
    group.finish();
}

fn bench_solver(c: &mut Criterion) {
    let field = Field::prime(2).unwrap();
    // Six-term system: many joint partition choices to solve and merge.
    let f1 = poly(
        &field,
        3,
        &[
            (1, &[0, 1, 0, 0]),
            (1, &[0, 0, 1, 0]),
            (1, &[0, 0, 0, 1]),
            (1, &[1, 0, 0, 0]),
            (1, &[2, 0, 0, 0]),
            (1, &[3, 0, 0, 0]),
        ],
    );
    let f2 = poly(&field, 3, &[(1, &[0, 1, 1, 0]), (1, &[1, 0, 0, 1])]);
    let mut group = c.benchmark_group(format!("solver-{MODE}"));
    group.sample_size(10);
    group.bench_function("f2-six-term-system", |b| {
        b.iter(|| solve_all_monomial_points(&[f1.clone(), f2.clone()]).unwrap().cosets.len())
    });
    group.finish();
}

criterion_group!(benches, bench_sweep, bench_congruence, bench_solver);
criterion_main!(benches);
