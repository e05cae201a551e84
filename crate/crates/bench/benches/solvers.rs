use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use zerocycle::constructive::{build_extremal_digraph, lemma_one_solve, theorem_main_solve};
use zerocycle::group::{classify_near_ap, shift_set};
use zerocycle::oracle::find_zero_cycle;
use zerocycle::{GroupSpec, ResidueSet, SearchBudget, WeightedDigraph};

/// Fixed scrambled weighting of the complete digraph.
fn scrambled(k: u32, n: usize) -> WeightedDigraph {
    let z = GroupSpec::cyclic(k).unwrap();
    WeightedDigraph::complete_with(z.clone(), n, |i, j| z.elem((i * 7 + j * 3 + i * j) as i64))
}

fn oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("find_zero_cycle");
    for k in [5u32, 7, 9] {
        let free = build_extremal_digraph(k).unwrap();
        g.bench_with_input(BenchmarkId::new("extremal_none", k), &free, |b, w| {
            b.iter(|| find_zero_cycle(black_box(w), 2, SearchBudget::unlimited()).unwrap())
        });
    }
    g.finish();
}

fn solvers(c: &mut Criterion) {
    let mut g = c.benchmark_group("solvers");
    for k in [4u32, 6, 8] {
        let n = k as usize + 6;
        let w = scrambled(k, n);
        g.bench_with_input(BenchmarkId::new("theorem_main", k), &w, |b, w| {
            b.iter(|| theorem_main_solve(black_box(w)).unwrap())
        });
        let r = k as usize - 1;
        g.bench_with_input(BenchmarkId::new("lemma_one", k), &w, |b, w| {
            b.iter(|| lemma_one_solve(black_box(w), 0, 1, r).unwrap())
        });
    }
    g.finish();
}

fn near_ap(c: &mut Criterion) {
    let a = ResidueSet::new(16, [0, 2, 4, 6, 8, 10, 12]).unwrap();
    c.bench_function("shift_set_z16", |b| b.iter(|| shift_set(black_box(&a))));
    c.bench_function("classify_all_z12", |b| {
        b.iter(|| {
            (0..1u64 << 12)
                .filter(|&m| classify_near_ap(&ResidueSet::from_mask(12, m)).is_ok())
                .count()
        })
    });
}

criterion_group!(benches, oracle, solvers, near_ap);
criterion_main!(benches);
