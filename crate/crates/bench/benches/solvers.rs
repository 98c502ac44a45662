//! Benchmarks for the compatibility decision procedures and norm programs.
//!
//! Families are drawn from a fixed seed so runs are comparable.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gpt_compat::compat::gamma_of_dichotomic_family;
use gpt_compat::sampling::{random_family, rng};
use gpt_compat::tensor_norms::XNorm;
use gpt_compat::{
    build_outcome_space, gamma_of_family, injective_norm_l1, is_compatible, is_compatible_via_extension,
    jewel_inclusion, Gpt, MeasurementFamily, NormTag, SolveOptions, TensorElement,
};
use std::hint::black_box;

fn models() -> Vec<Gpt> {
    vec![
        Gpt::make_classical(3).unwrap(),
        Gpt::make_hypercube(2).unwrap(),
        Gpt::make_hypercube(3).unwrap(),
        Gpt::make_crosspolytope(3).unwrap(),
    ]
}

fn families(gpt: &Gpt, k: &[usize], count: usize) -> Vec<MeasurementFamily> {
    let mut r = rng(42);
    (0..count).map(|_| random_family(gpt, k, 0.3, &mut r).unwrap()).collect()
}

// =============================================================================
// Decision procedures
// =============================================================================

fn bench_decisions(c: &mut Criterion) {
    let opts = SolveOptions::default();
    let mut group = c.benchmark_group("decide");
    for gpt in models() {
        for k in [vec![2, 2], vec![3, 3], vec![2, 2, 2]] {
            let fams = families(&gpt, &k, 8);
            let id = format!("{} k={k:?}", gpt.name());
            group.bench_with_input(BenchmarkId::new("joint", &id), &fams, |b, fams| {
                b.iter(|| fams.iter().filter(|f| is_compatible(&gpt, f, &opts).unwrap().compatible).count())
            });
            group.bench_with_input(BenchmarkId::new("extension", &id), &fams, |b, fams| {
                b.iter(|| fams.iter().filter(|f| is_compatible_via_extension(&gpt, f, &opts).unwrap().compatible).count())
            });
            group.bench_with_input(BenchmarkId::new("jewel", &id), &fams, |b, fams| {
                b.iter(|| fams.iter().filter(|f| jewel_inclusion(&gpt, f, None, &opts).unwrap()).count())
            });
        }
    }
    group.finish();
}

// =============================================================================
// Compatibility degree: bisection against one ρ-norm program pair
// =============================================================================

fn bench_degree(c: &mut Criterion) {
    let opts = SolveOptions::default();
    let mut group = c.benchmark_group("degree");
    group.sample_size(20);
    for gpt in [Gpt::make_hypercube(2).unwrap(), Gpt::make_crosspolytope(3).unwrap()] {
        let fam = families(&gpt, &[2, 2, 2], 1).remove(0);
        group.bench_function(BenchmarkId::new("bisection", gpt.name()), |b| {
            b.iter(|| gamma_of_family(&gpt, black_box(&fam), 1e-6, &opts).unwrap())
        });
        group.bench_function(BenchmarkId::new("rho", gpt.name()), |b| {
            b.iter(|| gamma_of_dichotomic_family(&gpt, black_box(&fam), &opts).unwrap())
        });
    }
    group.finish();
}

// =============================================================================
// Building blocks
// =============================================================================

fn bench_building_blocks(c: &mut Criterion) {
    let opts = SolveOptions::default();
    let mut group = c.benchmark_group("blocks");
    for k in [vec![2; 4], vec![3, 3, 3], vec![4, 4, 4, 4]] {
        group.bench_with_input(BenchmarkId::new("outcome_space", format!("{k:?}")), &k, |b, k| {
            b.iter(|| build_outcome_space(black_box(k)).unwrap())
        });
    }
    for g in [8, 12, 16] {
        let z = TensorElement::new((0..g).map(|i| (0..4).map(|c| ((i * 7 + c * 3) % 5) as f64 - 2.0).collect()).collect());
        group.bench_with_input(BenchmarkId::new("injective_l1", g), &z, |b, z| {
            b.iter(|| injective_norm_l1(z, XNorm::Tag(NormTag::L2), &opts).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_decisions, bench_degree, bench_building_blocks);
criterion_main!(benches);
