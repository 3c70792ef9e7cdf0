use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qvseg::blocks::{example_circuit, BlockKind};
use qvseg::{build_segmentation_circuit, quantum_cost};

fn pipeline(c: &mut Criterion) {
    let mut g = c.benchmark_group("build_segmentation_circuit");
    for (m, n, q) in [(2, 2, 3), (4, 4, 8)] {
        g.bench_with_input(BenchmarkId::from_parameter(format!("m{m}n{n}q{q}")), &(m, n, q), |b, &(m, n, q)| {
            b.iter(|| build_segmentation_circuit(m, n, q, 1).unwrap())
        });
    }
    g.finish();
}

fn blocks(c: &mut Criterion) {
    let mut g = c.benchmark_group("block_cost");
    for kind in [BlockKind::Comparator, BlockKind::AbsSubtractor] {
        g.bench_function(kind.name(), |b| {
            b.iter(|| (2..=8).map(|q| quantum_cost(&example_circuit(kind, q).unwrap()).total_cost).sum::<u64>())
        });
    }
    g.finish();
}

criterion_group!(benches, pipeline, blocks);
criterion_main!(benches);
