use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use cascade_net::cascade::{attack_curve, degree_order, infection_set, CurveConfig};
use cascade_net::generators::generate;
use cascade_net::{AttackStrategy, Aggregate, GenParams, NodeSet, RngStream, ThresholdAssignment, ThresholdMode};

fn generators(c: &mut Criterion) {
    let mut group = c.benchmark_group("generate");
    group.sample_size(10);
    for (name, params) in [
        ("er", GenParams::er(10_000, 10.0 / 9_999.0, 1)),
        ("pa", GenParams::pa(10_000, 10, 1)),
        ("security", GenParams::security(10_000, 10, 1.5, 1)),
        ("overlap", GenParams::overlap(10_000, 5, 5, 1.5, 1)),
    ] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &params, |b, p| b.iter(|| generate(p).unwrap()));
    }
    group.finish();
}

fn cascades(c: &mut Criterion) {
    let g = generate(&GenParams::pa(10_000, 10, 1)).unwrap();
    let order = degree_order(&g);
    let s = NodeSet::from_ids(g.n(), order[..47].iter().copied());
    let mut rng = RngStream::new(1, 0);
    let thr = ThresholdAssignment::assign(&g, ThresholdMode::Random, &mut rng).unwrap();
    c.bench_function("infection_set/pa-10k-top47", |b| b.iter(|| infection_set(&g, &thr, black_box(&s))));

    let cfg = CurveConfig {
        strategy: AttackStrategy::TopDegree,
        ks: CurveConfig::up_to(10),
        thresholds: ThresholdMode::Random,
        trials: 10,
        agg: Aggregate::Max,
        master_seed: 1,
        attack_stream: 2000,
    };
    let mut group = c.benchmark_group("attack_curve");
    group.sample_size(10);
    group.bench_function("pa-10k-k10-t10", |b| b.iter(|| attack_curve(&g, &cfg).unwrap()));
    group.finish();
}

criterion_group!(benches, generators, cascades);
criterion_main!(benches);
