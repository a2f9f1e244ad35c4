use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion, Throughput};
use patrol_bench::workload;
use patrol_core::oracle::naive_idleness;
use patrol_core::{discretize, find_recurrence, CostSpec, Tick, Timeline};

fn generation(c: &mut Criterion) {
    let mut g = c.benchmark_group("greedy_random");
    for horizon in [10_000u64, 50_000] {
        g.bench_with_input(BenchmarkId::from_parameter(horizon), &horizon, |b, &h| {
            b.iter(|| workload(50, 5, h, 1))
        });
    }
    g.finish();
}

fn discretization(c: &mut Criterion) {
    let mut g = c.benchmark_group("discretize");
    for horizon in [10_000u64, 50_000] {
        let (env, strat) = workload(50, 5, horizon, 1);
        g.throughput(Throughput::Elements(strat.events.len() as u64));
        g.bench_with_input(BenchmarkId::from_parameter(horizon), &strat, |b, s| {
            b.iter(|| discretize(&env, s, Tick(3)).unwrap())
        });
    }
    g.finish();
}

fn idleness(c: &mut Criterion) {
    let (env, strat) = workload(50, 5, 50_000, 2);
    let probes: Vec<Tick> = (0..1_000).map(|i| Tick(i * 50)).collect();
    let mut g = c.benchmark_group("idleness");
    g.throughput(Throughput::Elements(probes.len() as u64));
    g.bench_function("timeline_build", |b| b.iter(|| Timeline::new(&env, &strat)));
    let tl = Timeline::new(&env, &strat);
    g.bench_function("indexed", |b| {
        b.iter(|| probes.iter().map(|&t| tl.idleness(t).unwrap().0[0]).max())
    });
    g.sample_size(10);
    g.bench_function("naive_oracle", |b| {
        b.iter(|| probes.iter().map(|&t| naive_idleness(&env, &strat, t).0[0]).max())
    });
    g.finish();

    c.bench_function("cost/gmi_full_window", |b| {
        b.iter(|| tl.cost(CostSpec::GMI, (Tick::ZERO, strat.horizon)).unwrap())
    });
}

fn recurrence(c: &mut Criterion) {
    let mut g = c.benchmark_group("find_recurrence");
    g.sample_size(10);
    for horizon in [50_000u64, 100_000] {
        let (env, strat) = workload(50, 5, horizon, 3);
        g.bench_with_input(BenchmarkId::from_parameter(horizon), &horizon, |b, _| {
            b.iter_batched(
                || discretize(&env, &strat, Tick(2)).unwrap(),
                |disc| find_recurrence(&env, &disc).ok(),
                BatchSize::LargeInput,
            )
        });
    }
    g.finish();
}

criterion_group!(benches, generation, discretization, idleness, recurrence);
criterion_main!(benches);
