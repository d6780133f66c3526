use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use rendezvous_core::oneround::{orient_one_round, Graph};
use rendezvous_core::schedules::{general_schedule, pair_schedule, ChannelSet};
use rendezvous_core::simulator::{simulate_pair, sweep_shifts};
use rendezvous_core::strings::{decode_async, encode_async, BitString};

fn bench_encoding(c: &mut Criterion) {
    let mut group = c.benchmark_group("encoding");
    for len in [4usize, 8, 16, 32] {
        let input = BitString::new((0..len).map(|i| i % 3 == 0).collect());
        group.bench_with_input(BenchmarkId::new("encode", len), &input, |b, x| {
            b.iter(|| encode_async(black_box(x)).unwrap())
        });
        let word = encode_async(&input).unwrap();
        group.bench_with_input(BenchmarkId::new("round_trip", len), &word, |b, w| {
            b.iter(|| decode_async(black_box(w)).unwrap())
        });
    }
    group.finish();
}

fn bench_schedules(c: &mut Criterion) {
    let mut group = c.benchmark_group("schedules");
    let set = ChannelSet::new(vec![3, 9, 17, 30, 41, 55], 64).unwrap();
    group.bench_function("general_build_k6_n64", |b| {
        b.iter(|| general_schedule(black_box(&set)))
    });
    let schedule = general_schedule(&set);
    group.bench_function("general_eval_4096_slots", |b| {
        b.iter(|| {
            let mut acc = 0u64;
            for t in 0..4096u64 {
                acc += schedule.channel_at(black_box(t)).unwrap() as u64;
            }
            acc
        })
    });
    group.finish();
}

fn bench_simulation(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulation");
    let a = general_schedule(&ChannelSet::new(vec![1, 9, 17, 25], 64).unwrap());
    let b_sched = general_schedule(&ChannelSet::new(vec![25, 33, 41], 64).unwrap());
    group.bench_function("simulate_pair_offset", |bench| {
        bench.iter(|| simulate_pair(black_box(&a), black_box(&b_sched), 0, 137, 100_000))
    });
    let pa = pair_schedule(&ChannelSet::new(vec![1, 2], 16).unwrap()).unwrap();
    let pb = pair_schedule(&ChannelSet::new(vec![2, 3], 16).unwrap()).unwrap();
    group.bench_function("sweep_pair_full_period", |bench| {
        bench.iter(|| sweep_shifts(black_box(&pa), black_box(&pb), 18, 18))
    });
    group.finish();
}

fn bench_orientation(c: &mut Criterion) {
    let mut group = c.benchmark_group("orientation");
    let k5 = Graph::new(
        5,
        (1..=5u32).flat_map(|a| (a + 1..=5).map(move |b| (a, b))).collect(),
    )
    .unwrap();
    group.bench_function("orient_k5_16_rounds", |b| {
        b.iter(|| orient_one_round(black_box(&k5), 7, 16))
    });
    group.finish();
}

criterion_group!(benches, bench_encoding, bench_schedules, bench_simulation, bench_orientation);
criterion_main!(benches);
