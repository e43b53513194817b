use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use steane_rc::channels::random_cptp;
use steane_rc::experiments::{haar_average_gains, HaarQuadrature};
use steane_rc::{ExecMode, LogicalMap, NoiseAssignment};

const MODES: [(&str, ExecMode); 2] = [("sequential", ExecMode::Sequential), ("parallel", ExecMode::Parallel)];

fn logical_chi(c: &mut Criterion) {
    let map = LogicalMap::steane();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let channels = (0..7).map(|_| random_cptp(&mut rng, 0.3).unwrap()).collect();
    let general = NoiseAssignment::new(channels).unwrap();
    let twirled = general.twirled();

    let mut g = c.benchmark_group("logical_chi");
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::new("general", name), &mode, |b, &m| b.iter(|| map.logical_chi(&general, m).unwrap()));
        g.bench_with_input(BenchmarkId::new("diagonal", name), &mode, |b, &m| b.iter(|| map.logical_chi(&twirled, m).unwrap()));
    }
    g.finish();
}

fn haar_average(c: &mut Criterion) {
    let map = LogicalMap::steane();
    let quad = HaarQuadrature { n_theta: 4, n_phi: 8 };
    let mut g = c.benchmark_group("haar_average_level2");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_function(name, |b| b.iter(|| haar_average_gains(&map, 2, 0.3, &quad, mode).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, logical_chi, haar_average);
criterion_main!(benches);
